"""MFCC feature extraction with warped mel filterbanks and cepstral mean removal.

The filterbank supports a linear frequency warp so the recognizer can
compensate shorter vocal tracts by searching a small grid of warp factors.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .audio import FrameSequence
from .errors import BadConfig, ShapeMismatch

# 0.80 .. 1.20 in steps of 0.02
DEFAULT_VTLN_GRID = tuple(round(0.80 + 0.02 * i, 2) for i in range(21))

WARP_MIN, WARP_MAX = 0.8, 1.2


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True)
class FeatureConfig:
    sample_rate: int = 16000
    n_fft: int = 512
    n_filters: int = 26
    n_coeffs: int = 13
    fmin: float = 0.0
    fmax: float = 8000.0
    log_floor: float = 1e-10
    cmn_enabled: bool = True
    vtln_grid: tuple = DEFAULT_VTLN_GRID

    def __post_init__(self):
        if not 0 <= self.fmin < self.fmax <= self.sample_rate / 2:
            raise BadConfig("need 0 <= fmin < fmax <= sample_rate/2")
        if self.n_coeffs > self.n_filters:
            raise BadConfig("n_coeffs must not exceed n_filters")
        if self.n_fft < 2 or self.n_filters < 1 or self.n_coeffs < 1:
            raise BadConfig("n_fft, n_filters and n_coeffs must be positive")
        for w in self.vtln_grid:
            if not WARP_MIN <= w <= WARP_MAX:
                raise BadConfig(f"warp {w} outside [{WARP_MIN}, {WARP_MAX}]")


@dataclass(frozen=True)
class MelFilterbank:
    """Triangular mel filters evaluated at (optionally warped) FFT bin centres."""

    weights: np.ndarray  # (n_filters, n_fft // 2 + 1)
    n_fft: int
    sample_rate: int
    warp_alpha: float


@dataclass
class FeatureMatrix:
    """Per-utterance sequence of cepstral vectors, one frame per row."""

    vectors: np.ndarray  # (n_frames, n_coeffs)
    meta: str = ""

    @property
    def n_frames(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_coeffs(self) -> int:
        return self.vectors.shape[1]


def build_mel_filterbank(cfg: FeatureConfig, warp_alpha: float = 1.0) -> MelFilterbank:
    """Construct triangular filters on a mel grid between fmin and fmax.

    Each FFT bin contributes at its warped frequency ``warp_alpha * f``;
    the triangles are interpolated in the mel domain, so interior bins see
    filter weights that sum to one.
    """
    if not WARP_MIN <= warp_alpha <= WARP_MAX:
        raise BadConfig(f"warp_alpha {warp_alpha} outside [{WARP_MIN}, {WARP_MAX}]")
    n_bins = cfg.n_fft // 2 + 1
    freqs = np.arange(n_bins) * cfg.sample_rate / cfg.n_fft
    mel_pts = np.linspace(hz_to_mel(cfg.fmin), hz_to_mel(cfg.fmax), cfg.n_filters + 2)
    m = hz_to_mel(warp_alpha * freqs)

    left = mel_pts[:-2, None]
    centre = mel_pts[1:-1, None]
    right = mel_pts[2:, None]
    rising = (m[None, :] - left) / (centre - left)
    falling = (right - m[None, :]) / (right - centre)
    weights = np.maximum(np.minimum(rising, falling), 0.0)
    return MelFilterbank(
        weights=weights,
        n_fft=cfg.n_fft,
        sample_rate=cfg.sample_rate,
        warp_alpha=warp_alpha,
    )


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix of size n x n (rows are basis vectors)."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    m = np.sqrt(2.0 / n) * np.cos(np.pi * k * (2 * i + 1) / (2 * n))
    m[0] /= np.sqrt(2.0)
    return m


def magnitude_spectra(frames: FrameSequence, n_fft: int) -> np.ndarray:
    """Zero-pad each frame to n_fft and return its magnitude spectrum rows."""
    if n_fft < frames.frame_len:
        raise ShapeMismatch(
            f"n_fft {n_fft} shorter than frame length {frames.frame_len}"
        )
    return np.abs(np.fft.rfft(frames.frames, n=n_fft, axis=1))


def cepstra_from_energies(
    energies: np.ndarray, n_coeffs: int, log_floor: float = 1e-10
) -> np.ndarray:
    """Log-compress filterbank energies and decorrelate with the DCT."""
    energies = np.asarray(energies, dtype=np.float64)
    logs = np.log(np.maximum(energies, log_floor))
    return logs @ dct_matrix(energies.shape[1])[:n_coeffs].T


def extract_mfcc(
    frames: FrameSequence, fb: MelFilterbank, cfg: FeatureConfig, meta: str = ""
) -> FeatureMatrix:
    """Frames -> magnitude spectrum -> mel energies -> log -> DCT-II.

    c0 is kept as a log-energy proxy; the log floor keeps silent frames
    finite.
    """
    if fb.weights.shape != (cfg.n_filters, cfg.n_fft // 2 + 1):
        raise ShapeMismatch("filterbank does not match the feature configuration")
    mag = magnitude_spectra(frames, cfg.n_fft)
    energies = mag @ fb.weights.T
    vectors = cepstra_from_energies(energies, cfg.n_coeffs, cfg.log_floor)
    return FeatureMatrix(vectors=vectors, meta=meta)


def cepstral_mean_normalize(feat: FeatureMatrix) -> FeatureMatrix:
    """Subtract the per-coefficient mean over frames (idempotent)."""
    vectors = feat.vectors - feat.vectors.mean(axis=0, keepdims=True)
    return FeatureMatrix(vectors=vectors, meta=feat.meta)


# --- binary feature container --------------------------------------------------
#
# Layout (little-endian): magic b"KVF1" | uint32 rows | uint32 cols |
# uint32 meta_len | meta utf-8 | rows*cols float64 row-major.

FEATURE_MAGIC = b"KVF1"


def features_to_bytes(feat: FeatureMatrix) -> bytes:
    meta = feat.meta.encode("utf-8")
    rows, cols = feat.vectors.shape
    header = FEATURE_MAGIC + struct.pack("<III", rows, cols, len(meta))
    return header + meta + np.ascontiguousarray(feat.vectors, dtype="<f8").tobytes()


def features_from_bytes(data: bytes) -> FeatureMatrix:
    if data[:4] != FEATURE_MAGIC:
        raise ValueError("bad feature container magic")
    rows, cols, meta_len = struct.unpack_from("<III", data, 4)
    meta = data[16 : 16 + meta_len].decode("utf-8")
    body = np.frombuffer(data, dtype="<f8", offset=16 + meta_len, count=rows * cols)
    return FeatureMatrix(vectors=body.reshape(rows, cols).copy(), meta=meta)


def save_features(feat: FeatureMatrix, path) -> None:
    with open(path, "wb") as fh:
        fh.write(features_to_bytes(feat))


def load_features(path) -> FeatureMatrix:
    with open(path, "rb") as fh:
        return features_from_bytes(fh.read())
