"""Signal preprocessing: WAV decoding, pre-emphasis, framing, spectral subtraction.

Everything downstream works at the canonical 16 kHz rate; other supported
input rates are resampled on ingestion.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import CorruptHeader, EmptySignal, TooFewFrames, UnsupportedFormat

CANONICAL_RATE = 16000
SUPPORTED_RATES = (16000, 44100, 48000)


@dataclass(frozen=True)
class AudioBuffer:
    """Mono waveform, amplitudes in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int = CANONICAL_RATE

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class FrameSequence:
    """Windowed analysis frames, one per row."""

    frames: np.ndarray  # (n_frames, frame_len)
    frame_len: int
    hop: int
    sample_rate: int = CANONICAL_RATE

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]


@dataclass(frozen=True)
class PreprocessConfig:
    """Front-end constants; defaults are conventional wideband choices."""

    preemph_alpha: float = 0.97
    frame_ms: float = 25.0
    hop_ms: float = 10.0
    noise_frames: int = 5
    noise_floor_beta: float = 0.1
    denoise_enabled: bool = False

    def __post_init__(self):
        if not 0.0 <= self.preemph_alpha < 1.0:
            raise ValueError("preemph_alpha must be in [0, 1)")
        if not 0.0 < self.noise_floor_beta < 1.0:
            raise ValueError("noise_floor_beta must be in (0, 1)")
        if self.noise_frames < 1:
            raise ValueError("noise_frames must be positive")
        frame = self.frame_ms * CANONICAL_RATE / 1000.0
        hop = self.hop_ms * CANONICAL_RATE / 1000.0
        if frame != int(frame) or hop != int(hop):
            raise ValueError("frame_ms/hop_ms must be whole sample counts at 16 kHz")
        if not frame > hop > 0:
            raise ValueError("frame length must exceed hop, both positive")

    @property
    def frame_len(self) -> int:
        return int(self.frame_ms * CANONICAL_RATE / 1000.0)

    @property
    def hop(self) -> int:
        return int(self.hop_ms * CANONICAL_RATE / 1000.0)


def _resample_linear(x: np.ndarray, src_rate: int, dst_rate: int) -> np.ndarray:
    n_out = int(round(len(x) * dst_rate / src_rate))
    if n_out == 0 or len(x) == 0:
        return np.zeros(0)
    t_out = np.arange(n_out) / dst_rate
    t_in = np.arange(len(x)) / src_rate
    return np.interp(t_out, t_in, x)


def decode_wav(data: bytes) -> AudioBuffer:
    """Decode 16-bit PCM mono RIFF/WAVE bytes into a 16 kHz AudioBuffer.

    Inputs at 44.1/48 kHz are linearly resampled to the canonical rate.
    Raises UnsupportedFormat for stereo, non-PCM or unlisted rates, and
    CorruptHeader for anything that is not a parseable WAV stream.
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise CorruptHeader("missing RIFF/WAVE signature")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise CorruptHeader("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise CorruptHeader("data chunk truncated")
            payload = body
        # chunks are word-aligned
        pos += 8 + chunk_size + (chunk_size & 1)

    if fmt is None or payload is None:
        raise CorruptHeader("fmt or data chunk missing")

    audio_format, channels, rate, _byte_rate, _block_align, bits = fmt
    if audio_format != 1:
        raise UnsupportedFormat(f"only PCM is supported, got format {audio_format}")
    if channels != 1:
        raise UnsupportedFormat(f"only mono is supported, got {channels} channels")
    if bits != 16:
        raise UnsupportedFormat(f"only 16-bit samples are supported, got {bits}")
    if rate not in SUPPORTED_RATES:
        raise UnsupportedFormat(f"sample rate {rate} not in {SUPPORTED_RATES}")

    samples = np.frombuffer(payload[: len(payload) - (len(payload) % 2)], dtype="<i2")
    samples = samples.astype(np.float64) / 32768.0
    if rate != CANONICAL_RATE:
        samples = _resample_linear(samples, rate, CANONICAL_RATE)
    return AudioBuffer(samples=samples, sample_rate=CANONICAL_RATE)


def pre_emphasize(buf: AudioBuffer, alpha: float = 0.97) -> AudioBuffer:
    """First-order high-pass y[n] = x[n] - alpha * x[n-1], y[0] = x[0]."""
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must be in [0, 1)")
    x = np.asarray(buf.samples, dtype=np.float64)
    if len(x) == 0:
        return AudioBuffer(samples=x, sample_rate=buf.sample_rate)
    y = np.concatenate(([x[0]], x[1:] - alpha * x[:-1]))
    return AudioBuffer(samples=y, sample_rate=buf.sample_rate)


def frame_signal(buf: AudioBuffer, cfg: PreprocessConfig) -> FrameSequence:
    """Split a buffer into Hamming-windowed frames at the configured hop.

    Trailing partial frames are discarded; an input shorter than one frame
    is zero-padded to exactly one frame.
    """
    x = np.asarray(buf.samples, dtype=np.float64)
    if len(x) == 0:
        raise EmptySignal("cannot frame an empty signal")
    frame_len, hop = cfg.frame_len, cfg.hop
    if len(x) < frame_len:
        x = np.pad(x, (0, frame_len - len(x)))
    windows = np.lib.stride_tricks.sliding_window_view(x, frame_len)[::hop]
    frames = windows * np.hamming(frame_len)
    return FrameSequence(
        frames=frames, frame_len=frame_len, hop=hop, sample_rate=buf.sample_rate
    )


def spectral_subtract(mag_spectra: np.ndarray, cfg: PreprocessConfig) -> np.ndarray:
    """Subtract a per-bin noise estimate taken from the leading frames.

    The estimate is the mean magnitude over the first ``noise_frames``
    frames; results are floored at ``beta * noise`` per bin. With
    ``denoise_enabled`` off this is the identity.
    """
    mag = np.asarray(mag_spectra, dtype=np.float64)
    if mag.ndim != 2:
        raise ValueError("expected a 2-D magnitude matrix")
    if np.any(mag < 0):
        raise ValueError("magnitudes must be non-negative")
    if not cfg.denoise_enabled:
        return mag.copy()
    if mag.shape[0] < cfg.noise_frames:
        raise TooFewFrames(
            f"need at least {cfg.noise_frames} frames, got {mag.shape[0]}"
        )
    noise = mag[: cfg.noise_frames].mean(axis=0)
    return np.maximum(mag - noise, cfg.noise_floor_beta * noise)
