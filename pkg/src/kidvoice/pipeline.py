"""Front-end composition: WAV bytes to normalized feature matrices.

Order of operations: decode -> pre-emphasis -> framing -> magnitude
spectrum -> optional spectral subtraction -> mel filterbank (at a given
warp) -> log/DCT -> optional cepstral mean normalization.
"""

from .audio import (
    AudioBuffer,
    FrameSequence,
    PreprocessConfig,
    decode_wav,
    frame_signal,
    pre_emphasize,
    spectral_subtract,
)
from .features import (
    FeatureConfig,
    FeatureMatrix,
    build_mel_filterbank,
    cepstra_from_energies,
    cepstral_mean_normalize,
    magnitude_spectra,
)


class FrontEnd:
    """Caches one filterbank per warp factor; otherwise stateless."""

    def __init__(
        self,
        pre_cfg: PreprocessConfig | None = None,
        feat_cfg: FeatureConfig | None = None,
    ):
        self.pre_cfg = pre_cfg or PreprocessConfig()
        self.feat_cfg = feat_cfg or FeatureConfig()
        self._filterbanks: dict = {}

    def filterbank(self, warp: float = 1.0):
        if warp not in self._filterbanks:
            self._filterbanks[warp] = build_mel_filterbank(self.feat_cfg, warp)
        return self._filterbanks[warp]

    def frames_from_wav(self, data: bytes) -> FrameSequence:
        buf = decode_wav(data)
        buf = pre_emphasize(buf, self.pre_cfg.preemph_alpha)
        return frame_signal(buf, self.pre_cfg)

    def features_from_frames(
        self, frames: FrameSequence, warp: float = 1.0, meta: str = ""
    ) -> FeatureMatrix:
        mag = magnitude_spectra(frames, self.feat_cfg.n_fft)
        mag = spectral_subtract(mag, self.pre_cfg)
        energies = mag @ self.filterbank(warp).weights.T
        vectors = cepstra_from_energies(
            energies, self.feat_cfg.n_coeffs, self.feat_cfg.log_floor
        )
        feat = FeatureMatrix(vectors=vectors, meta=meta)
        if self.feat_cfg.cmn_enabled:
            feat = cepstral_mean_normalize(feat)
        return feat

    def features_from_wav(self, data: bytes, warp: float = 1.0, meta: str = "") -> FeatureMatrix:
        return self.features_from_frames(self.frames_from_wav(data), warp, meta)

    def warp_variants(self, frames: FrameSequence, meta: str = "") -> dict:
        """Input features re-extracted at every warp in the configured grid."""
        return {
            warp: self.features_from_frames(frames, warp, meta)
            for warp in self.feat_cfg.vtln_grid
        }
