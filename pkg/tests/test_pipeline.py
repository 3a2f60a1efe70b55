import numpy as np

from kidvoice.audio import PreprocessConfig
from kidvoice.features import FeatureConfig
from kidvoice.pipeline import FrontEnd

from .conftest import sine_wav


class TestFrontEnd:
    def test_wav_to_features_shape(self):
        fe = FrontEnd()
        feat = fe.features_from_wav(sine_wav(seconds=1.0), meta="u1")
        assert feat.vectors.shape == (98, 13)
        assert feat.meta == "u1"

    def test_warp_variants_cover_grid_and_match_plain_at_unity(self):
        fe = FrontEnd()
        frames = fe.frames_from_wav(sine_wav(seconds=0.5))
        variants = fe.warp_variants(frames)
        assert set(variants) == set(fe.feat_cfg.vtln_grid)
        plain = fe.features_from_frames(frames)
        assert np.array_equal(variants[1.0].vectors, plain.vectors)

    def test_warping_changes_features(self):
        fe = FrontEnd()
        frames = fe.frames_from_wav(sine_wav(seconds=0.5))
        variants = fe.warp_variants(frames)
        assert not np.array_equal(variants[0.8].vectors, variants[1.2].vectors)

    def test_denoise_flag_changes_features(self):
        rng = np.random.default_rng(4)
        t = np.arange(8000) / 16000
        noisy = 0.4 * np.sin(2 * np.pi * 500 * t) + 0.05 * rng.normal(size=8000)
        from .conftest import make_wav

        wav = make_wav(noisy)
        plain = FrontEnd(PreprocessConfig(denoise_enabled=False)).features_from_wav(wav)
        cleaned = FrontEnd(PreprocessConfig(denoise_enabled=True)).features_from_wav(wav)
        assert plain.vectors.shape == cleaned.vectors.shape
        assert not np.array_equal(plain.vectors, cleaned.vectors)

    def test_filterbank_cache_reuses_instances(self):
        fe = FrontEnd()
        assert fe.filterbank(0.9) is fe.filterbank(0.9)

    def test_custom_configs_respected(self):
        fe = FrontEnd(PreprocessConfig(frame_ms=20.0, hop_ms=10.0), FeatureConfig(n_coeffs=10))
        feat = fe.features_from_wav(sine_wav(seconds=0.5))
        assert feat.vectors.shape[1] == 10
