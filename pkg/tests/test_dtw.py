import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kidvoice.dtw import band_width, dtw_distance
from kidvoice.errors import DimMismatch, EmptySequence
from kidvoice.features import FeatureMatrix

from .oracle_dtw import brute_force_dtw


def rand_pair(seed, max_len=6, max_dim=2):
    rng = np.random.default_rng(seed)
    dim = rng.integers(1, max_dim + 1)
    a = rng.normal(size=(rng.integers(1, max_len + 1), dim))
    b = rng.normal(size=(rng.integers(1, max_len + 1), dim))
    return a, b


class TestWorkedExamples:
    def test_identical_sequences(self):
        x = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        assert dtw_distance(x, x) == 0.0

    def test_three_vs_two(self):
        # raw optimal cost 1 over lengths 3 + 2, checked by hand enumeration
        assert dtw_distance(np.array([1.0, 2.0, 3.0]), np.array([1.0, 3.0]), 0.2) == pytest.approx(0.2)

    def test_degenerate_band_still_feasible(self):
        assert dtw_distance(np.array([1.0]), np.array([1.0, 1.0, 1.0, 1.0]), 0.0) == 0.0

    def test_accepts_feature_matrices(self):
        a = FeatureMatrix(np.array([[0.0], [1.0]]))
        b = FeatureMatrix(np.array([[0.0], [1.0]]))
        assert dtw_distance(a, b) == 0.0


class TestContracts:
    def test_empty_raises(self):
        with pytest.raises(EmptySequence):
            dtw_distance(np.zeros((0, 2)), np.ones((3, 2)))

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            dtw_distance(np.ones((3, 2)), np.ones((3, 3)))

    def test_band_width_widened_for_length_gap(self):
        assert band_width(1, 4, 0.0) == 4
        assert band_width(10, 10, 0.2) == 2
        assert band_width(10, 10, 1.0) == 10


class TestProperties:
    @given(st.integers(0, 2**31 - 1))
    def test_symmetry(self, seed):
        a, b = rand_pair(seed, max_len=12, max_dim=4)
        assert dtw_distance(a, b, 0.2) == pytest.approx(dtw_distance(b, a, 0.2), abs=1e-9)

    @given(st.integers(0, 2**31 - 1))
    def test_self_distance_zero(self, seed):
        a, _ = rand_pair(seed, max_len=12, max_dim=4)
        assert dtw_distance(a, a, 0.2) == 0.0

    @given(st.integers(0, 2**31 - 1))
    def test_matches_full_band_oracle(self, seed):
        a, b = rand_pair(seed)
        assert dtw_distance(a, b, 1.0) == pytest.approx(
            brute_force_dtw(a.tolist(), b.tolist()), abs=1e-9
        )

    @given(st.integers(0, 2**31 - 1))
    def test_matches_banded_oracle(self, seed):
        a, b = rand_pair(seed)
        width = band_width(len(a), len(b), 0.2)
        assert dtw_distance(a, b, 0.2) == pytest.approx(
            brute_force_dtw(a.tolist(), b.tolist(), width=width), abs=1e-9
        )
