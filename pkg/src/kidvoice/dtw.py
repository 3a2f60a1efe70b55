"""Banded dynamic time warping between feature sequences.

Alignment uses symmetric steps {(1,0), (0,1), (1,1)} over local Euclidean
distances, accumulated from the first cell to the last, and is normalized
by the sum of the two lengths. A Sakoe-Chiba band keeps the path near the
diagonal; the band is always widened enough that the end cell stays
reachable.
"""

import math

import numpy as np
from numba import njit

from .errors import DimMismatch, EmptySequence


def band_width(n: int, m: int, band_fraction: float) -> int:
    """Cells (i, j) with |i - j| <= width are inside the band (1-based)."""
    return max(math.ceil(band_fraction * max(n, m)), abs(n - m) + 1)


@njit(cache=True)
def _accumulate(a, b, width):  # pragma: no cover - exercised via dtw_distance
    n, m = a.shape[0], b.shape[0]
    d = a.shape[1]
    prev = np.full(m + 1, np.inf)
    curr = np.full(m + 1, np.inf)
    prev[0] = 0.0
    for i in range(1, n + 1):
        for j in range(m + 1):
            curr[j] = np.inf
        lo = i - width if i - width > 1 else 1
        hi = i + width if i + width < m else m
        for j in range(lo, hi + 1):
            s = 0.0
            for k in range(d):
                diff = a[i - 1, k] - b[j - 1, k]
                s += diff * diff
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if curr[j - 1] < best:
                best = curr[j - 1]
            curr[j] = math.sqrt(s) + best
        prev, curr = curr, prev
    return prev[m]


def _as_matrix(x) -> np.ndarray:
    arr = np.asarray(getattr(x, "vectors", x), dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return np.ascontiguousarray(arr)


def dtw_distance(a, b, band_fraction: float = 0.2) -> float:
    """Normalized DTW distance between two feature sequences.

    Accepts FeatureMatrix objects or plain 2-D arrays (1-D inputs are
    treated as single-coefficient sequences). The accumulated path cost is
    divided by (len(a) + len(b)).
    """
    am, bm = _as_matrix(a), _as_matrix(b)
    if am.shape[0] == 0 or bm.shape[0] == 0:
        raise EmptySequence("DTW inputs must be non-empty")
    if am.shape[1] != bm.shape[1]:
        raise DimMismatch(f"feature dims differ: {am.shape[1]} vs {bm.shape[1]}")
    width = band_width(am.shape[0], bm.shape[0], band_fraction)
    raw = _accumulate(am, bm, width)
    return float(raw) / (am.shape[0] + bm.shape[0])
