"""Global-statistic complexity baselines for attribution vectors.

These operate on the flattened absolute attribution distribution and are
invariant under permutation and positive rescaling. They are the standard
points of comparison for the structural compactness score: Gini sparseness
and entropy complexity summarize the value distribution, effective
complexity counts values above a tolerance, and Pearson correlation relates
metric columns.
"""

from __future__ import annotations

import numpy as np

from .errors import AllZeroError, LengthMismatchError, ZeroVarianceError


def _flat_abs(values) -> np.ndarray:
    a = np.abs(np.asarray(values, dtype=np.float64).ravel())
    if a.size == 0:
        raise ValueError("attribution vector is empty")
    if not np.isfinite(a).all():
        raise ValueError("attribution vector contains NaN or Inf")
    return a


def sparseness_gini(values) -> float:
    """Gini index of the sorted absolute attributions.

    G = sum_i (2i - n - 1) |a|_(i) / (n * sum|a|) over ascending-sorted
    |a| with 1-based i. Ranges from 0 (constant vector) to (n-1)/n
    (one-hot). Raises AllZeroError when sum|a| == 0.
    """
    a = _flat_abs(values)
    total = a.sum()
    if total <= 0.0:
        raise AllZeroError("sparseness undefined for an all-zero vector")
    a = np.sort(a)
    n = a.size
    coef = 2.0 * np.arange(1, n + 1, dtype=np.float64) - n - 1
    return float((coef * a).sum() / (n * total))


def complexity_entropy(values) -> float:
    """Shannon entropy (nats) of the fractional absolute-attribution distribution.

    mu_i = |a_i| / sum|a|; returns -sum mu_i ln mu_i with 0 ln 0 := 0.
    Ranges from 0 (one-hot) to ln n (uniform). Raises AllZeroError when
    sum|a| == 0.
    """
    a = _flat_abs(values)
    total = a.sum()
    if total <= 0.0:
        raise AllZeroError("complexity undefined for an all-zero vector")
    mu = a / total
    nz = mu[mu > 0.0]
    return float(-(nz * np.log(nz)).sum())


def effective_complexity(values, eps: float) -> int:
    """Count of attributions whose absolute value strictly exceeds `eps`."""
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    return int((_flat_abs(values) > eps).sum())


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient in [-1, 1].

    Raises LengthMismatchError unless both sequences share a length >= 2,
    and ZeroVarianceError if either is constant.
    """
    x = np.asarray(xs, dtype=np.float64).ravel()
    y = np.asarray(ys, dtype=np.float64).ravel()
    if x.size != y.size:
        raise LengthMismatchError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise LengthMismatchError("need at least 2 paired observations")
    vx = x - x.mean()
    vy = y - y.mean()
    sx = float((vx * vx).sum())
    sy = float((vy * vy).sum())
    if sx == 0.0 or sy == 0.0:
        raise ZeroVarianceError("correlation undefined for a constant sequence")
    r = float((vx * vy).sum() / np.sqrt(sx * sy))
    return min(1.0, max(-1.0, r))
