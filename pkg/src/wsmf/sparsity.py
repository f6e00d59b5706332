"""Per-scale splitting of coefficients into a budgeted small part and a
sparse large part, with the derived admissible-p bound.

At each scale j the coefficients are sorted by magnitude and the longest
prefix whose q-th power sum stays within C * 2**j / j**(2q) forms the
"small" set K_j; the complement L_j collects the sparse large coefficients.
The sparsity exponent delta is the log-log growth rate of |L_j|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DeltaOutOfRange, NonPositiveParams
from .wavelet import CoefficientPyramid

__all__ = ["SparsitySplit", "sparsity_split", "admissible_p_bound"]


@dataclass(frozen=True)
class SparsitySplit:
    """Result of the per-scale budget split.

    ``small_sets[j]`` / ``large_sets[j]`` partition the interior indices of
    scale j; ``totals[j]`` (M_j) counts them and ``small_counts[j]`` (N_j) is
    the maximal budget-respecting prefix. ``delta`` is -inf when the budget
    absorbs everything at every scale.
    """

    small_sets: dict[int, np.ndarray]
    large_sets: dict[int, np.ndarray]
    delta: float
    q: float
    budget_constant: float
    totals: dict[int, int]
    small_counts: dict[int, int]
    budgets: dict[int, float]


MONOTONE_SLACK = 0.5  # bits; dips smaller than this do not trigger the refit


def _upper_envelope_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope, refit on the upper residual half when the
    sequence dips by more than half a bit (finite-data limsup surrogate)."""
    slope, intercept = np.polyfit(x, y, 1)
    if np.all(np.diff(y) >= -MONOTONE_SLACK):
        return float(slope)
    res = y - (slope * x + intercept)
    keep = res >= np.median(res)
    if keep.sum() < 2:
        return float(slope)
    return float(np.polyfit(x[keep], y[keep], 1)[0])


def sparsity_split(
    pyramid: CoefficientPyramid,
    q: float,
    budget_constant: float = 1.0,
    j1: int | None = None,
    j2: int | None = None,
) -> SparsitySplit:
    """Split each scale's coefficients under the q-th power budget.

    Parameters
    ----------
    pyramid : CoefficientPyramid
        Scales j >= 2 participate (interior coefficients only).
    q : float
        Moment of the budget; must be positive.
    budget_constant : float
        The constant C of the per-scale budget C * 2**j / j**(2q).
    j1, j2 : int, optional
        Restrict the split (and the delta regression) to these scales.

    Notes
    -----
    Ties among equal magnitudes are broken by position index, so the split
    is deterministic. N_j is maximal: moving the smallest member of L_j into
    K_j would break the budget.
    """
    if q <= 0 or budget_constant <= 0:
        raise NonPositiveParams("q and the budget constant must be positive")
    small, large, totals, counts, budgets = {}, {}, {}, {}, {}
    xs, ys = [], []
    for j in pyramid.scales:
        if j < 2 or (j1 is not None and j < j1) or (j2 is not None and j > j2):
            continue
        idx = np.nonzero(pyramid.interior[j])[0]
        mags = np.abs(pyramid.levels[j][idx])
        order = np.argsort(mags, kind="stable")
        powers = mags[order] ** q
        prefix = np.cumsum(powers)
        budget = budget_constant * 2.0**j / j ** (2 * q)
        n_small = int(np.searchsorted(prefix, budget, side="right"))
        small[j] = np.sort(idx[order[:n_small]])
        large[j] = np.sort(idx[order[n_small:]])
        totals[j] = idx.size
        counts[j] = n_small
        budgets[j] = budget
        if idx.size > n_small:
            xs.append(float(j))
            ys.append(math.log2(idx.size - n_small))
    if len(xs) >= 2:
        delta = _upper_envelope_slope(np.array(xs), np.array(ys))
    else:
        delta = -math.inf
    return SparsitySplit(
        small_sets=small,
        large_sets=large,
        delta=delta,
        q=q,
        budget_constant=budget_constant,
        totals=totals,
        small_counts=counts,
        budgets=budgets,
    )


def admissible_p_bound(delta: float, hmin: float) -> float | None:
    """Upper bound on usable p derived from sparsity and uniform regularity.

    Returns None when hmin >= 0 (the data is modelled by a locally bounded
    function, so every p is admissible through that route); otherwise the
    bound (1 - delta) / (-hmin). delta = -inf yields an unbounded range.
    """
    if delta >= 1.0:
        raise DeltaOutOfRange("sparsity exponent must be < 1")
    if hmin >= 0.0:
        return None
    return (1.0 - delta) / (-hmin)
