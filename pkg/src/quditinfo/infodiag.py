"""Geometry of the (linear entropy, von Neumann entropy) information diagram.

The allowed region for dimension ``d`` is bounded above by the family

    max:   ((1 + (d-1) eps)/d, (1 - eps)/d, ..., (1 - eps)/d),   eps in [0, 1)

and below by the piecewise family

    min_k: ((1-eps)/k, ..., (1-eps)/k, eps, 0, ..., 0),          eps in (0, 1/(1+k)]

for k = 1..d-1. Extending min_k to eps in (1/(1+k), 1] gives the inner
curves that split the region by rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import xlogy

from .spectra import DensitySpectrum, InfoPoint

BOUNDS_TOL = 1e-9


class FamilyKind(str, Enum):
    MAX = "max"
    MIN = "min"
    INNER = "inner"


class AsymptoticRegime(str, Enum):
    PURE_MAX = "pure-max"
    PURE_MIN1 = "pure-min1"
    MIXED_CORNER = "mixed-corner"


@dataclass(frozen=True)
class ExtremalFamily:
    kind: FamilyKind
    d: int
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.kind is not FamilyKind.MAX and not 1 <= self.k <= self.d - 1:
            raise ValueError(f"k must lie in [1, {self.d - 1}], got {self.k}")

    @property
    def eps_range(self) -> tuple[float, float]:
        if self.kind is FamilyKind.MAX:
            return 0.0, 1.0
        split = 1.0 / (1 + self.k)
        if self.kind is FamilyKind.MIN:
            return 0.0, split
        return split, 1.0

    def contains(self, eps: float) -> bool:
        lo, hi = self.eps_range
        if self.kind is FamilyKind.MAX:
            return lo <= eps < hi
        return lo < eps <= hi

    def eps_grid(self, samples: int) -> np.ndarray:
        """``samples`` equally spaced parameters covering the family's range."""
        lo, hi = self.eps_range
        grid = np.linspace(lo, hi, samples + 1)
        return grid[:-1] if self.kind is FamilyKind.MAX else grid[1:]


def _check_eps(f: ExtremalFamily, eps: float) -> None:
    if not f.contains(eps):
        raise ValueError(f"eps={eps!r} outside the range of {f.kind.value} family (k={f.k})")


def _spectrum_values(kind: FamilyKind, d: int, k: int, eps: float) -> np.ndarray:
    if kind is FamilyKind.MAX:
        v = np.full(d, (1.0 - eps) / d)
        v[0] = (1.0 + (d - 1) * eps) / d
        return v
    v = np.zeros(d)
    v[:k] = (1.0 - eps) / k
    v[k] = eps
    return v


def extremal_spectrum(f: ExtremalFamily, eps: float) -> DensitySpectrum:
    _check_eps(f, eps)
    return DensitySpectrum(_spectrum_values(f.kind, f.d, f.k, eps))


def _closed_form(kind: FamilyKind, d: int, k: int, eps: float) -> tuple[float, float]:
    ln_d = math.log(d)
    if kind is FamilyKind.MAX:
        lin = 1.0 - eps**2
        small = (1.0 - eps) / d
        big = (1.0 + (d - 1) * eps) / d
        vn = -((d - 1) * xlogy(small, small) + xlogy(big, big)) / ln_d
    else:
        lin = d / (d - 1) * (1.0 - eps**2 - (1.0 - eps) ** 2 / k)
        vn = (-xlogy(1.0 - eps, 1.0 - eps) - xlogy(eps, eps) + (1.0 - eps) * math.log(k)) / ln_d
    return float(min(max(lin, 0.0), 1.0)), float(min(max(vn, 0.0), 1.0))


def boundary_entropies(f: ExtremalFamily, eps: float) -> InfoPoint:
    _check_eps(f, eps)
    return InfoPoint(*_closed_form(f.kind, f.d, f.k, eps))


def asymptotic_S_of_L(d: int, regime: AsymptoticRegime, L: float) -> float:
    """Leading-order S(L) near the pure corner (max / min_1) or the mixed corner."""
    regime = AsymptoticRegime(regime)
    if not 0.0 < L <= 1.0:
        raise ValueError(f"L={L!r} outside (0, 1]")
    ln_d = math.log(d)
    if regime is AsymptoticRegime.MIXED_CORNER:
        return 1.0 - (d - 1) / (2.0 * ln_d) * (1.0 - L)
    slope = 1.0 + math.log(2 * d)
    if regime is AsymptoticRegime.PURE_MIN1:
        slope -= math.log(d - 1)
    return (d - 1) / (2.0 * d * ln_d) * (slope * L - L * math.log(L))


# --- inversion of the boundary families -------------------------------------


def _min_branch_L_range(d: int, k: int) -> tuple[float, float]:
    scale = d / (d - 1)
    return scale * (1.0 - 1.0 / k), scale * k / (k + 1)


def _branch_eps(d: int, k: int, L: float, inner: bool) -> float:
    # L = d/(d-1) (1 - eps^2 - (1-eps)^2/k)  <=>  (k+1) eps^2 - 2 eps - (k-1-k c) = 0
    c = L * (d - 1) / d
    disc = max(k * (k - (k + 1) * c), 0.0)
    s = math.sqrt(disc)
    if inner:
        return (1.0 + s) / (k + 1)
    # (1 - s)/(k+1) rewritten to avoid cancellation for small L
    return (1.0 - k * k + k * (k + 1) * c) / ((k + 1) * (1.0 + s))


def max_boundary_S(d: int, L: float) -> float:
    if L <= 0.0:
        return 0.0
    eps = math.sqrt(max(1.0 - L, 0.0))
    return _closed_form(FamilyKind.MAX, d, 1, eps)[1]


def min_boundary_S(d: int, L: float) -> float:
    if L <= 0.0:
        return 0.0
    best = math.inf
    for k in range(1, d):
        lo, hi = _min_branch_L_range(d, k)
        if lo - 1e-15 <= L <= hi + 1e-15:
            eps = min(max(_branch_eps(d, k, L, inner=False), 0.0), 1.0 / (k + 1))
            best = min(best, _closed_form(FamilyKind.MIN, d, k, eps)[1])
    return best


def inner_curve_S(d: int, k: int, L: float) -> float:
    """S on the inner curve of index ``k`` at linear entropy ``L``.

    Returns ``nan`` when ``L`` lies beyond the curve's reach (the uniform
    spectrum on ``k+1`` levels).
    """
    _, top = _min_branch_L_range(d, k)
    if L > top + 1e-15:
        return math.nan
    if L <= 0.0:
        return 0.0
    eps = min(max(_branch_eps(d, k, min(L, top), inner=True), 1.0 / (k + 1)), 1.0)
    return _closed_form(FamilyKind.INNER, d, k, eps)[1]


def von_neumann_bounds(d: int, L: float) -> tuple[float, float]:
    """(S_min, S_max) over all spectra of dimension ``d`` with linear entropy ``L``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 0.0 <= L <= 1.0:
        raise ValueError(f"L={L!r} outside [0, 1]")
    if L == 0.0:
        return 0.0, 0.0
    if L == 1.0:
        return 1.0, 1.0
    s_min = min_boundary_S(d, L)
    s_max = max_boundary_S(d, L)
    return min(s_min, s_max), s_max


def inside_diagram(d: int, p: InfoPoint, tol: float = BOUNDS_TOL) -> bool:
    L = min(max(p.L, 0.0), 1.0)
    lo, hi = von_neumann_bounds(d, L)
    return lo - tol <= p.S <= hi + tol


def minimal_rank_region(d: int, p: InfoPoint, tol: float = BOUNDS_TOL) -> int:
    """Smallest rank a spectrum located at ``p`` can have.

    The inner curve of index ``k`` is the upper envelope of all rank-(k+1)
    spectra, so a point strictly above it needs rank > k+1. The returned value
    is ``k+1`` for the first inner curve the point sits on or below; a point
    exactly on a curve takes the lower value. The pure corner (0, 0) returns 1.
    """
    if not inside_diagram(d, p, tol):
        lo, hi = von_neumann_bounds(d, min(max(p.L, 0.0), 1.0))
        raise ValueError(f"point {p} outside the diagram (S bounds [{lo:.6g}, {hi:.6g}])")
    if p.L <= tol and p.S <= tol:
        return 1
    for k in range(1, d - 1):
        s_bar = inner_curve_S(d, k, p.L)
        if not math.isnan(s_bar) and p.S <= s_bar + tol:
            return k + 1
    return d
