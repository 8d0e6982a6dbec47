"""Density spectra and their normalized linear / von Neumann entropies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NEG_CLAMP = 1e-12
TRACE_TOL = 1e-10
RANK_THRESHOLD = 1e-8
DEFAULT_DOF = 2


class DensitySpectrum:
    """Eigenvalues of a density matrix, stored in descending order.

    Tiny negative values (down to ``-NEG_CLAMP``) coming out of a numerical
    diagonalization are clamped to zero; anything more negative, or a trace
    off by more than ``TRACE_TOL``, is rejected.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        v = np.asarray(values, dtype=float).ravel()
        if v.size == 0:
            raise ValueError("empty spectrum")
        if not np.all(np.isfinite(v)):
            raise ValueError("spectrum contains non-finite values")
        if v.min() < -NEG_CLAMP:
            raise ValueError(f"negative eigenvalue {v.min():.3e} below clamp window")
        v = np.where(v < 0, 0.0, v)
        total = float(np.sum(v))
        if abs(total - 1.0) > TRACE_TOL:
            raise ValueError(f"spectrum sums to {total!r}, not 1")
        v = np.sort(v)[::-1].copy()
        v.flags.writeable = False
        self._values = v

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def d(self) -> int:
        return self._values.size

    def __len__(self) -> int:
        return self.d

    def __repr__(self) -> str:
        return f"DensitySpectrum({np.array2string(self._values, precision=6)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DensitySpectrum):
            return NotImplemented
        return self.d == other.d and np.array_equal(self._values, other._values)

    __hash__ = None


@dataclass(frozen=True)
class InfoPoint:
    """An (L, S) pair in the unit square of an information diagram."""

    L: float
    S: float

    def __post_init__(self):
        for name in ("L", "S"):
            x = getattr(self, name)
            if not (-1e-12 <= x <= 1 + 1e-12):
                raise ValueError(f"{name}={x!r} outside [0, 1]")

    def __iter__(self):
        yield self.L
        yield self.S


def _require_dim(s: DensitySpectrum) -> int:
    if s.d < 2:
        raise ValueError("entropy normalization needs d >= 2")
    return s.d


def linear_entropy(s: DensitySpectrum) -> float:
    """d/(d-1) * (1 - sum lambda_i^2), in [0, 1]."""
    d = _require_dim(s)
    purity = float(np.dot(s.values, s.values))
    return float(np.clip(d / (d - 1) * (1.0 - purity), 0.0, 1.0))


def von_neumann_entropy(s: DensitySpectrum) -> float:
    """-sum lambda_i log_d lambda_i with 0 log 0 = 0, in [0, 1]."""
    d = _require_dim(s)
    p = s.values[s.values > 0]
    h = -float(np.sum(p * np.log(p))) / np.log(d)
    return float(np.clip(h, 0.0, 1.0)) + 0.0  # no -0.0 in outputs


def info_point(s: DensitySpectrum) -> InfoPoint:
    return InfoPoint(linear_entropy(s), von_neumann_entropy(s))


def numerical_rank(s: DensitySpectrum, threshold: float = RANK_THRESHOLD) -> int:
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    r = int(np.count_nonzero(s.values > threshold))
    if r == 0:
        raise ValueError(
            f"no eigenvalue above threshold {threshold}; incompatible with unit trace"
        )
    return r


def sample_random_spectrum(
    d: int, rng: np.random.Generator, dof: float = DEFAULT_DOF
) -> DensitySpectrum:
    """Normalized vector of ``d`` independent chi-squared(dof) draws."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if dof <= 0:
        raise ValueError("dof must be positive")
    while True:
        x = rng.chisquare(dof, size=d)
        total = x.sum()
        if total > 0:
            return DensitySpectrum(x / total)
