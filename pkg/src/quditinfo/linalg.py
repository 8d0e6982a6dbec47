"""Small numerical kernel shared by the rest of the package.

Two things live here: a checked dense Hermitian eigensolver and a sign-aware
log-domain representation for ratios of large powers such as
``L_minus**(N-1) / L_plus**N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERM_TOL = 1e-12
RESIDUAL_TOL = 1e-9


def check_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    dev = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    if dev > tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: max |m - m^H| = {dev:.3e} "
            f"exceeds {tol:.0e} * {scale:.3e}"
        )
    return m


def hermitian_eigensystem(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of ``m``.

    The input is validated against :data:`HERM_TOL` (relative to its largest
    entry) and symmetrized before the LAPACK call, so round-off asymmetry does
    not leak into the spectrum.
    """
    m = check_hermitian(m)
    sym = 0.5 * (m + m.conj().T)
    if np.isrealobj(sym):
        sym = sym.astype(float, copy=False)
    vals, vecs = np.linalg.eigh(sym)
    return vals, vecs


@dataclass(frozen=True)
class SignedLogValue:
    """``sign * exp(log_magnitude)``; ``sign == 0`` encodes an exact zero."""

    sign: int
    log_magnitude: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.value


def signed_power_ratio(base: float, ref_base: float, m: int, n: int) -> SignedLogValue:
    """Return ``base**m / ref_base**n`` without forming either power."""
    if ref_base <= 0:
        raise ValueError(f"ref_base must be positive, got {ref_base}")
    if m < 0 or n < 0:
        raise ValueError("exponents must be non-negative")
    if m == 0:
        return SignedLogValue(1, -n * math.log(ref_base))
    if base == 0:
        return SignedLogValue(0, -math.inf)
    sign = -1 if (base < 0 and m % 2 == 1) else 1
    return SignedLogValue(sign, m * math.log(abs(base)) - n * math.log(ref_base))
