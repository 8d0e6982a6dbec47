"""Fully symmetric N-quDit states in the occupation-number basis.

Basis order is part of the public contract: occupation vectors
``(n_1, ..., n_D)`` sorted lexicographically in descending order, so
``(N, 0, ..., 0)`` comes first and ``(0, ..., 0, N)`` last.

Levels are 1-based throughout (level 1 is the reference level with
``z_1 = 1``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from .linalg import signed_power_ratio

MAX_BASIS_SIZE = 10**6
NORM_TOL = 1e-10


def basis_size(D: int, N: int) -> int:
    return math.comb(N + D - 1, D - 1)


def _compositions(N: int, D: int):
    if D == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in _compositions(N - first, D - 1):
            yield (first, *rest)


@dataclass(frozen=True, eq=False)
class OccupationBasis:
    D: int
    N: int
    states: np.ndarray = field(repr=False)
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    def __len__(self) -> int:
        return self.dim

    def position(self, occupation) -> int:
        return self.index[tuple(int(n) for n in occupation)]


@lru_cache(maxsize=64)
def _cached_basis(D: int, N: int) -> OccupationBasis:
    states = np.array(list(_compositions(N, D)), dtype=np.int64).reshape(-1, D)
    states.flags.writeable = False
    index = {tuple(int(x) for x in row): i for i, row in enumerate(states)}
    return OccupationBasis(D, N, states, index)


def enumerate_basis(D: int, N: int, cap: int = MAX_BASIS_SIZE) -> OccupationBasis:
    """All occupation vectors with ``sum(n) == N`` over ``D`` levels."""
    if D < 2:
        raise ValueError("D must be >= 2")
    if N < 1:
        raise ValueError("N must be >= 1")
    size = basis_size(D, N)
    if size > cap:
        raise ValueError(f"basis for D={D}, N={N} has {size} states, above the cap of {cap}")
    return _cached_basis(D, N)


def _check_level(basis: OccupationBasis, level: int, lowest: int = 1) -> int:
    if not lowest <= level <= basis.D:
        raise ValueError(f"level {level} out of range [{lowest}, {basis.D}]")
    return level - 1


@lru_cache(maxsize=256)
def _spin_operator_csr(basis: OccupationBasis, i: int, j: int) -> sp.csr_matrix:
    n = basis.states
    dim = basis.dim
    if i == j:
        return sp.diags(n[:, i].astype(float), format="csr")
    src = np.flatnonzero(n[:, j] > 0)
    moved = n[src].copy()
    moved[:, j] -= 1
    moved[:, i] += 1
    dst = np.fromiter((basis.index[tuple(row)] for row in moved.tolist()), dtype=np.int64, count=len(src))
    coeff = np.sqrt(moved[:, i] * n[src, j].astype(float))
    return sp.csr_matrix((coeff, (dst, src)), shape=(dim, dim))


def spin_operator(basis: OccupationBasis, i: int, j: int, sparse: bool = False):
    """Collective operator ``S_ij = a_i^dag a_j`` as a real matrix.

    With ``sparse=True`` a CSR matrix is returned; the dense form is only
    practical for small bases.
    """
    a = _check_level(basis, i)
    b = _check_level(basis, j)
    m = _spin_operator_csr(basis, a, b)
    return m if sparse else m.toarray()


def pair_hopping(basis: OccupationBasis, i: int, j: int) -> sp.csr_matrix:
    """``S_ij @ S_ij`` built from single square roots, so it is bit-exact
    the transpose of ``pair_hopping(basis, j, i)``."""
    a = _check_level(basis, i)
    b = _check_level(basis, j)
    if a == b:
        raise ValueError("pair hopping needs distinct levels")
    n = basis.states
    src = np.flatnonzero(n[:, b] > 1)
    moved = n[src].copy()
    moved[:, b] -= 2
    moved[:, a] += 2
    dst = np.fromiter((basis.index[tuple(row)] for row in moved.tolist()), dtype=np.int64, count=len(src))
    nb = n[src, b].astype(float)
    na = moved[:, a].astype(float)
    coeff = np.sqrt(na * (na - 1) * nb * (nb - 1))
    return sp.csr_matrix((coeff, (dst, src)), shape=(basis.dim, basis.dim))


# --- states ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymmetricState:
    basis: OccupationBasis
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got shape {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {self.norm()!r} differs from 1")

    @property
    def D(self) -> int:
        return self.basis.D

    @property
    def N(self) -> int:
        return self.basis.N

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "SymmetricState") -> complex:
        if other.basis is not self.basis:
            raise ValueError("states live on different bases")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalize(self) -> "SymmetricState":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return SymmetricState(self.basis, self.amplitudes / nrm)

    def amplitude(self, occupation) -> complex:
        return complex(self.amplitudes[self.basis.position(occupation)])


def basis_state(basis: OccupationBasis, occupation) -> SymmetricState:
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.position(occupation)] = 1.0
    return SymmetricState(basis, amps)


@dataclass(frozen=True)
class PhasePoint:
    """Coherent-state label ``z = (z_2, ..., z_D)``; ``z_1 = 1`` is implicit."""

    z: tuple

    def __post_init__(self):
        z = tuple(complex(x) for x in np.atleast_1d(self.z))
        if not z:
            raise ValueError("a phase point needs at least one coordinate")
        if not all(np.isfinite(x) for x in z):
            raise ValueError("phase point entries must be finite")
        object.__setattr__(self, "z", z)

    @classmethod
    def of(cls, *z) -> "PhasePoint":
        return cls(tuple(z))

    @property
    def D(self) -> int:
        return len(self.z) + 1

    @property
    def alpha(self) -> complex:
        return self.z[0]

    @property
    def beta(self) -> complex:
        if len(self.z) < 2:
            raise AttributeError("beta is only defined for D >= 3")
        return self.z[1]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.z, dtype=complex)

    def length_squared(self) -> float:
        return 1.0 + float(np.sum(np.abs(self.array) ** 2))

    def flipped(self, bits) -> "PhasePoint":
        signs = np.where(np.asarray(bits) % 2 == 1, -1.0, 1.0)
        return PhasePoint(tuple(self.array * signs))


def _as_point(z) -> PhasePoint:
    return z if isinstance(z, PhasePoint) else PhasePoint(tuple(np.atleast_1d(z)))


def dscs(basis: OccupationBasis, z) -> SymmetricState:
    """U(D)-spin coherent state, with multinomial amplitudes built in log space."""
    z = _as_point(z)
    if z.D != basis.D:
        raise ValueError(f"phase point has D={z.D}, basis has D={basis.D}")
    n = basis.states
    N = basis.N
    log_amp = 0.5 * (gammaln(N + 1) - gammaln(n + 1).sum(axis=1)) - 0.5 * N * math.log(z.length_squared())
    phase = np.ones(basis.dim, dtype=complex)
    for col, zi in enumerate(z.z, start=1):
        ni = n[:, col]
        if zi == 0:
            log_amp = np.where(ni > 0, -np.inf, log_amp)
            continue
        log_amp = log_amp + ni * math.log(abs(zi))
        unit = zi / abs(zi)
        if unit != 1:
            phase = phase * unit**ni
    return SymmetricState(basis, np.exp(log_amp) * phase)


def overlap(z1, z2, N: int) -> complex:
    """Closed-form ``<z1|z2>`` for N-particle coherent states."""
    z1, z2 = _as_point(z1), _as_point(z2)
    if z1.D != z2.D:
        raise ValueError("phase points have different D")
    dot = 1.0 + complex(np.vdot(z1.array, z2.array))
    return dot**N / (z1.length_squared() ** (N / 2) * z2.length_squared() ** (N / 2))


def parity_signs(basis: OccupationBasis, j: int) -> np.ndarray:
    col = _check_level(basis, j, lowest=2)
    return np.where(basis.states[:, col] % 2 == 1, -1.0, 1.0)


def apply_parity(state: SymmetricState, j: int) -> SymmetricState:
    """Action of ``exp(i pi S_jj)`` for ``j >= 2``."""
    if j == 1:
        raise ValueError("level 1 is the reference level; its parity is fixed by the others")
    signs = parity_signs(state.basis, j)
    return SymmetricState(state.basis, state.amplitudes * signs, state.normalized)


def parity_strings(D: int):
    return itertools.product((0, 1), repeat=D - 1)


def even_mask(basis: OccupationBasis) -> np.ndarray:
    """True for occupation vectors with every ``n_j`` (j >= 2) even."""
    return np.all(basis.states[:, 1:] % 2 == 0, axis=1)


def project_even(state: SymmetricState) -> SymmetricState:
    """``2^(1-D) sum_b Pi_2^b2 ... Pi_D^bD`` applied to ``state`` (not renormalized)."""
    acc = np.zeros(state.basis.dim, dtype=complex)
    for bits in parity_strings(state.D):
        amps = state.amplitudes
        for j, b in enumerate(bits, start=2):
            if b:
                amps = amps * parity_signs(state.basis, j)
        acc = acc + amps
    return SymmetricState(state.basis, acc * 2.0 ** (1 - state.D), normalized=False)


def L_factors(moduli_sq) -> dict[tuple[int, ...], float]:
    """``L_sigma = 1 + sum_i sigma_i |z_i|^2`` keyed by sign tuples ``sigma``."""
    moduli_sq = np.asarray(moduli_sq, dtype=float)
    out = {}
    for bits in itertools.product((0, 1), repeat=moduli_sq.size):
        sigma = tuple(-1 if b else 1 for b in bits)
        out[sigma] = 1.0 + float(np.dot(sigma, moduli_sq))
    return out


def cat_norm_squared(z, N: int) -> float:
    """Closed-form squared normalization of the even cat: 2^(1-D) sum_b (L_b/L_0)^N."""
    z = _as_point(z)
    L = L_factors(np.abs(z.array) ** 2)
    L0 = L[(1,) * (z.D - 1)]
    total = math.fsum(signed_power_ratio(Lb, L0, N, N).value for Lb in L.values())
    return 2.0 ** (1 - z.D) * total


def dcat(basis: OccupationBasis, z) -> SymmetricState:
    """Even-parity cat: normalized superposition of the 2^(D-1) parity images of |z>."""
    z = _as_point(z)
    if z.D != basis.D:
        raise ValueError(f"phase point has D={z.D}, basis has D={basis.D}")
    norm_sq = cat_norm_squared(z, basis.N)
    if not norm_sq > 0:
        raise ValueError(f"even projection of |z> vanishes for z={z.z}")
    coherent = dscs(basis, z)
    # images |z^b> = Pi^b |z>; summing them keeps odd-sector cancellations exact
    acc = np.zeros(basis.dim, dtype=complex)
    for bits in parity_strings(basis.D):
        img = coherent
        for j, b in enumerate(bits, start=2):
            if b:
                img = apply_parity(img, j)
        acc = acc + img.amplitudes
    return SymmetricState(basis, acc * (2.0 ** (1 - basis.D) / math.sqrt(norm_sq)))


def state_rows(state: SymmetricState):
    """Rows ``n_1, ..., n_D, re, im`` in basis order (the state dump format)."""
    for occ, amp in zip(state.basis.states.tolist(), state.amplitudes):
        yield (*occ, float(amp.real), float(amp.imag))
