"""Three-level Lipkin-Meshkov-Glick model.

    H = (eps/N) (S_33 - S_11) - lam/(N(N-1)) sum_{i != j} S_ij^2

``eps`` here is the single-particle level splitting, not the mixing parameter
used in :mod:`quditinfo.infodiag`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse as sp
from scipy.optimize import minimize

from . import spectra
from .fock import (
    OccupationBasis,
    PhasePoint,
    SymmetricState,
    dcat,
    enumerate_basis,
    even_mask,
    pair_hopping,
    parity_signs,
    spin_operator,
)
from .linalg import hermitian_eigensystem
from .rdm import CatSpectrumRequest, cat_rdm1_spectrum, cat_rdm2_spectrum, rdm1, rdm2
from .spectra import DensitySpectrum, InfoPoint

D_LMG = 3
DEGENERACY_TOL = 1e-10
VARIATIONAL_THRESHOLD = spectra.RANK_THRESHOLD
NUMERICAL_THRESHOLD = 1e-3


@dataclass(frozen=True)
class LMGParams:
    N: int
    level_splitting: float = 1.0
    coupling: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        if not self.level_splitting > 0:
            raise ValueError("level splitting must be positive")
        if self.coupling < 0:
            raise ValueError("coupling must be non-negative")

    @property
    def basis(self) -> OccupationBasis:
        return enumerate_basis(D_LMG, int(self.N))


def build_hamiltonian(p: LMGParams, sparse: bool = False):
    """Real symmetric Hamiltonian on the D=3 symmetric basis of ``p.N`` particles."""
    basis = p.basis
    N = p.N
    S = lambda i, j: spin_operator(basis, i, j, sparse=True)  # noqa: E731
    H = (p.level_splitting / N) * (S(3, 3) - S(1, 1))
    g = p.coupling / (N * (N - 1))
    for i, j in ((1, 2), (1, 3), (2, 3)):
        hop = pair_hopping(basis, i, j)
        H = H - g * (hop + hop.T)
    H = sp.csr_matrix(H)
    return H if sparse else H.toarray()


def energy_surface(alpha: complex, beta: complex, eps: float, lam: float) -> float:
    a, b = complex(alpha), complex(beta)
    ac, bc = a.conjugate(), b.conjugate()
    den = (a * ac + b * bc + 1).real
    val = eps * (b * bc - 1) / den - lam * (a**2 * (bc**2 + 1) + (b**2 + 1) * ac**2 + bc**2 + b**2) / den**2
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"energy surface has imaginary part {val.imag:.3e}")
    return float(val.real)


class Phase(str, Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"


@dataclass(frozen=True)
class StationaryPoint:
    alpha0: float
    beta0: float
    phase: Phase

    @property
    def point(self) -> PhasePoint:
        return PhasePoint((self.alpha0, self.beta0))


def _check_couplings(eps: float, lam: float) -> None:
    if not eps > 0:
        raise ValueError("level splitting must be positive")
    if lam < 0:
        raise ValueError("coupling must be non-negative")


def stationary_point(eps: float, lam: float) -> StationaryPoint:
    _check_couplings(eps, lam)
    if lam <= eps / 2:
        return StationaryPoint(0.0, 0.0, Phase.I)
    if lam <= 3 * eps / 2:
        return StationaryPoint(math.sqrt((2 * lam - eps) / (2 * lam + eps)), 0.0, Phase.II)
    return StationaryPoint(
        math.sqrt(2 * lam / (2 * lam + 3 * eps)),
        math.sqrt((2 * lam - 3 * eps) / (2 * lam + 3 * eps)),
        Phase.III,
    )


def ground_energy_density(eps: float, lam: float) -> float:
    _check_couplings(eps, lam)
    if lam <= eps / 2:
        return -eps
    if lam <= 3 * eps / 2:
        return -((2 * lam + eps) ** 2) / (8 * lam)
    return -(4 * lam**2 + 3 * eps**2) / (6 * lam)


@dataclass(frozen=True)
class Minimum:
    alpha: float
    beta: float
    value: float
    converged: bool = True


def minimize_energy_surface(eps: float, lam: float, grid: int = 41) -> Minimum:
    """Grid scan over real (alpha, beta) in [0, 2]^2 refined by Nelder-Mead.

    The parity symmetry alpha -> -alpha, beta -> -beta lets the search stay in
    the non-negative quadrant.
    """
    _check_couplings(eps, lam)
    f = lambda x: energy_surface(abs(x[0]), abs(x[1]), eps, lam)  # noqa: E731
    axis = np.linspace(0.0, 2.0, grid)
    best = min(((f((a, b)), a, b) for a in axis for b in axis))
    x0 = np.array(best[1:])
    converged = True
    for _ in range(4):
        res = minimize(
            f,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 20000, "initial_simplex": x0 + 0.05 * np.array([[0, 0], [1, 0], [0, 1]])},
        )
        converged = bool(res.success)
        if np.allclose(res.x, x0, atol=1e-13):
            break
        x0 = res.x
    x = np.abs(res.x)
    return Minimum(float(x[0]), float(x[1]), float(res.fun), converged)


# --- finite N ----------------------------------------------------------------


def parity_matrix(basis: OccupationBasis, j: int) -> np.ndarray:
    return np.diag(parity_signs(basis, j))


def solve_ground_state(p: LMGParams) -> tuple[float, SymmetricState]:
    """Lowest eigenpair of the dense Hamiltonian, resolved to the even sector.

    When several levels lie within ``DEGENERACY_TOL * ||H||`` of the minimum
    (parity doublets at strong coupling), their eigenvectors are projected on
    the even sector and the even combination with the lowest Rayleigh
    quotient is returned.
    """
    H = build_hamiltonian(p)
    vals, vecs = hermitian_eigensystem(H)
    scale = max(1.0, float(np.max(np.abs(vals))))
    cluster = np.flatnonzero(vals - vals[0] <= DEGENERACY_TOL * scale)
    basis = p.basis
    if cluster.size == 1:
        vec = vecs[:, 0]
    else:
        mask = even_mask(basis)
        proj = vecs[:, cluster] * mask[:, None]
        q, r = np.linalg.qr(proj)
        q = q[:, np.abs(np.diag(r)) > 1e-8]
        if q.shape[1] == 0:
            raise RuntimeError("no even state in the lowest degenerate cluster")
        sub_vals, sub_vecs = np.linalg.eigh(q.T @ H @ q)
        vec = q @ sub_vecs[:, 0]
    vec = vec / np.linalg.norm(vec)
    # fix the global sign so the (N,0,0) component is non-negative
    lead = vec[basis.position((p.N, 0, 0))]
    if lead < 0:
        vec = -vec
    energy = float(vec @ H @ vec)
    state = SymmetricState(basis, vec.astype(complex))
    for j in (2, 3):
        par = float(np.dot(np.abs(vec) ** 2, parity_signs(basis, j)))
        if abs(par - 1.0) > 1e-8:
            raise RuntimeError(f"ground state has <Pi_{j}> = {par}, expected +1")
    return energy, state


def variational_cat_state(p: LMGParams) -> SymmetricState:
    sp_ = stationary_point(p.level_splitting, p.coupling)
    return dcat(p.basis, sp_.point)


def expectation(state: SymmetricState, H) -> float:
    psi = state.amplitudes
    return float(np.vdot(psi, H @ psi).real)


# --- rank scans ----------------------------------------------------------------


class SourceKind(str, Enum):
    VARIATIONAL = "variational"
    NUMERICAL = "numerical"


@dataclass(frozen=True)
class Source:
    """Where the RDMs come from: the variational cat (``N`` finite or inf) or exact diagonalization."""

    kind: SourceKind
    N: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "kind", SourceKind(self.kind))
        if self.N != math.inf:
            object.__setattr__(self, "N", int(self.N))
        if self.kind is SourceKind.NUMERICAL and self.N == math.inf:
            raise ValueError("exact diagonalization needs finite N")

    @classmethod
    def variational_inf(cls) -> "Source":
        return cls(SourceKind.VARIATIONAL, math.inf)

    @classmethod
    def variational(cls, N: int) -> "Source":
        return cls(SourceKind.VARIATIONAL, N)

    @classmethod
    def numerical(cls, N: int) -> "Source":
        return cls(SourceKind.NUMERICAL, N)

    @property
    def default_threshold(self) -> float:
        return NUMERICAL_THRESHOLD if self.kind is SourceKind.NUMERICAL else VARIATIONAL_THRESHOLD

    def label(self) -> str:
        n = "inf" if self.N == math.inf else str(self.N)
        return f"{self.kind.value}({n})"


@dataclass(frozen=True)
class GridPoint:
    lam: float
    spectrum_m1: DensitySpectrum
    spectrum_m2: DensitySpectrum
    energy: float | None


def evaluate_point(eps: float, lam: float, source: Source) -> GridPoint:
    """RDM spectra (M = 1, 2) and, for finite N, the energy at one coupling."""
    st = stationary_point(eps, lam)
    if source.kind is SourceKind.VARIATIONAL and source.N == math.inf:
        moduli = (st.alpha0, st.beta0)
        s1 = cat_rdm1_spectrum(CatSpectrumRequest(3, 1, math.inf, moduli))
        s2 = cat_rdm2_spectrum(CatSpectrumRequest(3, 2, math.inf, moduli))
        return GridPoint(lam, s1, s2, None)
    p = LMGParams(source.N, eps, lam)
    if source.kind is SourceKind.VARIATIONAL:
        state = variational_cat_state(p)
        energy = expectation(state, build_hamiltonian(p, sparse=True))
    else:
        energy, state = solve_ground_state(p)
    return GridPoint(lam, rdm1(state).spectrum, rdm2(state).spectrum, energy)


@dataclass
class RankScan:
    lambda_grid: np.ndarray
    rank_m1: np.ndarray
    rank_m2: np.ndarray
    points: list = field(repr=False, default_factory=list)
    # (M, lambda_mid, rank_before, rank_after) for every change of rank
    transitions: list = field(default_factory=list)

    @property
    def jumps_m1(self) -> list[float]:
        return [lm for M, lm, a, b in self.transitions if M == 1 and b > a]

    @property
    def jumps_m2(self) -> list[float]:
        return [lm for M, lm, a, b in self.transitions if M == 2 and b > a]

    def sequence(self, M: int) -> list[int]:
        ranks = self.rank_m1 if M == 1 else self.rank_m2
        out = [int(ranks[0])]
        for r in ranks[1:]:
            if r != out[-1]:
                out.append(int(r))
        return out


def _transitions(grid: np.ndarray, ranks: np.ndarray, M: int) -> list:
    out = []
    for a in range(len(grid) - 1):
        if ranks[a + 1] != ranks[a]:
            out.append((M, float(0.5 * (grid[a] + grid[a + 1])), int(ranks[a]), int(ranks[a + 1])))
    return out


def rank_scan(eps: float, lambda_grid, source: Source, threshold: float | None = None) -> RankScan:
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("lambda grid must be a non-empty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("lambda grid must be strictly ascending")
    if threshold is None:
        threshold = source.default_threshold
    points = [evaluate_point(eps, lam, source) for lam in grid]
    r1 = np.array([spectra.numerical_rank(pt.spectrum_m1, threshold) for pt in points])
    r2 = np.array([spectra.numerical_rank(pt.spectrum_m2, threshold) for pt in points])
    trans = _transitions(grid, r1, 1) + _transitions(grid, r2, 2)
    return RankScan(grid, r1, r2, points, trans)


def info_trajectory(eps: float, lambda_grid, source: Source, M: int) -> list[InfoPoint]:
    if M not in (1, 2):
        raise ValueError("M must be 1 or 2")
    out = []
    for lam in np.asarray(lambda_grid, dtype=float):
        pt = evaluate_point(eps, lam, source)
        out.append(spectra.info_point(pt.spectrum_m1 if M == 1 else pt.spectrum_m2))
    return out
