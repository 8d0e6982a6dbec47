"""One- and two-quDit reduced density matrices of symmetric states.

Generic states go through expectation values of the collective operators;
even cats (D = 2, 3) additionally have closed-form spectra at finite N and in
the N -> infinity limit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import spectra
from .fock import L_factors, SymmetricState, spin_operator
from .linalg import hermitian_eigensystem, signed_power_ratio
from .spectra import DensitySpectrum, InfoPoint

RDM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class RDMResult:
    M: int
    matrix: np.ndarray
    spectrum: DensitySpectrum

    def __post_init__(self):
        tr = np.trace(self.matrix)
        if abs(tr - 1.0) > RDM_TOL:
            raise ValueError(f"RDM trace {tr} differs from 1")
        if self.spectrum.values[-1] < -RDM_TOL:
            raise ValueError("RDM is not positive semidefinite")

    @property
    def info(self) -> InfoPoint:
        return spectra.info_point(self.spectrum)


def _spectrum_of(matrix: np.ndarray) -> DensitySpectrum:
    vals, _ = hermitian_eigensystem(matrix)
    if vals[0] < -RDM_TOL:
        raise ValueError(f"RDM has eigenvalue {vals[0]:.3e} < 0")
    vals = np.clip(vals, 0.0, None)
    return DensitySpectrum(vals / vals.sum())


def _check_state(state: SymmetricState) -> None:
    if abs(state.norm() - 1.0) > RDM_TOL:
        raise ValueError(f"state is not normalized (norm {state.norm()!r})")


def _moved_vectors(state: SymmetricState) -> np.ndarray:
    """Row ``a*D + b`` holds ``S_ab |psi>``, for 0-based levels a, b."""
    D = state.D
    psi = state.amplitudes
    out = np.empty((D * D, psi.size), dtype=complex)
    for a, b in itertools.product(range(D), repeat=2):
        out[a * D + b] = spin_operator(state.basis, a + 1, b + 1, sparse=True) @ psi
    return out


def rdm1(state: SymmetricState) -> RDMResult:
    """rho_1 = (1/N) sum_ij <S_ji> E_ij."""
    _check_state(state)
    D, N = state.D, state.N
    w = _moved_vectors(state)
    psi = state.amplitudes
    rho = np.empty((D, D), dtype=complex)
    for i, j in itertools.product(range(D), repeat=2):
        rho[i, j] = np.vdot(psi, w[j * D + i]) / N
    rho = 0.5 * (rho + rho.conj().T)
    return RDMResult(1, rho, _spectrum_of(rho))


def rdm2(state: SymmetricState) -> RDMResult:
    """rho_2 = 1/(N(N-1)) sum_ijkl (<S_ji S_lk> - delta_il <S_jk>) E_ij (x) E_kl."""
    _check_state(state)
    D, N = state.D, state.N
    if N <= 2:
        raise ValueError("two-particle RDM formula needs N > 2")
    w = _moved_vectors(state)
    psi = state.amplitudes
    # <S_ji S_lk> = <S_ij psi | S_lk psi>
    gram = w.conj() @ w.T
    one_body = w @ psi.conj()  # <S_ab> at a*D + b
    rho = np.zeros((D * D, D * D), dtype=complex)
    for i, j, k, l in itertools.product(range(D), repeat=4):
        val = gram[i * D + j, l * D + k]
        if i == l:
            val -= one_body[j * D + k]
        rho[i * D + k, j * D + l] = val
    rho /= N * (N - 1)
    rho = 0.5 * (rho + rho.conj().T)
    return RDMResult(2, rho, _spectrum_of(rho))


def partial_trace(rho2: np.ndarray, D: int, keep: int = 0) -> np.ndarray:
    """Trace out one factor of a D^2 x D^2 two-particle matrix."""
    t = rho2.reshape(D, D, D, D)
    return np.einsum("ikjk->ij", t) if keep == 0 else np.einsum("kikj->ij", t)


# --- closed-form cat spectra -----------------------------------------------


@dataclass(frozen=True)
class CatSpectrumRequest:
    """Moduli ``(|alpha|,)`` for D=2 or ``(|alpha|, |beta|)`` for D=3; ``N`` may be ``math.inf``."""

    D: int
    M: int
    N: float
    moduli: tuple

    def __post_init__(self):
        if self.D not in (2, 3):
            raise ValueError(f"closed-form cat spectra exist for D in (2, 3), got D={self.D}")
        if self.M not in (1, 2):
            raise ValueError(f"M must be 1 or 2, got {self.M}")
        moduli = tuple(float(abs(m)) for m in np.atleast_1d(self.moduli))
        if len(moduli) != self.D - 1:
            raise ValueError(f"D={self.D} needs {self.D - 1} moduli, got {len(moduli)}")
        if not all(math.isfinite(m) for m in moduli):
            raise ValueError("infinite moduli: use directional_limit_spectrum for r -> infinity")
        object.__setattr__(self, "moduli", moduli)
        if self.N != math.inf:
            if int(self.N) != self.N:
                raise ValueError(f"N must be an integer or inf, got {self.N}")
            object.__setattr__(self, "N", int(self.N))
            if self.N < self.M + 1:
                raise ValueError(f"N={self.N} too small for M={self.M}")

    @property
    def is_thermodynamic(self) -> bool:
        return self.N == math.inf

    @property
    def dim(self) -> int:
        return self.D**self.M


def _sign_sums(moduli_sq: np.ndarray, N: int, drop: int) -> dict[tuple[int, ...], float]:
    """``sum_sigma chi(sigma) L_sigma^(N-drop) / sum_sigma L_sigma^N`` for every
    character ``chi`` of the parity group, keyed by the 0/1 mask selecting it."""
    L = L_factors(moduli_sq)
    top = L[(1,) * moduli_sq.size]
    denom = math.fsum(signed_power_ratio(v, top, N, N).value for v in L.values())
    terms = {s: signed_power_ratio(v, top, N - drop, N).value for s, v in L.items()}
    out = {}
    for mask in itertools.product((0, 1), repeat=moduli_sq.size):
        acc = math.fsum(
            t * math.prod(si for si, m in zip(s, mask) if m) for s, t in terms.items()
        )
        out[mask] = acc / denom
    return out


def cat_rdm1_spectrum(req: CatSpectrumRequest) -> DensitySpectrum:
    if req.M != 1:
        raise ValueError("cat_rdm1_spectrum needs M=1")
    x = np.array(req.moduli) ** 2
    k = x.size
    if req.is_thermodynamic:
        vals = np.concatenate(([1.0], x)) / (1.0 + x.sum())
        return DensitySpectrum(vals)
    sums = _sign_sums(x, req.N, drop=1)
    vals = [sums[(0,) * k]]
    for i in range(k):
        mask = tuple(1 if j == i else 0 for j in range(k))
        vals.append(x[i] * sums[mask])
    return DensitySpectrum(vals)


def cat_rdm2_spectrum(req: CatSpectrumRequest) -> DensitySpectrum:
    if req.M != 2:
        raise ValueError("cat_rdm2_spectrum needs M=2")
    x = np.array(req.moduli) ** 2
    k = x.size
    zeros = req.dim - (1 + k + k * (k - 1) // 2)
    lead = 1.0 + float(np.sum(x**2))
    if req.is_thermodynamic:
        norm = (1.0 + x.sum()) ** 2
        vals = [lead / norm]
        vals += [2 * xi / norm for xi in x]
        vals += [2 * x[a] * x[b] / norm for a, b in itertools.combinations(range(k), 2)]
        return DensitySpectrum(vals + [0.0] * zeros)
    sums = _sign_sums(x, req.N, drop=2)
    vals = [lead * sums[(0,) * k]]
    for i in range(k):
        mask = tuple(1 if j == i else 0 for j in range(k))
        vals.append(2 * x[i] * sums[mask])
    for a, b in itertools.combinations(range(k), 2):
        mask = tuple(1 if j in (a, b) else 0 for j in range(k))
        vals.append(2 * x[a] * x[b] * sums[mask])
    return DensitySpectrum(vals + [0.0] * zeros)


def cat_spectrum(req: CatSpectrumRequest) -> DensitySpectrum:
    return cat_rdm1_spectrum(req) if req.M == 1 else cat_rdm2_spectrum(req)


def directional_limit_spectrum(M: int, theta: float) -> DensitySpectrum:
    """D=3, N -> infinity, ``|alpha| = r cos(theta)``, ``|beta| = r sin(theta)``, r -> infinity."""
    if M not in (1, 2):
        raise ValueError(f"M must be 1 or 2, got {M}")
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    if M == 1:
        return DensitySpectrum([0.0, s2, c2])
    return DensitySpectrum([(math.cos(4 * theta) + 3) / 4, 2 * c2 * s2] + [0.0] * 7)


def cat_entanglement_entropies(req: CatSpectrumRequest) -> InfoPoint:
    return spectra.info_point(cat_spectrum(req))
