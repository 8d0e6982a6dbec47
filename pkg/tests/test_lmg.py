import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quditinfo.fock import PhasePoint, dscs, even_mask
from quditinfo.lmg import (
    LMGParams,
    Phase,
    Source,
    build_hamiltonian,
    energy_surface,
    evaluate_point,
    expectation,
    ground_energy_density,
    info_trajectory,
    minimize_energy_surface,
    parity_matrix,
    rank_scan,
    solve_ground_state,
    stationary_point,
    variational_cat_state,
)

coords = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def test_params_validation():
    with pytest.raises(ValueError):
        LMGParams(1)
    with pytest.raises(ValueError):
        LMGParams(4, level_splitting=0.0)
    with pytest.raises(ValueError):
        LMGParams(4, coupling=-1.0)


def test_noninteracting_hamiltonian():
    p = LMGParams(6, 1.0, 0.0)
    H = build_hamiltonian(p)
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0
    e, st_ = solve_ground_state(p)
    assert e == pytest.approx(-1.0)
    assert abs(st_.amplitude((6, 0, 0))) == pytest.approx(1.0)


def test_two_particle_hamiltonian_by_hand():
    eps, lam = 1.0, 1.0
    # basis (2,0,0) (1,1,0) (1,0,1) (0,2,0) (0,1,1) (0,0,2)
    want = np.diag([-eps, -eps / 2, 0.0, 0.0, eps / 2, eps])
    for a, b in [(0, 3), (0, 5), (3, 5)]:
        want[a, b] = want[b, a] = -lam  # -lam/2 * sqrt(2*1*2*1)
    assert np.allclose(build_hamiltonian(LMGParams(2, eps, lam)), want, atol=1e-15)


@pytest.mark.parametrize("N", [3, 8, 12])
def test_parity_commutes_with_hamiltonian(N):
    p = LMGParams(N, 1.0, 1.7)
    H = build_hamiltonian(p)
    for j in (2, 3):
        P = parity_matrix(p.basis, j)
        assert np.max(np.abs(H @ P - P @ H)) < 1e-12


def test_energy_surface_examples():
    assert energy_surface(0, 0, 1.3, 0.8) == pytest.approx(-1.3)


@given(coords, coords, st.floats(0.1, 3), st.floats(0, 5))
def test_energy_surface_parity_invariant(a, b, eps, lam):
    e = energy_surface(a, b, eps, lam)
    assert energy_surface(-a, b, eps, lam) == pytest.approx(e, abs=1e-12)
    assert energy_surface(a, -b, eps, lam) == pytest.approx(e, abs=1e-12)


@pytest.mark.parametrize("N", [5, 40, 200])
def test_coherent_expectation_equals_surface(N, rng):
    # the 1/(N(N-1)) coupling normalization makes <z|H|z> exact at every N
    p = LMGParams(N, 1.0, 0.7)
    H = build_hamiltonian(p, sparse=True)
    for _ in range(3):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        st_ = dscs(p.basis, PhasePoint.of(a, b))
        assert expectation(st_, H) == pytest.approx(energy_surface(a, b, 1.0, 0.7), abs=1e-10)


def test_stationary_examples():
    s = stationary_point(1.0, 0.25)
    assert (s.alpha0, s.beta0, s.phase) == (0.0, 0.0, Phase.I)
    s = stationary_point(1.0, 1.0)
    assert s.alpha0 == pytest.approx(math.sqrt(1 / 3)) and s.beta0 == 0.0 and s.phase is Phase.II
    s = stationary_point(1.0, 1e6)
    assert s.phase is Phase.III
    # approach to (1, 1) is 1 - 3 eps/(4 lam) and 1 - 3 eps/(2 lam)
    assert 1 - s.alpha0 == pytest.approx(0.75e-6, rel=1e-4)
    assert 1 - s.beta0 == pytest.approx(1.5e-6, rel=1e-4)


def test_ground_energy_examples():
    assert ground_energy_density(1.0, 0.25) == -1.0
    assert ground_energy_density(1.0, 1.0) == pytest.approx(-9 / 8)
    assert ground_energy_density(1.0, 3.0) == pytest.approx(-13 / 6)
    with pytest.raises(ValueError):
        ground_energy_density(0.0, 1.0)


@given(st.floats(0.2, 3), st.floats(0, 6))
def test_ground_energy_is_surface_at_stationary_point(eps, lam):
    s = stationary_point(eps, lam)
    assert energy_surface(s.alpha0, s.beta0, eps, lam) == pytest.approx(ground_energy_density(eps, lam), abs=1e-12)


@pytest.mark.parametrize("lam", [0.3, 1.0, 2.0])
def test_minimizer_matches_closed_form(lam):
    m = minimize_energy_surface(1.0, lam)
    s = stationary_point(1.0, lam)
    assert abs(m.alpha - s.alpha0) < 1e-6 and abs(m.beta - s.beta0) < 1e-6
    assert m.value == pytest.approx(ground_energy_density(1.0, lam), abs=1e-12)


@pytest.mark.parametrize("N,lam", [(6, 0.3), (9, 1.0), (10, 2.5), (14, 6.0)])
def test_ground_state_matches_even_block(N, lam):
    p = LMGParams(N, 1.0, lam)
    H = build_hamiltonian(p)
    keep = even_mask(p.basis)
    vals, vecs = np.linalg.eigh(H[np.ix_(keep, keep)])
    e, st_ = solve_ground_state(p)
    assert e == pytest.approx(vals[0], abs=1e-10)
    assert e == pytest.approx(np.linalg.eigvalsh(H)[0], abs=1e-9)
    assert abs(np.vdot(vecs[:, 0], st_.amplitudes[keep])) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("lam", [0.25, 1.0, 3.0])
def test_variational_upper_bound(lam):
    for N in (6, 12, 20):
        p = LMGParams(N, 1.0, lam)
        e, _ = solve_ground_state(p)
        assert e <= expectation(variational_cat_state(p), build_hamiltonian(p, sparse=True)) + 1e-12


def test_source_validation_and_labels():
    assert Source.variational_inf().label() == "variational(inf)"
    assert Source.numerical(8).label() == "numerical(8)"
    with pytest.raises(ValueError):
        Source("numerical")
    assert Source.numerical(8).default_threshold > Source.variational_inf().default_threshold


def test_variational_scan_small_grid():
    scan = rank_scan(1.0, [0.0, 0.4, 0.6, 1.4, 1.6, 2.5], Source.variational_inf())
    assert scan.rank_m1.tolist() == [1, 1, 2, 2, 3, 3]
    assert scan.rank_m2.tolist() == [1, 1, 2, 2, 4, 4]
    assert scan.jumps_m1 == pytest.approx([0.5, 1.5])
    assert scan.sequence(2) == [1, 2, 4]
    with pytest.raises(ValueError):
        rank_scan(1.0, [0.5, 0.1], Source.variational_inf())


def test_finite_sources_agree_with_thermodynamic_trend():
    inf = evaluate_point(1.0, 2.0, Source.variational_inf())
    fin = evaluate_point(1.0, 2.0, Source.variational(30))
    assert inf.energy is None and fin.energy is not None
    assert np.allclose(fin.spectrum_m1.values, inf.spectrum_m1.values, atol=5e-2)
    num = evaluate_point(1.0, 2.0, Source.numerical(12))
    assert num.energy <= fin.energy


def test_trajectory_endpoints():
    t1 = info_trajectory(1.0, [0.1, 1e6], Source.variational_inf(), 1)
    t2 = info_trajectory(1.0, [0.1, 1e6], Source.variational_inf(), 2)
    assert (t1[0].L, t1[0].S) == (0.0, 0.0)
    assert abs(t1[1].L - 1) < 1e-5 and abs(t1[1].S - 1) < 1e-5
    assert abs(t2[1].L - 5 / 6) < 1e-3 and abs(t2[1].S - 0.623) < 1e-3
