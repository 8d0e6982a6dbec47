import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quditinfo.linalg import (
    SignedLogValue,
    check_hermitian,
    hermitian_eigensystem,
    signed_power_ratio,
)


def test_identity_and_swap():
    vals, _ = hermitian_eigensystem(np.eye(2))
    assert np.allclose(vals, [1, 1])
    vals, _ = hermitian_eigensystem(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(vals, [-1, 1])


def test_random_hermitian_residuals(rng):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    m = a + a.conj().T
    vals, vecs = hermitian_eigensystem(m)
    assert np.all(np.diff(vals) >= 0)
    norm = np.linalg.norm(m, 2)
    for k in range(6):
        assert np.linalg.norm(m @ vecs[:, k] - vals[k] * vecs[:, k]) < 1e-9 * norm
    assert np.allclose(vecs.conj().T @ vecs, np.eye(6), atol=1e-12)


def test_rejects_non_hermitian_and_non_square():
    with pytest.raises(ValueError, match="not Hermitian"):
        check_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="square"):
        check_hermitian(np.zeros((2, 3)))


def test_hermitian_tolerance_scales_with_entries():
    m = np.array([[1e6, 1.0], [1.0 + 1e-7, 0.0]])
    check_hermitian(m)  # 1e-7 asymmetry on entries of size 1e6 is round-off
    with pytest.raises(ValueError):
        check_hermitian(np.array([[1.0, 1.0], [1.0 + 1e-7, 0.0]]))


def test_power_ratio_examples():
    r = signed_power_ratio(0.5, 2.0, 3, 2)
    assert r.sign == 1 and r.value == pytest.approx(0.03125, rel=1e-15)
    r = signed_power_ratio(-0.3, 1.7, 49, 50)
    exact = Fraction(-3, 10) ** 49 / Fraction(17, 10) ** 50
    assert r.sign == -1
    assert r.log_magnitude == pytest.approx(math.log(abs(exact)), rel=1e-14)
    z = signed_power_ratio(0.0, 1.0, 5, 5)
    assert z.sign == 0 and z.value == 0.0


def test_power_ratio_zero_exponent_and_bad_reference():
    assert signed_power_ratio(0.0, 2.0, 0, 3).value == pytest.approx(1 / 8)
    with pytest.raises(ValueError):
        signed_power_ratio(1.0, 0.0, 1, 1)
    with pytest.raises(ValueError):
        signed_power_ratio(1.0, 1.0, -1, 1)


@given(
    base=st.floats(-3, 3, allow_nan=False).filter(lambda x: abs(x) > 1e-3),
    ref=st.floats(0.1, 3),
    m=st.integers(0, 40),
    n=st.integers(0, 40),
)
def test_power_ratio_matches_direct(base, ref, m, n):
    got = signed_power_ratio(base, ref, m, n)
    assert math.isclose(got.value, base**m / ref**n, rel_tol=1e-11)
    assert isinstance(got, SignedLogValue)
    assert float(got) == got.value
