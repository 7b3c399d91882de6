import numpy as np
import pytest
from hypothesis import given, strategies as st

from gbsval import (DataError, GaussianInputSpec, StateKind, derive_moments,
                    is_classical)


def spec(kind, r=1.0, eps=0.0, **kw):
    return GaussianInputSpec(kind=kind, r=np.atleast_1d(r), epsilon=eps, **kw)


def test_pure_squeezed_r0_is_vacuum():
    m = derive_moments(spec(StateKind.PURE_SQUEEZED, 0.0))
    assert m.n[0] == 0 and m.m_tilde[0] == 0
    assert m.var_x[0] == 0 and m.var_y[0] == 0


def test_pure_squeezed_closed_forms():
    m = derive_moments(spec(StateKind.PURE_SQUEEZED, 1.0))
    assert m.n[0] == pytest.approx(np.sinh(1.0) ** 2)
    assert m.m_tilde[0] == pytest.approx(np.sinh(1.0) * np.cosh(1.0))
    assert m.var_x[0] == pytest.approx(np.exp(2.0) - 1.0)
    assert m.var_y[0] == pytest.approx(np.exp(-2.0) - 1.0)
    # frozen reference values
    np.testing.assert_allclose(
        [m.n[0], m.m_tilde[0], m.var_x[0], m.var_y[0]],
        [1.3811, 1.8134, 6.3891, -0.8647], atol=5e-5)


def test_fully_thermalized_equals_thermal():
    m = derive_moments(spec(StateKind.THERMALIZED, 1.0, eps=1.0))
    assert m.m_tilde[0] == 0
    assert m.var_x[0] == pytest.approx(2 * np.sinh(1.0) ** 2)
    assert m.var_y[0] == m.var_x[0]


def test_squished_squeezed_quadrature_at_vacuum():
    m = derive_moments(spec(StateKind.SQUISHED, 1.0))
    n = np.sinh(1.0) ** 2
    assert m.n[0] == pytest.approx(n)
    assert m.m_tilde[0] == pytest.approx(n)
    assert m.var_y[0] == pytest.approx(0.0, abs=1e-14)
    assert m.var_x[0] == pytest.approx(4 * n)


def test_squashed_accepts_photon_number_override():
    m = derive_moments(spec(StateKind.SQUASHED, 1.0, n_override=np.array([2.5])))
    assert m.n[0] == 2.5 and m.m_tilde[0] == 2.5


def test_vacuum_padding():
    m = derive_moments(GaussianInputSpec(kind=StateKind.PURE_SQUEEZED,
                                         r=np.array([1.0]), modes=3))
    assert m.mode_count == 3
    assert np.all(m.n[1:] == 0) and np.all(m.var_x[1:] == 0)


def test_epsilon_out_of_range_rejected():
    with pytest.raises(DataError):
        spec(StateKind.THERMALIZED, 1.0, eps=1.5)


def test_classicality_examples():
    assert not is_classical(derive_moments(spec(StateKind.PURE_SQUEEZED, 1.0)))[0]
    assert is_classical(derive_moments(spec(StateKind.THERMAL, 1.0)))[0]
    assert is_classical(derive_moments(spec(StateKind.SQUISHED, 1.0)))[0]
    # small thermalization keeps the state non-classical
    m = derive_moments(spec(StateKind.THERMALIZED, 1.0, eps=0.0932))
    assert m.m_tilde[0] == pytest.approx(0.9068 * 1.8134, abs=5e-5)
    assert not is_classical(m)[0]


@given(st.floats(0.0, 2.0))
def test_heisenberg_minimum_for_pure_squeezed(r):
    m = derive_moments(spec(StateKind.PURE_SQUEEZED, r))
    assert ((m.var_x[0] + 1) * (m.var_y[0] + 1)) == pytest.approx(1.0, abs=1e-10)


@given(st.floats(0.0, 2.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_var_y_monotone_in_epsilon(r, e1, e2):
    lo, hi = sorted([e1, e2])
    a = derive_moments(spec(StateKind.THERMALIZED, r, eps=lo))
    b = derive_moments(spec(StateKind.THERMALIZED, r, eps=hi))
    assert b.var_y[0] >= a.var_y[0] - 1e-12


@given(st.sampled_from(list(StateKind)), st.floats(0.0, 2.0), st.floats(0.0, 1.0))
def test_variance_product_bound(kind, r, eps):
    m = derive_moments(spec(kind, r, eps=eps))
    assert m.var_x[0] * m.var_y[0] <= (2 * m.n[0]) ** 2 + 1e-10
    if m.m_tilde[0] == 0:
        assert m.var_x[0] * m.var_y[0] == pytest.approx((2 * m.n[0]) ** 2)
