import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from superdouble import SingularMetricError, build_generalized_metric, check_odd_compat, eta_form, sampling


def test_identity_metric():
    H = build_generalized_metric(sp.eye(3), sp.zeros(3))
    assert H == sp.eye(6)
    assert check_odd_compat(H).passed


def test_d2_example():
    G = sp.diag(2, 1)
    B = sp.Matrix([[0, 1], [-1, 0]])
    H = build_generalized_metric(G, B)
    assert H * eta_form(2) * H == eta_form(2)
    # G - B G^-1 B = diag(2, 1) - diag(-1, -1/2)
    assert H[:2, :2] == sp.diag(3, sp.Rational(3, 2))
    assert H.is_symmetric()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_eta_squares_to_identity(d):
    assert eta_form(d) ** 2 == sp.eye(2 * d)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_random_metrics_are_odd_compatible(seed, d):
    G, B = sampling.rational_matrix_pair(sampling.rng(seed), d)
    assert check_odd_compat(build_generalized_metric(G, B)).passed


def test_non_compatible_matrix_fails():
    r = check_odd_compat(sp.diag(2, 1, 1, 1))
    assert not r.passed and r.residual is not None


def test_input_validation():
    with pytest.raises(SingularMetricError):
        build_generalized_metric(sp.zeros(2), sp.zeros(2))
    with pytest.raises(ValueError):
        build_generalized_metric(sp.Matrix([[1, 2], [0, 1]]), sp.zeros(2))
    with pytest.raises(ValueError):
        build_generalized_metric(sp.eye(2), sp.Matrix([[1, 0], [0, 0]]))
    with pytest.raises(ValueError):
        build_generalized_metric(sp.eye(2), sp.zeros(3))
