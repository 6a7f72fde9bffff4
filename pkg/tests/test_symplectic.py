import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdouble import Chart, derived, legendre, legendre_inverse, parse_expression, poisson
from superdouble import sampling
from superdouble.checks import conjugation_table, poisson_laws
from superdouble.symplectic import hamiltonian_action

B = Chart(2, "base")
D = Chart(2, "doubled")
U = Chart(2, "dual")


def P(text, chart=B):
    return parse_expression(text, chart)


def test_generator_relations():
    assert poisson(P("p1", D), P("x1", D)) == D.const(1)
    assert poisson(P("x1", D), P("p1", D)) == D.const(-1)
    assert poisson(P("xi1"), P("xis_1")) == B.const(1)
    assert poisson(P("xis_1"), P("xi1")) == B.const(1)
    assert poisson(P("x1", D), P("xt_1", D)).is_zero
    assert poisson(P("pt_1", D), P("xt_1", D)) == D.const(1)


@pytest.mark.parametrize("chart", [B, D, U, Chart(3, "doubled")])
def test_full_conjugation_table(chart):
    assert conjugation_table(chart) == []


def test_legendre_examples():
    assert legendre(P("x2*th1 + x1*th2", U)) == P("x2*xis_1 + x1*xis_2")
    assert legendre(P("x1^2*ths_1", U)) == P("x1^2*xi1")
    assert legendre(P("x1", U)) == P("x1")
    assert legendre(P("xs_1*th1*ths_2", U)) == P("xs_1*xis_1*xi2")


def test_legendre_requires_dual_chart():
    with pytest.raises(ValueError):
        legendre(P("x1"))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_legendre_is_symplectomorphism(seed):
    gen = sampling.rng(seed)
    f = sampling.homogeneous_monomial(gen, U)
    g = sampling.homogeneous_monomial(gen, U)
    assert poisson(legendre(f), legendre(g)) == legendre(poisson(f, g))
    assert legendre_inverse(legendre(f)) == f


def test_derived_examples():
    h = P("p1*xi1", D)
    assert derived(h, P("x1", D), P("x1", D)).is_zero
    assert derived(D.zero(), P("x1*xi1", D), P("xis_2", D)).is_zero
    assert derived(P("p1*xi1 + x2*xis_1*pt_2", D), D.const(1), P("x1*xis_1", D)).is_zero


def test_hamiltonian_action_examples():
    assert hamiltonian_action(P("xs_1*xi1"), P("x1")) == P("xi1")
    assert hamiltonian_action(P("xs_1*xi1 + x2*xi2*xis_1"), B.const(5)).is_zero
    mu = P("p1*xi1 + pt_1*xis_1", Chart(1, "doubled"))
    assert hamiltonian_action(mu, P("x1*xt_1", Chart(1, "doubled"))) == \
        P("xt_1*xi1 + x1*xis_1", Chart(1, "doubled"))


def test_poisson_on_mismatched_charts():
    with pytest.raises(ValueError):
        poisson(P("x1"), P("x1", D))


@pytest.mark.parametrize("mode", ["base", "doubled", "dual"])
def test_graded_poisson_laws(mode):
    for r in poisson_laws(seed=11, samples=80, dim=2, mode=mode):
        assert r.passed, r.line()
