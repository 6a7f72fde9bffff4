import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from superdouble import Parity, parity_of, parse_expression, poisson, sampling
from superdouble import dft
from superdouble.algebra import Chart

D1 = dft.doubled_chart(1)
D2 = dft.doubled_chart(2)


def P(text, chart=D2):
    return parse_expression(text, chart)


def sec(chart, X=(), eta=()):
    d = chart.dim
    X = tuple(P(t, chart) for t in X) or tuple(chart.zero() for _ in range(d))
    eta = tuple(P(t, chart) for t in eta) or tuple(chart.zero() for _ in range(d))
    return dft.DoubleSection(X, eta)


def test_lift_examples():
    assert dft.lift_double(sec(D2, ("1", "0"))) == P("xis_1")
    assert dft.lift_double(sec(D2, (), ("xt_1", "0"))) == P("xt_1*xi1")
    assert dft.lift_double(sec(D2, ("x1", "0"), ("0", "xt_2"))) == P("x1*xis_1 + xt_2*xi2")


def test_section_coefficients_must_be_x_xt_only():
    with pytest.raises(ValueError):
        sec(D1, ("p1",))


def test_mu_examples():
    assert dft.mu_dft(1) == P("p1*xi1 + pt_1*xis_1", D1)
    assert parity_of(dft.mu_dft(3)) is Parity.ODD


def test_mu_bracket_with_itself():
    # {mu, mu} is not zero: the two halves pair through {xi, xis} = 1
    for d in (1, 2, 3):
        c = dft.doubled_chart(d)
        expected = sum((c.gen("p", a) * c.gen("pt", a) for a in range(1, d + 1)), c.zero()).scale(2)
        assert poisson(dft.mu_dft(d), dft.mu_dft(d)) == expected


def test_d_squared_is_half_bracket_of_mu():
    gen = sampling.rng(8)
    mu = dft.mu_dft(2)
    for _ in range(5):
        phi = sampling.double_scalar(gen, 2, 2)
        assert dft.d_squared(phi) == poisson(poisson(mu, mu), phi).scale(mpq(1, 2))


def test_d_squared_examples():
    assert dft.d_squared(P("x1*xt_1", D1)) == P("p1*x1 + pt_1*xt_1", D1)
    assert dft.d_squared(P("x1", D1)) == P("pt_1", D1)
    assert dft.d_squared(D1.const(4)).is_zero


def test_strong_constraint_pair_examples():
    assert dft.strong_constraint_pair(P("x1"), P("xt_1")) == D2.const(1)
    assert dft.strong_constraint_pair(P("x1"), P("x2")).is_zero
    assert dft.strong_constraint_pair(P("x1 + xt_1"), P("x1 + xt_1")) == D2.const(2)


def test_circle_of_constants_vanishes():
    a, b = sec(D2, ("1", "2"), ("3", "-1")), sec(D2, ("1/2", "0"), ("0", "5"))
    assert dft.circle(a, b).is_zero
    assert dft.c_bracket(a, b).is_zero
    assert dft.c_bracket_components(a, b).is_zero


def test_c_bracket_hand_example():
    s1, s2 = sec(D1, ("x1",)), sec(D1, (), ("xt_1",))
    expected = P("1/2*xt_1*xi1 - 1/2*x1*xis_1", D1)
    assert dft.c_bracket(s1, s2) == expected
    rows = dft.c_bracket_components(s1, s2)
    assert str(rows.X[0]) == "-1/2*x1" and str(rows.eta[0]) == "1/2*xt_1"


def test_c_bracket_antisymmetric():
    gen = sampling.rng(4)
    for _ in range(5):
        s = sampling.double_section(gen, 2, 2)
        t = sampling.double_section(gen, 2, 2)
        assert dft.c_bracket(s, s).is_zero
        assert dft.c_bracket(s, t) == -dft.c_bracket(t, s)


def test_x_only_vectors_give_lie_bracket():
    gen = sampling.rng(9)
    xs = oracle.symbols(2)
    for _ in range(5):
        s = sampling.double_section(gen, 2, 2, x_only=True, parts="vector")
        t = sampling.double_section(gen, 2, 2, x_only=True, parts="vector")
        out = dft.section_of(dft.c_bracket(s, t))
        flat = Chart(2, "base")
        lie = oracle.lie_bracket([oracle.to_sympy(e.recast(flat), xs) for e in s.X],
                                 [oracle.to_sympy(e.recast(flat), xs) for e in t.X], xs)
        assert [oracle.to_sympy(e.recast(flat), xs) for e in out.X] == lie
        assert all(e.is_zero for e in out.eta)


def test_eta_Y_form_row_uses_x_derivative():
    # eta_1 = x1^2, Y^1 = x1 in d = 1. The [eta, Y] form row with d_i gives
    # -Y d eta + 1/2 (Y d eta - eta d Y) = -3/2 x1^2; differentiating along xt
    # instead (as the row is sometimes printed) would leave -2 x1^2.
    s1, s2 = sec(D1, (), ("x1^2",)), sec(D1, ("x1",))
    Y, eta = s2.X[0], s1.eta[0]
    literal = -Y * dft.dx(0, eta) + (Y * dft.dxt(0, eta) - eta * dft.dxt(0, Y)).scale(mpq(1, 2))
    assert literal == P("-2*x1^2", D1)
    derived = dft.section_of(dft.c_bracket(s1, s2)).eta[0]
    assert derived == P("-3/2*x1^2", D1)
    assert dft.c_bracket_components(s1, s2).eta[0] == derived


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_three_c_bracket_routes_agree(seed, d):
    gen = sampling.rng(seed)
    s, t = sampling.double_section(gen, d, 2), sampling.double_section(gen, d, 2)
    lhs = dft.c_bracket(s, t)
    assert lhs == dft.lift_double(dft.c_bracket_components(s, t))
    assert lhs == dft.lift_double(dft.c_bracket_odd(s, t))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_strong_constraint_identity(seed):
    gen = sampling.rng(seed)
    phi, psi = sampling.double_scalar(gen, 3, 2), sampling.double_scalar(gen, 3, 2)
    assert poisson(dft.d_squared(phi), psi) == dft.strong_constraint_pair(phi, psi)


def test_project_half_examples():
    assert dft.project_half(dft.mu_dft(2)) == P("p1*xi1 + p2*xi2")
    e = P("x1*p2*xi1 + xt_2*xis_1")
    assert dft.project_half(e) == e
    assert dft.project_half(P("pt_1*x1 + x2")) == P("x2")


def test_projection_recovers_classical_courant():
    gen = sampling.rng(12)
    xs = oracle.symbols(2)
    flat = Chart(2, "base")
    for _ in range(5):
        a, b = sampling.courant_section(gen, 2), sampling.courant_section(gen, 2)
        got = dft.project_half(dft.c_bracket(dft.from_courant_section(a), dft.from_courant_section(b)))
        out = dft.section_of(got)
        vec, form = oracle.classical_courant(*[[oracle.to_sympy(e, xs) for e in fam]
                                               for fam in (a.X, a.eta, b.X, b.eta)], xs)
        assert [oracle.to_sympy(e.recast(flat), xs) for e in out.X] == vec
        assert [oracle.to_sympy(e.recast(flat), xs) for e in out.eta] == form


def test_gen_lie_examples():
    assert dft.gen_lie_scalar(sec(D1, ("1",)), P("x1", D1)) == D1.const(1)
    a, b = sec(D2, ("1", "2"), ("0", "3")), sec(D2, ("5", "0"), ("1", "1"))
    assert dft.gen_lie_vector(a, b).is_zero


def test_gen_lie_vector_is_dorfman_and_closes():
    gen = sampling.rng(14)
    for _ in range(4):
        s = sampling.double_section(gen, 2, 2, x_only=True)
        t = sampling.double_section(gen, 2, 2, x_only=True)
        phi = sampling.double_scalar(gen, 2, 2, x_only=True)
        assert dft.lift_double(dft.gen_lie_vector(s, t)) == dft.circle(s, t)
        br = dft.section_of(dft.c_bracket(s, t))
        assert dft.gauge_commutator_scalar(s, t, phi) == -dft.gen_lie_scalar(br, phi)
        assert dft.operator_commutator_scalar(s, t, phi) == dft.gen_lie_scalar(br, phi)


def test_gen_lie_covector_matches_lowered_vector():
    gen = sampling.rng(15)
    s = sampling.double_section(gen, 2, 2)
    t = sampling.double_section(gen, 2, 2)
    assert tuple(dft.gen_lie_covector(s, t.lower)) == dft.gen_lie_vector(s, t).lower


def test_mismatched_dimensions_rejected():
    with pytest.raises(ValueError):
        dft.c_bracket(sec(D1, ("x1",)), sec(D2, ("x1", "0")))
