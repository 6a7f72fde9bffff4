"""Independent reference implementations used as test oracles.

The Grassmann oracle stores an element as a dict mapping
(sorted even factors, sorted odd factors) to a Fraction, and computes the
Koszul sign by counting inversions of the concatenated odd word. It shares
no code with the package kernel.
"""
from collections import defaultdict
from fractions import Fraction

import sympy as sp

ORDER = {"x": 0, "xt": 1, "p": 2, "pt": 3, "xs": 4, "xi": 5, "xis": 6, "th": 7, "ths": 8}
ODD = {"xi", "xis", "th", "ths"}


def key(g):
    fam, idx = g
    return (ORDER[fam], idx)


def inversions(word):
    return sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if key(word[i]) > key(word[j]))


def monomial(coeff, factors):
    """Element for the ordered product ``coeff * f1 * f2 * ...`` of (family, index) factors."""
    odd = [f for f in factors if f[0] in ODD]
    if len(set(odd)) < len(odd):
        return {}
    even = tuple(sorted((f for f in factors if f[0] not in ODD), key=key))
    sign = -1 if inversions(odd) % 2 else 1
    return {(even, tuple(sorted(odd, key=key))): Fraction(coeff) * sign}


def add(a, b):
    out = defaultdict(Fraction, a)
    for k, v in b.items():
        out[k] += v
    return {k: v for k, v in out.items() if v}


def mul(a, b):
    out = {}
    for (ea, oa), ca in a.items():
        for (eb, ob), cb in b.items():
            out = add(out, monomial(ca * cb, list(ea) + list(oa) + list(eb) + list(ob)))
    return out


def from_expression(e):
    out = {}
    for m in e.monomials():
        even = tuple(sorted(((g.family, g.index) for g, k in m.even for _ in range(k)), key=key))
        odd = tuple((g.family, g.index) for g in m.odd)
        out = add(out, {(even, odd): Fraction(int(m.coeff.numerator), int(m.coeff.denominator))})
    return out


# -- sympy oracles for the x-only calculus -------------------------------------------

def symbols(d):
    return sp.symbols(f"x1:{d + 1}")


def to_sympy(e, xs):
    """A polynomial Expression in the x family as a sympy expression."""
    total = sp.Integer(0)
    for m in e.monomials():
        assert not m.odd and all(g.family == "x" for g, _ in m.even)
        term = sp.Rational(int(m.coeff.numerator), int(m.coeff.denominator))
        for g, k in m.even:
            term *= xs[g.index - 1] ** k
        total += term
    return sp.expand(total)


def jacobiator(pi, xs):
    """``pi^{il} d_l pi^{jk} + cyclic(ijk)`` on a sympy matrix."""
    d = len(xs)
    out = {}
    for i in range(d):
        for j in range(d):
            for k in range(d):
                val = sum(pi[i, l] * sp.diff(pi[j, k], xs[l]) + pi[j, l] * sp.diff(pi[k, i], xs[l])
                          + pi[k, l] * sp.diff(pi[i, j], xs[l]) for l in range(d))
                out[(i, j, k)] = sp.expand(val)
    return out


def de_rham_3form(H, xs):
    """``(dH)_{lijk} = d_l H_ijk - d_i H_ljk + d_j H_lik - d_k H_lij``."""
    d = len(xs)
    out = {}
    for l in range(d):
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    v = (sp.diff(H[i][j][k], xs[l]) - sp.diff(H[l][j][k], xs[i])
                         + sp.diff(H[l][i][k], xs[j]) - sp.diff(H[l][i][j], xs[k]))
                    out[(l, i, j, k)] = sp.expand(v)
    return out


def lie_derivative_form(X, w, xs):
    """Flat Lie derivative of a 1-form: ``(L_X w)_i = X^k d_k w_i + w_k d_i X^k``."""
    d = len(xs)
    return [sp.expand(sum(X[k] * sp.diff(w[i], xs[k]) + w[k] * sp.diff(X[k], xs[i]) for k in range(d)))
            for i in range(d)]


def lie_bracket(X, Y, xs):
    d = len(xs)
    return [sp.expand(sum(X[k] * sp.diff(Y[i], xs[k]) - Y[k] * sp.diff(X[i], xs[k]) for k in range(d)))
            for i in range(d)]


def classical_courant(X, eta, Y, w, xs):
    """``[X,Y] + L_X w - L_Y eta + 1/2 d(i_Y eta - i_X w)`` on sympy components."""
    d = len(xs)
    vec = lie_bracket(X, Y, xs)
    lxw = lie_derivative_form(X, w, xs)
    lye = lie_derivative_form(Y, eta, xs)
    g = sum(Y[k] * eta[k] - X[k] * w[k] for k in range(d))
    form = [sp.expand(lxw[i] - lye[i] + sp.Rational(1, 2) * sp.diff(g, xs[i])) for i in range(d)]
    return vec, form
