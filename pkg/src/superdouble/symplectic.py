"""Canonical even Poisson bracket on T*ΠA and its doubled variant.

Sign convention (fixed once, everything else follows)::

    {f, g} = sum over even pairs (q, p):
                 (f d/dp)(d/dq g) - (f d/dq)(d/dp g)
           + sum over odd pairs (u, v):
                 (f dR/du)(dL/dv g) + (f dR/dv)(dL/du g)

with right derivatives on ``f`` and left derivatives on ``g``. Hence
``{p_a, x^b} = {x*_a, x^b} = delta``, ``{xi^a, xi*_b} = {xi*_b, xi^a} = delta``
and ``{mu, f(x)} = +d f`` for ``mu = x*_i xi^i``.
"""
from __future__ import annotations

import os

from .algebra import Chart, Expression, Generator, _check_same_chart, partial, partial_right

# mutation hook for the self-test negative control: "odd-sign" flips the odd
# pair contribution of the bracket
_FAULT = os.environ.get("SUPERDOUBLE_INJECT_FAULT", "")
_ODD_SIGN = -1 if _FAULT == "odd-sign" else 1


def poisson(f: Expression, g: Expression) -> Expression:
    _check_same_chart(f, g)
    chart = f.chart
    result = Expression.zero(chart)
    if f.is_zero or g.is_zero:
        return result
    used_f = f.generators_used()
    used_g = g.generators_used()
    even_pairs, odd_pairs = chart.conjugate_pairs
    for q, p in even_pairs:
        if p in used_f and q in used_g:
            result = result + partial_right(p, f) * partial(q, g)
        if q in used_f and p in used_g:
            result = result - partial_right(q, f) * partial(p, g)
    for u, v in odd_pairs:
        if u in used_f and v in used_g:
            result = result + (partial_right(u, f) * partial(v, g)).scale(_ODD_SIGN)
        if v in used_f and u in used_g:
            result = result + (partial_right(v, f) * partial(u, g)).scale(_ODD_SIGN)
    return result


_LEGENDRE_FAMILIES = {"x": "x", "xs": "xs", "th": "xis", "ths": "xi"}


def legendre(f: Expression) -> Expression:
    """Pull back from the dual chart: theta_i -> xi*_i, theta*^i -> xi^i."""
    src = f.chart
    if src.mode != "dual":
        raise ValueError(f"legendre expects a dual-chart Expression, got {src.mode}")
    dst = Chart(src.dim, "base")
    result = Expression.zero(dst)
    for mono in f.monomials():
        factors = [Generator(_LEGENDRE_FAMILIES[g.family], g.index)
                   for g, e in mono.even for _ in range(e)]
        factors += [Generator(_LEGENDRE_FAMILIES[g.family], g.index) for g in mono.odd]
        term = Expression.constant(dst, mono.coeff)
        for g in factors:
            term = term * Expression.generator(dst, g)
        result = result + term
    return result


def legendre_inverse(f: Expression) -> Expression:
    """Push forward to the dual chart: xi*_i -> theta_i, xi^i -> theta*^i."""
    src = f.chart
    if src.mode != "base":
        raise ValueError(f"legendre_inverse expects a base-chart Expression, got {src.mode}")
    back = {v: k for k, v in _LEGENDRE_FAMILIES.items()}
    dst = Chart(src.dim, "dual")
    result = Expression.zero(dst)
    for mono in f.monomials():
        term = Expression.constant(dst, mono.coeff)
        for g, e in mono.even:
            term = term * Expression.generator(dst, Generator(back[g.family], g.index)) ** e
        for g in mono.odd:
            term = term * Expression.generator(dst, Generator(back[g.family], g.index))
        result = result + term
    return result


def derived(h: Expression, f: Expression, g: Expression) -> Expression:
    """The derived bracket ``{{h, f}, g}``."""
    return poisson(poisson(h, f), g)


def hamiltonian_action(h: Expression, f: Expression) -> Expression:
    """``D_h f = {h, f}``."""
    return poisson(h, f)
