"""Seeded random inputs for the identity checks.

Every sampler takes a ``numpy.random.Generator``; ``rng(seed)`` builds the
PCG64 generator used throughout, so (seed, dim, degree, count) fully determine
the samples on every platform.
"""
from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
from gmpy2 import mpq

from .algebra import Chart, Expression, normalize
from .algebroid import CourantSection
from .dft import DoubleSection


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def rational(gen: np.random.Generator, lo: int = -3, hi: int = 3, den_max: int = 3) -> mpq:
    num = int(gen.integers(lo, hi + 1))
    den = int(gen.integers(1, den_max + 1))
    return mpq(num, den)


def polynomial(gen, chart: Chart, families, degree: int, max_terms: int = 4) -> Expression:
    """Random polynomial of total degree <= ``degree`` in the given even families."""
    variables = [g for g in chart.even_generators if g.family in families]
    monos = [()] + [m for k in range(1, degree + 1)
                    for m in combinations_with_replacement(variables, k)]
    n = int(gen.integers(1, max_terms + 1))
    picks = gen.choice(len(monos), size=min(n, len(monos)), replace=False)
    return normalize([(rational(gen), monos[int(i)]) for i in picks], chart)


def double_scalar(gen, d: int, degree: int = 2, x_only: bool = False) -> Expression:
    fams = ("x",) if x_only else ("x", "xt")
    return polynomial(gen, Chart(d, "doubled"), fams, degree)


def double_section(gen, d: int, degree: int = 2, x_only: bool = False, parts: str = "both",
                   density: float = 0.7) -> DoubleSection:
    """``parts`` is ``both``, ``vector`` or ``form``."""
    c = Chart(d, "doubled")
    fams = ("x",) if x_only else ("x", "xt")

    def comp(active):
        if not active or gen.random() > density:
            return c.zero()
        return polynomial(gen, c, fams, degree)

    X = tuple(comp(parts in ("both", "vector")) for _ in range(d))
    eta = tuple(comp(parts in ("both", "form")) for _ in range(d))
    return DoubleSection(X, eta)


def courant_section(gen, d: int, degree: int = 2, density: float = 0.7) -> CourantSection:
    c = Chart(d, "base")

    def comp():
        return polynomial(gen, c, ("x",), degree) if gen.random() <= density else c.zero()

    return CourantSection(tuple(comp() for _ in range(d)), tuple(comp() for _ in range(d)))


def homogeneous_monomial(gen, chart: Chart, max_even_degree: int = 3) -> Expression:
    """One random monomial: random even part of degree <= max, random odd subset."""
    deg = int(gen.integers(0, max_even_degree + 1))
    evens = [chart.even_generators[int(i)] for i in gen.integers(0, chart.n_even, size=deg)]
    odds = [g for g in chart.odd_generators if gen.random() < 0.3]
    order = gen.permutation(len(odds))
    odds = [odds[int(i)] for i in order]
    c = rational(gen)
    if c == 0:
        c = mpq(1)
    return normalize([(c, evens + odds)], chart)


def expression(gen, chart: Chart, max_terms: int = 5, max_even_degree: int = 3) -> Expression:
    n = int(gen.integers(0, max_terms + 1))
    return sum((homogeneous_monomial(gen, chart, max_even_degree) for _ in range(n)), chart.zero())


def rational_matrix_pair(gen, d: int):
    """Random (G, B): G symmetric invertible, B antisymmetric, rational entries."""
    import sympy as sp
    while True:
        A = sp.Matrix(d, d, lambda i, j: sp.Rational(int(gen.integers(-3, 4)), int(gen.integers(1, 4))))
        G = A + A.T + sp.eye(d) * int(gen.integers(0, 3))
        if G.det() != 0:
            break
    Bm = sp.Matrix(d, d, lambda i, j: sp.Rational(int(gen.integers(-3, 4)), int(gen.integers(1, 4))))
    return G, Bm - Bm.T
