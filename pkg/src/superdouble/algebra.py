"""Graded-commutative polynomial algebra over exact rationals.

Functions on a chart are polynomials in its even generators tensored with the
exterior algebra on its odd generators. An :class:`Expression` stores its terms
as three parallel arrays (even exponents, odd bitmask, ``mpq`` coefficient),
always in normal form: odd factors in canonical order with the Koszul sign
absorbed, like terms merged, zero terms dropped, rows lexicographically sorted.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Integral
from typing import Iterable, NamedTuple

import numpy as np
from gmpy2 import mpq

from . import kernels


class ChartMismatchError(ValueError):
    """Generator or operand does not belong to the chart in use."""


class ParityError(ValueError):
    """Operation requires matching (or homogeneous) parity."""


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return Parity((self.value + other.value) % 2)


INHOMOGENEOUS = "inhomogeneous"

# family -> (parity, surface prefix); prefixes are parsed greedily by expr_io
FAMILIES = {
    "x": (Parity.EVEN, "x"),
    "xt": (Parity.EVEN, "xt_"),
    "p": (Parity.EVEN, "p"),
    "pt": (Parity.EVEN, "pt_"),
    "xs": (Parity.EVEN, "xs_"),
    "xi": (Parity.ODD, "xi"),
    "xis": (Parity.ODD, "xis_"),
    "th": (Parity.ODD, "th"),
    "ths": (Parity.ODD, "ths_"),
}

# mode -> (even families, odd families), each in canonical order
MODES = {
    "base": (("x", "xs"), ("xi", "xis")),
    "doubled": (("x", "xt", "p", "pt"), ("xi", "xis")),
    "dual": (("x", "xs"), ("th", "ths")),
}

# conjugate pairs: even (coordinate, momentum) with {momentum, coordinate} = 1,
# odd (u, v) with {u, v} = {v, u} = 1
PAIRS = {
    "base": ((("x", "xs"),), (("xi", "xis"),)),
    "doubled": ((("x", "p"), ("xt", "pt")), (("xi", "xis"),)),
    "dual": ((("x", "xs"),), (("th", "ths"),)),
}


@dataclass(frozen=True, order=True)
class Generator:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown generator family {self.family!r}")
        if not isinstance(self.index, Integral) or self.index < 1:
            raise ValueError(f"generator index must be a positive integer, got {self.index!r}")

    @property
    def parity(self) -> Parity:
        return FAMILIES[self.family][0]

    @property
    def name(self) -> str:
        return f"{FAMILIES[self.family][1]}{self.index}"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Chart:
    """Dimension plus the generator families in play.

    ``base``: x, xs (x*), xi, xis (xi*). ``doubled``: x, xt, p, pt, xi, xis.
    ``dual``: x, xs, th (theta), ths (theta*), the chart Legendre maps from.
    """

    dim: int
    mode: str = "base"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown chart mode {self.mode!r}")
        if not isinstance(self.dim, Integral) or self.dim < 1:
            raise ValueError(f"chart dimension must be a positive integer, got {self.dim!r}")
        if 2 * self.dim > 62:
            raise ValueError("odd generators must fit in a 63-bit mask")

    @property
    def even_families(self):
        return MODES[self.mode][0]

    @property
    def odd_families(self):
        return MODES[self.mode][1]

    @property
    def n_even(self) -> int:
        return len(self.even_families) * self.dim

    @property
    def n_odd(self) -> int:
        return len(self.odd_families) * self.dim

    @cached_property
    def even_generators(self) -> tuple:
        return tuple(Generator(f, i) for f in self.even_families for i in range(1, self.dim + 1))

    @cached_property
    def odd_generators(self) -> tuple:
        return tuple(Generator(f, i) for f in self.odd_families for i in range(1, self.dim + 1))

    @cached_property
    def _slots(self) -> dict:
        slots = {g: ("even", k) for k, g in enumerate(self.even_generators)}
        slots.update({g: ("odd", k) for k, g in enumerate(self.odd_generators)})
        return slots

    def slot(self, g: Generator):
        """``("even", column)`` or ``("odd", bit)`` for a generator of this chart."""
        try:
            return self._slots[g]
        except KeyError:
            if g.family in self.even_families or g.family in self.odd_families:
                raise ChartMismatchError(
                    f"generator {g.name} has index outside chart dimension {self.dim}") from None
            raise ChartMismatchError(
                f"generator family {g.family!r} not in {self.mode} chart") from None

    def has(self, g: Generator) -> bool:
        return g in self._slots

    @property
    def conjugate_pairs(self):
        """Lists ``(even_pairs, odd_pairs)`` of generator pairs, per index."""
        even, odd = PAIRS[self.mode]
        rng = range(1, self.dim + 1)
        return (
            [(Generator(q, i), Generator(p, i)) for q, p in even for i in rng],
            [(Generator(u, i), Generator(v, i)) for u, v in odd for i in rng],
        )

    def gen(self, family: str, index: int) -> "Expression":
        return Expression.generator(self, Generator(family, index))

    def zero(self) -> "Expression":
        return Expression.zero(self)

    def const(self, c) -> "Expression":
        return Expression.constant(self, c)


class Monomial(NamedTuple):
    coeff: mpq
    even: tuple  # ((Generator, exponent), ...) in chart order
    odd: tuple  # (Generator, ...) strictly increasing in canonical order


def coeff(c) -> mpq:
    """Coerce an exact scalar to ``mpq``; floats are rejected."""
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, (Integral, type(mpq(0)))):
        return mpq(c)
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    if isinstance(c, str):
        return mpq(c)
    if hasattr(c, "p") and hasattr(c, "q"):  # sympy Rational
        return mpq(int(c.p), int(c.q))
    raise TypeError(f"not an exact rational: {c!r}")


def _objects(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = list(values)
    return out


_EMPTY_I = np.zeros(0, dtype=np.int64)


def _freeze(*arrays):
    for a in arrays:
        a.flags.writeable = False


class Expression:
    """Immutable normalized element of the graded algebra of a chart."""

    __slots__ = ("chart", "exps", "masks", "coeffs", "_hash")

    def __init__(self, chart: Chart, exps: np.ndarray, masks: np.ndarray, coeffs: np.ndarray):
        # trusted constructor: arrays must already be in normal form
        self.chart = chart
        self.exps = exps
        self.masks = masks
        self.coeffs = coeffs
        self._hash = None
        _freeze(exps, masks, coeffs)

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "Expression":
        return cls(chart, np.zeros((0, chart.n_even), dtype=np.int64), _EMPTY_I.copy(),
                   np.empty(0, dtype=object))

    @classmethod
    def constant(cls, chart: Chart, c) -> "Expression":
        c = coeff(c)
        if c == 0:
            return cls.zero(chart)
        return cls(chart, np.zeros((1, chart.n_even), dtype=np.int64),
                   np.zeros(1, dtype=np.int64), _objects([c]))

    @classmethod
    def generator(cls, chart: Chart, g: Generator) -> "Expression":
        kind, k = chart.slot(g)
        exps = np.zeros((1, chart.n_even), dtype=np.int64)
        mask = np.zeros(1, dtype=np.int64)
        if kind == "even":
            exps[0, k] = 1
        else:
            mask[0] = 1 << k
        return cls(chart, exps, mask, _objects([mpq(1)]))

    @classmethod
    def combine(cls, chart: Chart, exps, masks, coeffs) -> "Expression":
        """Merge like keys, drop zeros, sort rows. Keys must already be canonical."""
        n = masks.shape[0]
        if n == 0:
            return cls.zero(chart)
        keys = np.column_stack([exps, masks]) if exps.shape[1] else masks[:, None]
        order = np.lexsort(keys.T[::-1])
        keys = keys[order]
        coeffs = coeffs[order]
        fresh = np.ones(n, dtype=bool)
        fresh[1:] = np.any(keys[1:] != keys[:-1], axis=1)
        starts = np.flatnonzero(fresh)
        if starts.shape[0] != n:
            coeffs = np.add.reduceat(coeffs, starts)
            keys = keys[starts]
        keep = np.fromiter((c != 0 for c in coeffs), dtype=bool, count=coeffs.shape[0])
        if not keep.all():
            keys = keys[keep]
            coeffs = coeffs[keep]
        ne = chart.n_even
        return cls(chart, np.ascontiguousarray(keys[:, :ne]), np.ascontiguousarray(keys[:, ne]),
                   np.array(coeffs, dtype=object))

    # -- inspection ---------------------------------------------------------

    def __len__(self):
        return self.masks.shape[0]

    @property
    def is_zero(self) -> bool:
        return self.masks.shape[0] == 0

    def __bool__(self):
        return not self.is_zero

    def monomials(self):
        ev, od = self.chart.even_generators, self.chart.odd_generators
        for row, mask, c in zip(self.exps, self.masks, self.coeffs):
            even = tuple((ev[k], int(e)) for k, e in enumerate(row) if e)
            odd = tuple(od[b] for b in range(self.chart.n_odd) if (int(mask) >> b) & 1)
            yield Monomial(c, even, odd)

    def generators_used(self) -> set:
        used = {self.chart.even_generators[k] for k in np.flatnonzero(self.exps.any(axis=0))}
        allmask = int(np.bitwise_or.reduce(self.masks)) if len(self) else 0
        used.update(g for b, g in enumerate(self.chart.odd_generators) if (allmask >> b) & 1)
        return used

    def families_used(self) -> set:
        return {g.family for g in self.generators_used()}

    def constant_term(self) -> mpq:
        for row, mask, c in zip(self.exps, self.masks, self.coeffs):
            if mask == 0 and not row.any():
                return c
        return mpq(0)

    def odd_components(self) -> dict:
        """Split by odd part: ``{odd_mask: purely even Expression}``."""
        out = {}
        for mask in np.unique(self.masks):
            sel = self.masks == mask
            out[int(mask)] = Expression(self.chart, self.exps[sel].copy(),
                                        np.zeros(int(sel.sum()), dtype=np.int64),
                                        self.coeffs[sel].copy())
        return out

    def recast(self, chart: Chart) -> "Expression":
        """The same polynomial viewed on another chart (generators matched by name)."""
        if chart == self.chart:
            return self
        if self.is_zero:
            return Expression.zero(chart)
        src = self.chart
        emap = [chart.slot(g)[1] if np.any(self.exps[:, k]) else None
                for k, g in enumerate(src.even_generators)]
        exps = np.zeros((len(self), chart.n_even), dtype=np.int64)
        for k, dst in enumerate(emap):
            if dst is not None:
                exps[:, dst] = self.exps[:, k]
        masks = np.zeros(len(self), dtype=np.int64)
        for b, g in enumerate(src.odd_generators):
            hit = (self.masks >> b) & 1
            if hit.any():
                masks |= hit << chart.slot(g)[1]
        # odd bit order may differ between charts; re-sort with signs
        raw = []
        for row, m_old, m_new, c in zip(exps, self.masks, masks, self.coeffs):
            bits = [chart.slot(src.odd_generators[b])[1]
                    for b in range(src.n_odd) if (int(m_old) >> b) & 1]
            sign = _permutation_sign(bits)
            raw.append((row, int(m_new), c * sign))
        return Expression.combine(chart, np.array([r[0] for r in raw], dtype=np.int64).reshape(-1, chart.n_even),
                                  np.array([r[1] for r in raw], dtype=np.int64),
                                  _objects([r[2] for r in raw]))

    # -- equality / hashing ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Expression):
            return (self.chart == other.chart and len(self) == len(other)
                    and np.array_equal(self.exps, other.exps)
                    and np.array_equal(self.masks, other.masks)
                    and all(a == b for a, b in zip(self.coeffs, other.coeffs)))
        try:
            c = coeff(other)
        except TypeError:
            return NotImplemented
        return self == Expression.constant(self.chart, c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, self.exps.tobytes(), self.masks.tobytes(),
                               tuple(self.coeffs)))
        return self._hash

    def __repr__(self):
        return f"Expression({str(self)!r}, chart={self.chart})"

    def __str__(self):
        from .expr_io import print_expression
        return print_expression(self)

    # -- arithmetic -----------------------------------------------------------

    def _lift(self, other) -> "Expression":
        if isinstance(other, Expression):
            if other.chart != self.chart:
                raise ChartMismatchError(f"chart mismatch: {self.chart} vs {other.chart}")
            return other
        return Expression.constant(self.chart, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Expression):
            return mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        c = coeff(other)
        if c == 0:
            raise ZeroDivisionError("division of an Expression by zero")
        return self.scale(1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, Integral) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Expression.constant(self.chart, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Expression":
        c = coeff(c)
        if c == 0 or self.is_zero:
            return Expression.zero(self.chart)
        return Expression(self.chart, self.exps, self.masks, self.coeffs * c)


def _permutation_sign(seq) -> int:
    """Sign of the sorting permutation of distinct integers (inversion count)."""
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


def _check_same_chart(a: Expression, b: Expression):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart mismatch: {a.chart} vs {b.chart}")


# -- the operation contracts --------------------------------------------------

def normalize(raw_terms: Iterable, chart: Chart) -> Expression:
    """Normal form of raw ``(coefficient, [factor, ...])`` terms.

    Factors are :class:`Generator` instances in the order written; odd factors
    are sorted with the Koszul sign and terms with a repeated odd factor vanish.
    A :class:`Monomial` or an :class:`Expression` is also accepted as input.
    """
    if isinstance(raw_terms, Expression):
        if raw_terms.chart != chart:
            raise ChartMismatchError(f"chart mismatch: {raw_terms.chart} vs {chart}")
        return raw_terms
    rows, masks, cs = [], [], []
    for term in raw_terms:
        if isinstance(term, Monomial):
            c = term.coeff
            factors = [g for g, e in term.even for _ in range(e)] + list(term.odd)
        else:
            c, factors = term
        row = np.zeros(chart.n_even, dtype=np.int64)
        bits = []
        for g in factors:
            if not isinstance(g, Generator):
                g = Generator(*g)
            kind, k = chart.slot(g)
            if kind == "even":
                row[k] += 1
            else:
                bits.append(k)
        if len(set(bits)) != len(bits):
            continue
        c = coeff(c) * _permutation_sign(bits)
        rows.append(row)
        masks.append(sum(1 << b for b in bits))
        cs.append(c)
    if not rows:
        return Expression.zero(chart)
    return Expression.combine(chart, np.array(rows, dtype=np.int64).reshape(-1, chart.n_even),
                              np.array(masks, dtype=np.int64), _objects(cs))


def add(a: Expression, b: Expression) -> Expression:
    _check_same_chart(a, b)
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    return Expression.combine(a.chart, np.concatenate([a.exps, b.exps]),
                              np.concatenate([a.masks, b.masks]),
                              np.concatenate([a.coeffs, b.coeffs]))


def mul(a: Expression, b: Expression) -> Expression:
    _check_same_chart(a, b)
    if a.is_zero or b.is_zero:
        return Expression.zero(a.chart)
    ia, ib, exps, masks, signs = kernels.product_keys(a.exps, a.masks, b.exps, b.masks,
                                                      a.chart.n_odd)
    if ia.shape[0] == 0:
        return Expression.zero(a.chart)
    coeffs = a.coeffs[ia] * b.coeffs[ib] * signs.astype(object)
    return Expression.combine(a.chart, exps, masks, coeffs)


def _odd_derivative(g: Generator, a: Expression, right: bool) -> Expression:
    bit = a.chart.slot(g)[1]
    sel = ((a.masks >> bit) & 1).astype(bool)
    if not sel.any():
        return Expression.zero(a.chart)
    masks = a.masks[sel]
    par = kernels.suffix_parity(masks, bit) if right else kernels.prefix_parity(masks, bit)
    signs = (1 - 2 * par).astype(object)
    return Expression.combine(a.chart, a.exps[sel].copy(), masks ^ (1 << bit),
                              a.coeffs[sel] * signs)


def partial(g: Generator, a: Expression) -> Expression:
    """Derivative by a generator; LEFT derivative for odd generators."""
    kind, k = a.chart.slot(g)
    if kind == "odd":
        return _odd_derivative(g, a, right=False)
    sel = a.exps[:, k] > 0
    if not sel.any():
        return Expression.zero(a.chart)
    exps = a.exps[sel].copy()
    coeffs = a.coeffs[sel] * exps[:, k].astype(object)
    exps[:, k] -= 1
    return Expression.combine(a.chart, exps, a.masks[sel].copy(), coeffs)


def partial_right(g: Generator, a: Expression) -> Expression:
    """Right derivative (equals :func:`partial` for even generators)."""
    if g.parity is Parity.EVEN:
        return partial(g, a)
    return _odd_derivative(g, a, right=True)


def parity_of(a: Expression):
    """:class:`Parity` if every term agrees, else :data:`INHOMOGENEOUS`.

    The zero Expression is reported as even.
    """
    if a.is_zero:
        return Parity.EVEN
    par = np.bitwise_count(a.masks) & 1
    if np.all(par == par[0]):
        return Parity(int(par[0]))
    return INHOMOGENEOUS


def substitute(a: Expression, g: Generator, v: Expression) -> Expression:
    """Replace every occurrence of ``g`` by ``v``.

    Odd ``g`` is first moved to the front of each term (left-derivative
    convention), so ``substitute(a, g, v) = a|_{g=0} + v * partial(g, a)``.
    """
    _check_same_chart(a, v)
    if not v.is_zero and parity_of(v) != g.parity:
        raise ParityError(f"cannot substitute {parity_of(v)} value for {g.parity} generator {g.name}")
    kind, k = a.chart.slot(g)
    if kind == "odd":
        keep = ((a.masks >> k) & 1) == 0
        rest = Expression.combine(a.chart, a.exps[keep].copy(), a.masks[keep].copy(),
                                  a.coeffs[keep].copy())
        return rest + v * partial(g, a)
    result = Expression.zero(a.chart)
    for e in np.unique(a.exps[:, k]):
        sel = a.exps[:, k] == e
        exps = a.exps[sel].copy()
        exps[:, k] = 0
        part = Expression.combine(a.chart, exps, a.masks[sel].copy(), a.coeffs[sel].copy())
        result = result + (v ** int(e)) * part
    return result
