"""Doubled chart (x, xt, p, pt, xi, xis): lifts of double sections, the
C-bracket as a derived bracket, the strong constraint, projection to half of
the coordinates and the generalized Lie derivative.

``dt^a`` below is the derivative along ``xt_a``. In O(d,d) index form a double
vector is ``S^M = (X^i, eta_i)``, ``S_M = (eta_i, X^i)``, ``d_M = (d_i, dt^i)``
and ``d^M = (dt^i, d_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import Chart, Expression, Generator, partial, substitute
from .symplectic import derived, hamiltonian_action, poisson

HALF = mpq(1, 2)


def doubled_chart(d: int) -> Chart:
    return Chart(d, "doubled")


def _coefficient(name, e: Expression):
    if e.chart.mode != "doubled":
        raise ValueError(f"{name} must live on the doubled chart")
    bad = e.families_used() - {"x", "xt"}
    if bad:
        raise ValueError(f"{name} must depend on x, xt only, uses {sorted(bad)}")


@dataclass(frozen=True)
class DoubleSection:
    X: tuple
    eta: tuple

    def __post_init__(self):
        if len(self.X) != len(self.eta) or not self.X:
            raise ValueError("vector and form parts must be non-empty and of equal length")
        for e in self.X + self.eta:
            _coefficient("double section coefficient", e)
        charts = {e.chart for e in self.X + self.eta}
        if len(charts) != 1:
            raise ValueError("coefficients live on different charts")

    @property
    def d(self) -> int:
        return len(self.X)

    @property
    def chart(self) -> Chart:
        return self.X[0].chart

    @classmethod
    def zero(cls, d: int):
        c = doubled_chart(d)
        return cls(tuple(c.zero() for _ in range(d)), tuple(c.zero() for _ in range(d)))

    @property
    def upper(self):
        """``S^M`` as a 2d-tuple."""
        return self.X + self.eta

    @property
    def lower(self):
        """``S_M = eta_{MN} S^N``."""
        return self.eta + self.X

    @classmethod
    def from_upper(cls, comps):
        d = len(comps) // 2
        return cls(tuple(comps[:d]), tuple(comps[d:]))

    def __sub__(self, other):
        return DoubleSection(tuple(a - b for a, b in zip(self.X, other.X)),
                             tuple(a - b for a, b in zip(self.eta, other.eta)))

    @property
    def is_zero(self):
        return all(e.is_zero for e in self.upper)


def _scalar(phi: Expression):
    _coefficient("double scalar", phi)


def dx(a: int, e: Expression) -> Expression:
    return partial(Generator("x", a + 1), e)


def dxt(a: int, e: Expression) -> Expression:
    return partial(Generator("xt", a + 1), e)


def d_lower(M: int, d: int, e: Expression) -> Expression:
    """``d_M``: ``d_i`` for M < d, ``dt^i`` otherwise."""
    return dx(M, e) if M < d else dxt(M - d, e)


def d_upper(M: int, d: int, e: Expression) -> Expression:
    """``d^M = eta^{MN} d_N``: ``dt^i`` for M < d, ``d_i`` otherwise."""
    return dxt(M, e) if M < d else dx(M - d, e)


# -- lifts and mu ------------------------------------------------------------------

def lift_double(s: DoubleSection) -> Expression:
    """``X^i xi*_i + eta_i xi^i``."""
    c = s.chart
    out = c.zero()
    for i in range(s.d):
        if s.X[i]:
            out = out + s.X[i] * c.gen("xis", i + 1)
        if s.eta[i]:
            out = out + s.eta[i] * c.gen("xi", i + 1)
    return out


def section_of(e: Expression) -> DoubleSection:
    """Read ``(X, eta)`` back off an Expression linear in the odd generators."""
    c = e.chart
    d = c.dim
    X = [c.zero()] * d
    eta = [c.zero()] * d
    for mask, part in e.odd_components().items():
        if mask == 0 or mask & (mask - 1):
            raise ValueError(f"not linear in the odd generators: {e}")
        bit = mask.bit_length() - 1
        if bit < d:
            eta[bit] = part
        else:
            X[bit - d] = part
    return DoubleSection(tuple(X), tuple(eta))


def mu_dft(d: int) -> Expression:
    """``xi^a p_a + xi*_a pt^a``."""
    c = doubled_chart(d)
    return sum((c.gen("xi", a) * c.gen("p", a) + c.gen("xis", a) * c.gen("pt", a)
                for a in range(1, d + 1)), c.zero())


# -- C-bracket ---------------------------------------------------------------------

def _same_d(s1, s2):
    if s1.d != s2.d:
        raise ValueError(f"dimension mismatch: {s1.d} vs {s2.d}")


def circle(s1: DoubleSection, s2: DoubleSection) -> Expression:
    """``{{mu, lift s1}, lift s2}``."""
    _same_d(s1, s2)
    return derived(mu_dft(s1.d), lift_double(s1), lift_double(s2))


def c_bracket(s1: DoubleSection, s2: DoubleSection) -> Expression:
    """``1/2 (s1 o s2 - s2 o s1)`` as an Expression."""
    return (circle(s1, s2) - circle(s2, s1)).scale(HALF)


def c_bracket_components(s1: DoubleSection, s2: DoubleSection) -> DoubleSection:
    """The C-bracket assembled row by row from the vector/form split.

    With s1 = X + eta, s2 = Y + omega the bracket is the sum of the blocks
    [X,Y], [X,omega], [eta,Y], [eta,omega]; each block contributes one vector
    row and one form row.
    """
    _same_d(s1, s2)
    d = s1.d
    c = s1.chart
    X, eta, Y, omega = s1.X, s1.eta, s2.X, s2.eta
    rng = range(d)

    def S(terms):
        return sum(terms, c.zero())

    vec, form = [], []
    for i in rng:
        # [X, Y]: form row vanishes
        v = S(X[k] * dx(k, Y[i]) - Y[k] * dx(k, X[i]) for k in rng)
        f = c.zero()
        # [X, omega]
        f = f + S(X[k] * dx(k, omega[i]) for k in rng) \
            - HALF * S(X[k] * dx(i, omega[k]) - omega[k] * dx(i, X[k]) for k in rng)
        v = v - S(omega[k] * dxt(k, X[i]) for k in rng) \
            - HALF * S(X[k] * dxt(i, omega[k]) - omega[k] * dxt(i, X[k]) for k in rng)
        # [eta, Y]; the form row differentiates along x (the O(d,d) formula and
        # antisymmetry against the [X, omega] row both require d_i here)
        f = f - S(Y[k] * dx(k, eta[i]) for k in rng) \
            + HALF * S(Y[k] * dx(i, eta[k]) - eta[k] * dx(i, Y[k]) for k in rng)
        v = v + S(eta[k] * dxt(k, Y[i]) for k in rng) \
            + HALF * S(Y[k] * dxt(i, eta[k]) - eta[k] * dxt(i, Y[k]) for k in rng)
        # [eta, omega]: vector row vanishes
        f = f + S(eta[k] * dxt(k, omega[i]) - omega[k] * dxt(k, eta[i]) for k in rng)
        vec.append(v)
        form.append(f)
    return DoubleSection(tuple(vec), tuple(form))


def c_bracket_odd(s1: DoubleSection, s2: DoubleSection) -> DoubleSection:
    """O(d,d) form: ``S1^K d_K S2^M - S2^K d_K S1^M - 1/2 (S1^K d^M S2_K - S2^K d^M S1_K)``."""
    _same_d(s1, s2)
    d = s1.d
    n = 2 * d
    c = s1.chart
    up1, up2, lo1, lo2 = s1.upper, s2.upper, s1.lower, s2.lower
    out = []
    for M in range(n):
        v = c.zero()
        for K in range(n):
            v = v + up1[K] * d_lower(K, d, up2[M]) - up2[K] * d_lower(K, d, up1[M])
            v = v - HALF * (up1[K] * d_upper(M, d, lo2[K]) - up2[K] * d_upper(M, d, lo1[K]))
        out.append(v)
    return DoubleSection.from_upper(out)


# -- strong constraint ------------------------------------------------------------

def d_squared(phi: Expression) -> Expression:
    """``{mu, {mu, phi}}`` evaluated with the bracket; equals ``p_a dt^a phi + pt^a d_a phi``."""
    _scalar(phi)
    mu = mu_dft(phi.chart.dim)
    return hamiltonian_action(mu, hamiltonian_action(mu, phi))


def strong_constraint_pair(phi: Expression, psi: Expression) -> Expression:
    """``d_a phi dt^a psi + dt^a phi d_a psi``."""
    _scalar(phi)
    _scalar(psi)
    c = phi.chart
    return sum((dx(a, phi) * dxt(a, psi) + dxt(a, phi) * dx(a, psi) for a in range(c.dim)), c.zero())


def project_half(e: Expression) -> Expression:
    """Set every ``pt^a`` to zero."""
    c = e.chart
    if c.mode != "doubled":
        raise ValueError("project_half needs a doubled-chart Expression")
    zero = c.zero()
    for a in range(1, c.dim + 1):
        e = substitute(e, Generator("pt", a), zero)
    return e


def projected_circle(s1: DoubleSection, s2: DoubleSection) -> Expression:
    """``{{project_half(mu), lift s1}, lift s2}``: the bracket with ``pt = 0`` imposed."""
    _same_d(s1, s2)
    return derived(project_half(mu_dft(s1.d)), lift_double(s1), lift_double(s2))


def projected_c_bracket(s1: DoubleSection, s2: DoubleSection) -> Expression:
    return (projected_circle(s1, s2) - projected_circle(s2, s1)).scale(HALF)


def from_courant_section(s) -> DoubleSection:
    """Embed an x-only section of the algebroid module into the doubled chart."""
    c = doubled_chart(len(s.X))
    return DoubleSection(tuple(e.recast(c) for e in s.X), tuple(e.recast(c) for e in s.eta))


# -- generalized Lie derivative --------------------------------------------------------

def gen_lie_scalar(sigma: DoubleSection, phi: Expression) -> Expression:
    """``S^M d_M phi = X^a d_a phi + eta_a dt^a phi``."""
    _scalar(phi)
    d = sigma.d
    up = sigma.upper
    return sum((up[M] * d_lower(M, d, phi) for M in range(2 * d) if up[M]), phi.chart.zero())


def gen_lie_vector(sigma: DoubleSection, W: DoubleSection) -> DoubleSection:
    """Upper-index rule ``S^K d_K W^M - (d_K S^M - d^M S_K) W^K``."""
    _same_d(sigma, W)
    d = sigma.d
    n = 2 * d
    c = sigma.chart
    S_up, S_lo, W_up = sigma.upper, sigma.lower, W.upper
    out = []
    for M in range(n):
        v = c.zero()
        for K in range(n):
            v = v + S_up[K] * d_lower(K, d, W_up[M])
            v = v - (d_lower(K, d, S_up[M]) - d_upper(M, d, S_lo[K])) * W_up[K]
        out.append(v)
    return DoubleSection.from_upper(out)


def gen_lie_covector(sigma: DoubleSection, V_lower) -> tuple:
    """Lower-index rule ``S^K d_K V_M + (d_M S^K - d^K S_M) V_K`` on a 2d-tuple ``V_M``."""
    d = sigma.d
    n = 2 * d
    c = sigma.chart
    S_up, S_lo = sigma.upper, sigma.lower
    out = []
    for M in range(n):
        v = c.zero()
        for K in range(n):
            v = v + S_up[K] * d_lower(K, d, V_lower[M])
            v = v + (d_lower(M, d, S_up[K]) - d_upper(K, d, S_lo[M])) * V_lower[K]
        out.append(v)
    return tuple(out)


def gauge_commutator_scalar(s1: DoubleSection, s2: DoubleSection, phi: Expression) -> Expression:
    """``[delta_1, delta_2] phi`` for the gauge variations ``delta_S phi = L_S phi``.

    A variation acts on the field, not on the parameter, so
    ``delta_1 (delta_2 phi) = L_2 (L_1 phi)`` and the commutator is
    ``L_2 L_1 phi - L_1 L_2 phi``; on strong-constraint solutions it equals
    ``-L_{[s1, s2]_C} phi``.
    """
    return gen_lie_scalar(s2, gen_lie_scalar(s1, phi)) - gen_lie_scalar(s1, gen_lie_scalar(s2, phi))


def operator_commutator_scalar(s1: DoubleSection, s2: DoubleSection, phi: Expression) -> Expression:
    """``L_1 L_2 phi - L_2 L_1 phi`` (composition of operators)."""
    return -gauge_commutator_scalar(s1, s2, phi)
