"""Seeded verification suites shared by ``superdouble check`` and ``selftest``.

Each suite returns a list of :class:`VerificationReport`. Negative controls
are reported as passing when the defect is detected (residual nonzero).
"""
from __future__ import annotations

from itertools import permutations

from gmpy2 import mpq

from . import algebroid as alg
from . import dft, genmetric, sampling
from .algebra import Chart, Expression, Parity, mul, normalize, parity_of, partial
from .expr_io import parse_expression, print_expression
from .report import VerificationReport, stopwatch, zero_report
from .symplectic import poisson


def _first_nonzero(residuals):
    for r in residuals:
        if r is not None and not r.is_zero:
            return r
    return None


def _suite(name, fn, samples):
    """Run ``fn(i)`` (returning a residual Expression) for each sample."""
    with stopwatch() as t:
        residual = _first_nonzero(fn(i) for i in range(samples))
    return zero_report(name, residual, t[0], f"{samples} samples")


def _detects(name, residual, elapsed=0.0):
    ok = residual is not None and not residual.is_zero
    return VerificationReport(name, ok, None, elapsed, "defect detected" if ok else "defect missed")


# -- kernel and bracket laws ---------------------------------------------------------

def kernel_laws(seed=0, samples=200, dim=3):
    gen = sampling.rng(seed)
    c = Chart(dim, "base")
    reports = []

    def homog(i):
        return sampling.homogeneous_monomial(gen, c)

    def sign(a, b):
        return -1 if (parity_of(a) is Parity.ODD and parity_of(b) is Parity.ODD) else 1

    def comm(i):
        a, b = homog(i), homog(i)
        return mul(a, b) - mul(b, a).scale(sign(a, b))

    def assoc(i):
        a, b, e = (sampling.expression(gen, c, 3) for _ in range(3))
        return (a * b) * e - a * (b * e)

    def nilpotent(i):
        a = sampling.homogeneous_monomial(gen, c)
        while parity_of(a) is not Parity.ODD:
            a = sampling.homogeneous_monomial(gen, c)
        a = a + a * c.gen("x", 1)
        return a * a

    def idempotent(i):
        raw = []
        for _ in range(int(gen.integers(1, 5))):
            n = int(gen.integers(0, 5))
            gens = c.even_generators + c.odd_generators
            raw.append((sampling.rational(gen), [gens[int(j)] for j in gen.integers(0, len(gens), n)]))
        once = normalize(raw, c)
        return once - normalize(once, c)

    def double_odd(i):
        a = sampling.expression(gen, c)
        g = c.odd_generators[int(gen.integers(0, c.n_odd))]
        return partial(g, partial(g, a))

    def leibniz(i):
        a, b = homog(i), sampling.expression(gen, c)
        g = (c.even_generators + c.odd_generators)[int(gen.integers(0, c.n_even + c.n_odd))]
        s = -1 if (g.parity is Parity.ODD and parity_of(a) is Parity.ODD) else 1
        return partial(g, a * b) - partial(g, a) * b - (a * partial(g, b)).scale(s)

    reports.append(_suite("kernel.normalize_idempotent", idempotent, samples))
    reports.append(_suite("kernel.graded_commutativity", comm, samples))
    reports.append(_suite("kernel.associativity", assoc, samples))
    reports.append(_suite("kernel.odd_nilpotence", nilpotent, samples))
    reports.append(_suite("kernel.double_odd_derivative", double_odd, samples))
    reports.append(_suite("kernel.partial_leibniz", leibniz, samples))
    return reports


def conjugation_table(chart: Chart):
    """Residual of all generator-pair brackets against the Darboux table."""
    even_pairs, odd_pairs = chart.conjugate_pairs
    expected = {}
    for q, p in even_pairs:
        expected[(p, q)] = 1
        expected[(q, p)] = -1
    for u, v in odd_pairs:
        expected[(u, v)] = 1
        expected[(v, u)] = 1
    gens = chart.even_generators + chart.odd_generators
    bad = []
    for a in gens:
        for b in gens:
            got = poisson(Expression.generator(chart, a), Expression.generator(chart, b))
            if got != chart.const(expected.get((a, b), 0)):
                bad.append(f"{{{a.name},{b.name}}}={got}")
    return bad


def poisson_laws(seed=0, samples=500, dim=2, mode="doubled", max_even_degree=3):
    gen = sampling.rng(seed)
    c = Chart(dim, mode)
    triples = [tuple(sampling.homogeneous_monomial(gen, c, max_even_degree) for _ in range(3))
               for _ in range(samples)]

    def par(e):
        return 1 if parity_of(e) is Parity.ODD else 0

    def antisym(i):
        f, g, _ = triples[i]
        return poisson(f, g) + poisson(g, f).scale((-1) ** (par(f) * par(g)))

    def leibniz(i):
        f, g, h = triples[i]
        return poisson(f, g * h) - poisson(f, g) * h - (g * poisson(f, h)).scale((-1) ** (par(f) * par(g)))

    def jacobi(i):
        f, g, h = triples[i]
        return poisson(f, poisson(g, h)) - poisson(poisson(f, g), h) \
            - poisson(g, poisson(f, h)).scale((-1) ** (par(f) * par(g)))

    def parity(i):
        f, g, _ = triples[i]
        b = poisson(f, g)
        if b.is_zero or parity_of(b).value == (par(f) + par(g)) % 2:
            return None
        return b

    tag = f"poisson.{mode}"
    reports = [
        _suite(f"{tag}.antisymmetry", antisym, samples),
        _suite(f"{tag}.leibniz", leibniz, samples),
        _suite(f"{tag}.jacobi", jacobi, samples),
        _suite(f"{tag}.parity", parity, samples),
    ]
    with stopwatch() as t:
        bad = conjugation_table(c)
    reports.append(VerificationReport(f"{tag}.conjugation_table", not bad, "; ".join(bad[:3]) or None, t[0]))
    return reports


# -- dft ------------------------------------------------------------------------

def c_bracket_routes(dim=2, degree=2, samples=20, seed=0):
    gen = sampling.rng(seed)
    pairs = [(sampling.double_section(gen, dim, degree), sampling.double_section(gen, dim, degree))
             for _ in range(samples)]
    return [
        _suite("cbracket.derived_vs_rows",
               lambda i: dft.c_bracket(*pairs[i]) - dft.lift_double(dft.c_bracket_components(*pairs[i])),
               samples),
        _suite("cbracket.derived_vs_odd",
               lambda i: dft.c_bracket(*pairs[i]) - dft.lift_double(dft.c_bracket_odd(*pairs[i])),
               samples),
    ]


def cbracket_rows(dim=2, degree=2, samples=10, seed=0):
    gen = sampling.rng(seed)
    vv = [(sampling.double_section(gen, dim, degree, parts="vector"),
           sampling.double_section(gen, dim, degree, parts="vector")) for _ in range(samples)]
    ff = [(sampling.double_section(gen, dim, degree, parts="form"),
           sampling.double_section(gen, dim, degree, parts="form")) for _ in range(samples)]

    def form_part(i):
        return _odd_filter(dft.c_bracket(*vv[i]), "xi")

    def vector_part(i):
        return _odd_filter(dft.c_bracket(*ff[i]), "xis")

    c = dft.doubled_chart(1)
    s1 = dft.DoubleSection((c.gen("x", 1),), (c.zero(),))
    s2 = dft.DoubleSection((c.zero(),), (c.gen("xt", 1),))
    expected = parse_expression("-1/2*x1*xis_1 + 1/2*xt_1*xi1", c)
    return [
        _suite("cbracket.vector_vector_form_part_zero", form_part, samples),
        _suite("cbracket.form_form_vector_part_zero", vector_part, samples),
        zero_report("cbracket.d1_hand_example", dft.c_bracket(s1, s2) - expected),
    ]


def _odd_filter(e: Expression, family: str) -> Expression:
    """Terms of ``e`` carrying an odd generator of ``family``."""
    bits = [b for b, g in enumerate(e.chart.odd_generators) if g.family == family]
    mask = sum(1 << b for b in bits)
    sel = (e.masks & mask) != 0
    return Expression.combine(e.chart, e.exps[sel].copy(), e.masks[sel].copy(), e.coeffs[sel].copy())


def strong(dim=3, degree=2, samples=20, seed=0):
    gen = sampling.rng(seed)
    pairs = [(sampling.double_scalar(gen, dim, degree), sampling.double_scalar(gen, dim, degree))
             for _ in range(samples)]
    c = dft.doubled_chart(dim)
    x1, xt1 = c.gen("x", 1), c.gen("xt", 1)
    reports = [_suite("strong.d_squared_bracket",
                      lambda i: poisson(dft.d_squared(pairs[i][0]), pairs[i][1])
                      - dft.strong_constraint_pair(*pairs[i]), samples)]
    reports.append(zero_report("strong.point_x1_xt1",
                               dft.strong_constraint_pair(x1, xt1) - c.const(1)))
    if dim >= 2:
        reports.append(zero_report("strong.point_x1_x2", dft.strong_constraint_pair(x1, c.gen("x", 2))))
    return reports


def project(dim=2, degree=2, samples=10, seed=0):
    gen = sampling.rng(seed)
    B = alg.BialgebroidData(alg.tangent_bundle(dim), alg.zero_bialgebroid(dim).dual)
    pairs = [(sampling.courant_section(gen, dim, degree), sampling.courant_section(gen, dim, degree))
             for _ in range(samples)]

    def residual(i):
        a, b = pairs[i]
        projected = dft.project_half(dft.c_bracket(dft.from_courant_section(a), dft.from_courant_section(b)))
        classical = dft.lift_double(dft.from_courant_section(alg.courant_bracket(B, a, b)))
        return projected - classical

    def pt_zero(i):
        a, b = (dft.from_courant_section(s) for s in pairs[i])
        return dft.projected_c_bracket(a, b) - dft.project_half(dft.c_bracket(a, b))

    return [_suite("project.half_equals_classical_courant", residual, samples),
            _suite("project.mu_projection_commutes", pt_zero, samples)]


def genlie(dim=2, degree=2, samples=10, seed=0):
    gen = sampling.rng(seed)
    data = [(sampling.double_section(gen, dim, degree, x_only=True),
             sampling.double_section(gen, dim, degree, x_only=True),
             sampling.double_scalar(gen, dim, degree, x_only=True)) for _ in range(samples)]

    def closure(i):
        s1, s2, phi = data[i]
        br = dft.section_of(dft.c_bracket(s1, s2))
        return dft.gauge_commutator_scalar(s1, s2, phi) + dft.gen_lie_scalar(br, phi)

    def dorfman(i):
        s1, s2, _ = data[i]
        return dft.lift_double(dft.gen_lie_vector(s1, s2)) - dft.circle(s1, s2)

    return [_suite("genlie.commutator_closure", closure, samples),
            _suite("genlie.vector_is_dorfman", dorfman, samples)]


def metric(dim=3, samples=10, seed=0):
    gen = sampling.rng(seed)
    reports = []
    bad = None
    with stopwatch() as t:
        for _ in range(samples):
            d = int(gen.integers(1, dim + 1))
            G, B = sampling.rational_matrix_pair(gen, d)
            r = genmetric.check_odd_compat(genmetric.build_generalized_metric(G, B))
            if not r.passed:
                bad = r.residual
                break
    reports.append(VerificationReport("metric.H_eta_H", bad is None, bad, t[0], f"{samples} samples"))
    eta = genmetric.eta_form(dim)
    import sympy as sp
    reports.append(VerificationReport("metric.eta_squared", eta * eta == sp.eye(2 * dim)))
    return reports


# -- algebroid --------------------------------------------------------------------

def non_jacobi_bivector():
    """pi^12 = x1, pi^13 = x2, pi^23 = 0 (fails the Jacobi identity)."""
    c = Chart(3, "base")
    z, x1, x2 = c.zero(), c.gen("x", 1), c.gen("x", 2)
    return ((z, x1, x2), (-x1, z, z), (-x2, z, z))


def corrupted_so3():
    """so(3) Lie-Poisson data with structure functions [e1,e2] = e3, [e2,e3] = e2 (non-Jacobi)."""
    B = alg.so3_lie_poisson()
    c = B.chart
    f = [[[c.zero() for _ in range(3)] for _ in range(3)] for _ in range(3)]
    for k, i, j in ((2, 0, 1), (1, 1, 2)):
        f[k][i][j] = c.const(1)
        f[k][j][i] = c.const(-1)
    frozen = tuple(tuple(tuple(r) for r in plane) for plane in f)
    return alg.BialgebroidData(alg.LieAlgebroidData(3, B.primal.anchor, frozen), B.dual)


def bialgebroid_controls():
    so3 = alg.check_bialgebroid(alg.so3_lie_poisson(), "bialgebroid.so3_lie_poisson")
    pi = non_jacobi_bivector()
    r = alg.check_bialgebroid(alg.poisson_bialgebroid(pi))
    jac = alg.jacobiator(pi)
    jac_zero = all(v.is_zero for v in jac.values())
    neg = _detects("bialgebroid.non_jacobi_detected", r.residual if not r.passed else None, r.elapsed)
    agree = VerificationReport("bialgebroid.residual_iff_jacobiator",
                               (r.passed == jac_zero) and so3.passed == all(
                                   v.is_zero for v in alg.jacobiator(alg.so3_bivector()).values()))
    return [so3, neg, agree]


def courant(B=None, samples=10, degree=2, seed=0, controls=True, prefix="courant"):
    B = B or alg.so3_lie_poisson()
    gen = sampling.rng(seed)
    d = B.d
    triples = [tuple(sampling.courant_section(gen, d, degree) for _ in range(3)) for _ in range(samples)]
    funcs = [sampling.polynomial(gen, B.chart, ("x",), degree) for _ in range(samples)]
    reports = alg.check_courant_axioms(B, triples, funcs, prefix=prefix)
    reports.append(_suite(f"{prefix}.derived_vs_components",
                          lambda i: alg.dorfman_derived(B, triples[i][0], triples[i][1])
                          - alg.lift(alg.dorfman_components(B, triples[i][0], triples[i][1])), samples))
    if controls:
        bad = alg.check_courant_axioms(corrupted_so3(), triples[:2], funcs[:2], prefix="x")
        reports.append(_detects(f"{prefix}.corrupted_f_fails_axiom1", bad[0].residual, bad[0].elapsed))
    return reports


def proto_controls():
    d = 4
    c = Chart(d, "base")
    flat = alg.BialgebroidData(alg.tangent_bundle(d), alg.zero_bialgebroid(d).dual)

    def flux(H_value):
        H = [[[c.zero() for _ in range(d)] for _ in range(d)] for _ in range(d)]
        for p in permutations(range(3)):
            H[p[0]][p[1]][p[2]] = H_value * alg.levi_civita(*p)
        return alg.FluxData(tuple(tuple(tuple(r) for r in pl) for pl in H), alg.zero_flux(d).R)

    const = alg.check_proto(flat, flux(c.const(mpq(3, 2))), "proto.constant_H")
    lin = alg.check_proto(flat, flux(c.gen("x", 4)))
    so3 = alg.so3_lie_poisson()
    same = alg.check_proto(so3, alg.zero_flux(3)).residual == alg.check_bialgebroid(so3).residual
    bad = alg.poisson_bialgebroid(non_jacobi_bivector())
    same_bad = alg.check_proto(bad, alg.zero_flux(3)).residual == alg.check_bialgebroid(bad).residual
    return [const, _detects("proto.linear_H_dH_nonzero_detected", lin.residual, lin.elapsed),
            VerificationReport("proto.zero_flux_is_bialgebroid", same and same_bad)]


def ce_route(samples=5, seed=0):
    gen = sampling.rng(seed)
    B = alg.so3_lie_poisson()
    d = 3
    A = alg.LieAlgebroidData(d, B.dual.anchor, B.dual.structure)  # (T*M, pi) as a Lie algebroid
    tests = []
    for _ in range(samples):
        X = [sampling.courant_section(gen, d).X for _ in range(3)]
        f = sampling.polynomial(gen, B.chart, ("x",), 2)
        w = sampling.courant_section(gen, d).eta
        m = [[sampling.polynomial(gen, B.chart, ("x",), 1) for _ in range(d)] for _ in range(d)]
        two = tuple(tuple(m[i][j] - m[j][i] for j in range(d)) for i in range(d))
        tests += [(f, X[:1]), (w, X[:2]), (two, X[:3])]

    def residual(i):
        omega, secs = tests[i]
        return alg.ce_oracle(A, omega, secs) - alg.ce_hamiltonian(A, omega, secs)

    return [_suite("ce.oracle_vs_hamiltonian", residual, len(tests))]


def roundtrip(samples=1000, seed=0):
    gen = sampling.rng(seed)
    charts = [Chart(2, "base"), Chart(2, "doubled"), Chart(3, "base")]
    bad = None
    with stopwatch() as t:
        for i in range(samples):
            c = charts[i % len(charts)]
            e = sampling.expression(gen, c, max_terms=6)
            back = parse_expression(print_expression(e), c)
            if back != e:
                bad = e
                break
    return [VerificationReport("expr_io.roundtrip", bad is None, bad, t[0], f"{samples} samples")]


# -- selftest -------------------------------------------------------------------------

def selftest(quick: bool = False):
    """All suites with fixed seeds, in declaration order."""
    n = (lambda full, small: small if quick else full)
    suites = [
        lambda: kernel_laws(seed=1, samples=n(200, 40)),
        lambda: poisson_laws(seed=2, samples=n(500, 60), dim=2, mode="doubled"),
        lambda: poisson_laws(seed=3, samples=n(500, 60), dim=3 if not quick else 2, mode="base"),
        lambda: c_bracket_routes(dim=2, degree=2, samples=n(20, 5), seed=4),
        lambda: cbracket_rows(samples=n(10, 3), seed=5),
        lambda: strong(dim=3, degree=2, samples=n(20, 5), seed=6),
        lambda: project(dim=2, degree=2, samples=n(10, 3), seed=7),
        lambda: bialgebroid_controls(),
        lambda: courant(samples=n(10, 2), seed=8),
        lambda: ce_route(samples=n(5, 1), seed=9),
        lambda: genlie(dim=2, degree=2, samples=n(10, 3), seed=10),
        lambda: metric(dim=3, samples=n(10, 3), seed=11),
        lambda: proto_controls(),
        lambda: roundtrip(samples=n(1000, 100), seed=12),
    ]
    for suite in suites:
        yield from suite()
