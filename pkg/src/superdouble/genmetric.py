"""Generalized metric and the O(d,d) form, as exact rational matrices."""
from __future__ import annotations

import sympy as sp

from .report import VerificationReport, stopwatch


class SingularMetricError(ValueError):
    pass


def eta_form(d: int) -> sp.Matrix:
    """``[[0, 1], [1, 0]]`` in d x d blocks."""
    z, one = sp.zeros(d), sp.eye(d)
    return sp.Matrix(sp.BlockMatrix([[z, one], [one, z]]))


def build_generalized_metric(G, B) -> sp.Matrix:
    """``[[G - B G^-1 B, B G^-1], [-G^-1 B, G^-1]]`` over the rationals."""
    G = sp.Matrix(G).applyfunc(sp.nsimplify)
    B = sp.Matrix(B).applyfunc(sp.nsimplify)
    if G.shape != B.shape or G.shape[0] != G.shape[1]:
        raise ValueError("G and B must be square matrices of the same size")
    if G != G.T:
        raise ValueError("G must be symmetric")
    if B != -B.T:
        raise ValueError("B must be antisymmetric")
    if any(not v.is_Rational for v in list(G) + list(B)):
        raise ValueError("entries must be exact rationals")
    if G.det() == 0:
        raise SingularMetricError("G is singular")
    Gi = G.inv()
    return sp.Matrix(sp.BlockMatrix([[G - B * Gi * B, B * Gi], [-Gi * B, Gi]]))


def check_odd_compat(H: sp.Matrix, name: str = "metric.odd_compat") -> VerificationReport:
    """Passes iff ``H eta H = eta`` exactly."""
    with stopwatch() as t:
        d = H.shape[0] // 2
        eta = eta_form(d)
        res = H * eta * H - eta
    ok = res.is_zero_matrix
    return VerificationReport(name, bool(ok), None if ok else res.tolist(), t[0])
