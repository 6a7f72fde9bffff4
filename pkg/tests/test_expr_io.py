from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdouble import (Chart, IndexRangeError, ParityMisuseError, ParseError, StructureError,
                         UnknownGeneratorError, mu_dft, parse_expression, parse_structure, print_expression,
                         sampling)
from superdouble.algebroid import BialgebroidData, FluxData, so3_lie_poisson
from superdouble.dft import DoubleSection
from superdouble.expr_io import format_section, parse_section

GOLDEN = Path(__file__).parent / "data" / "golden_print.txt"
C = Chart(2, "base")

SO3 = """
# so(3) Lie-Poisson
dim = 3
a[1][1] = 1; a[2][2] = 1; a[3][3] = 1
astar[1][2] = x3;  astar[2][1] = -x3
astar[1][3] = -x2; astar[3][1] = x2
astar[2][3] = x1;  astar[3][2] = -x1
Q[3][1][2] = 1
Q[2][1][3] = -1
Q[1][2][3] = 1
"""


def test_parse_examples():
    e = parse_expression("x1*xs_1 - 1/2*xi1*xi2*xis_1", C)
    assert len(e) == 2
    assert parse_expression("xi1*xi1", C).is_zero
    assert print_expression(parse_expression("xi2*xi1", C)) == "-1*xi1*xi2"


def test_print_examples():
    assert print_expression(C.zero()) == "0"
    assert print_expression(mu_dft(1)) == "p1*xi1 + pt_1*xis_1"
    assert print_expression(C.const(-1)) == "-1"
    assert print_expression(C.const(1)) == "1"
    assert print_expression(parse_expression("x1^3 - 2/3*x2 + 1", C)) == "1 + x1^3 - 2/3*x2"


def test_whitespace_and_parentheses():
    a = parse_expression(" ( x1 + xi1 ) * ( x1 - xi1 ) ", C)
    assert a == parse_expression("x1^2", C)
    assert parse_expression("(x1 + xi1)*(xi2 - xi1)", C) == parse_expression("x1*xi2 - x1*xi1 + xi1*xi2", C)
    assert parse_expression("-(x1)", C) == parse_expression("-1*x1", C)


@pytest.mark.parametrize("text, exc, column", [
    ("x5", IndexRangeError, 1),
    ("q1", UnknownGeneratorError, 1),
    ("xt_1", UnknownGeneratorError, 1),
    ("x1*xi1^2", ParityMisuseError, 7),
    ("x1 +", ParseError, 5),
    ("2*(x1", ParseError, 6),
    ("1/0", ParseError, 1),
    ("x1 ** 2", ParseError, 5),
])
def test_parse_errors_carry_position(text, exc, column):
    with pytest.raises(exc) as info:
        parse_expression(text, C)
    assert info.value.line == 1
    assert info.value.column == column


def test_golden_print_is_stable():
    gen = sampling.rng(2024)
    lines = [ln for ln in GOLDEN.read_text().splitlines() if not ln.startswith("#")]
    for i, line in enumerate(lines):
        head, expected = line.split(" | ")
        mode, d = head.split()
        assert (mode, int(d)) == (("base", "doubled", "dual")[i % 3], 1 + i % 3)
        e = sampling.expression(gen, Chart(int(d), mode), max_terms=4)
        assert print_expression(e) == expected
        assert parse_expression(expected, e.chart) == e


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["base", "doubled", "dual"]), st.integers(1, 3))
def test_round_trip(seed, mode, d):
    c = Chart(d, mode)
    e = sampling.expression(sampling.rng(seed), c, max_terms=6)
    assert parse_expression(print_expression(e), c) == e


def test_so3_document():
    B = parse_structure(SO3)
    assert isinstance(B, BialgebroidData)
    ref = so3_lie_poisson()
    assert B.dual.anchor == ref.dual.anchor
    assert B.dual.structure == ref.dual.structure
    assert B.primal == ref.primal


def test_skew_partners_filled_and_checked():
    B = parse_structure("dim = 2\nf[1][1][2] = x1")
    assert str(B.primal.structure[0][1][0]) == "-1*x1"
    with pytest.raises(StructureError):
        parse_structure("dim = 2\nf[1][1][2] = 1\nf[1][2][1] = 1")
    with pytest.raises(StructureError):
        parse_structure("dim = 2\nQ[1][1][1] = 1")


def test_empty_arrays_give_zero_structure():
    B = parse_structure("dim = 2")
    assert all(e.is_zero for row in B.primal.anchor for e in row)
    assert all(e.is_zero for row in B.dual.anchor for e in row)


def test_flux_document():
    F = parse_structure("dim = 3\nH[1][2][3] = x1")
    assert isinstance(F, FluxData)
    assert str(F.H[2][1][0]) == "-1*x1"
    assert str(F.H[1][2][0]) == "x1"
    with pytest.raises(StructureError):
        parse_structure("dim = 3\nH[1][2][1] = x1")


def test_document_errors():
    with pytest.raises(ParseError):
        parse_structure("X[1] = x1")
    with pytest.raises(IndexRangeError):
        parse_structure("dim = 2\nX[3] = x1")
    with pytest.raises(UnknownGeneratorError) as info:
        parse_structure("dim = 2\neta[1] = xs_1")
    assert (info.value.line, info.value.column) == (2, 10)
    with pytest.raises(StructureError):
        parse_structure("dim = 2\nX[1] = x1\nf[1][1][2] = 1")


def test_section_document_round_trip():
    gen = sampling.rng(5)
    s = sampling.double_section(gen, 2, 2)
    back = parse_section(format_section(s, "sample"))
    assert isinstance(back, DoubleSection)
    assert back.X == s.X and back.eta == s.eta
