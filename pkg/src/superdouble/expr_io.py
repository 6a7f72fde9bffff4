"""Text grammar for Expressions and structure/section documents.

Expressions::

    expr   := ["+" | "-"] term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | atom ["^" INT]
    atom   := RATIONAL | GENERATOR | "(" expr ")"

``RATIONAL`` is ``n`` or ``n/m``; ``^`` is accepted on even generators only.
Generator names: ``x1 xt_1 p1 pt_1 xs_1 xi1 xis_1`` (plus ``th1 ths_1`` on the
dual chart).

Documents are ``key = value`` statements separated by newlines or ``;``
(``#`` starts a comment): ``dim = 3`` first, then array entries such as
``f[3][1][2] = 1`` with 1-based indices. Omitted entries are zero.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import FAMILIES, Chart, ChartMismatchError, Expression, Generator, Parity, normalize


class ParseError(ValueError):
    """Malformed input; carries 1-based ``line`` and ``column``."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownGeneratorError(ParseError):
    pass


class IndexRangeError(ParseError):
    pass


class ParityMisuseError(ParseError):
    pass


class StructureError(ValueError):
    """Document parsed but violates an invariant; names the offending entry."""


# -- printing -------------------------------------------------------------------

def _term_key(row, mask, n_odd):
    even_seq = tuple(k for k, e in enumerate(row) for _ in range(int(e)))
    odd_seq = tuple(b for b in range(n_odd) if (int(mask) >> b) & 1)
    return even_seq, odd_seq


def _factors(chart, row, mask):
    out = []
    for k, e in enumerate(row):
        if e:
            name = chart.even_generators[k].name
            out.append(name if e == 1 else f"{name}^{int(e)}")
    out.extend(g.name for b, g in enumerate(chart.odd_generators) if (int(mask) >> b) & 1)
    return out


def print_expression(e: Expression) -> str:
    """Canonical text: terms ordered by (even part, odd part); a coefficient is
    omitted only when it is exactly +1 on a non-constant term."""
    if e.is_zero:
        return "0"
    n_odd = e.chart.n_odd
    terms = sorted(zip(e.exps, e.masks, e.coeffs), key=lambda t: _term_key(t[0], t[1], n_odd))
    parts = []
    for i, (row, mask, c) in enumerate(terms):
        factors = _factors(e.chart, row, mask)
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# -- tokenizing -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()])
""", re.VERBOSE)

_PREFIXES = sorted(((pre, fam) for fam, (_, pre) in FAMILIES.items()), key=lambda t: -len(t[0]))


def generator_from_name(name: str) -> Generator | None:
    for pre, fam in _PREFIXES:
        if name.startswith(pre):
            idx = name[len(pre):]
            if idx.isdigit() and not idx.startswith("0"):
                return Generator(fam, int(idx))
    return None


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1, col0: int = 1):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), line, col0 + pos))
        pos = m.end()
    toks.append(_Tok("end", "", line, col0 + len(text)))
    return toks


class _Parser:
    def __init__(self, toks, chart: Chart):
        self.toks = toks
        self.i = 0
        self.chart = chart

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_end(self):
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)

    def expr(self) -> Expression:
        t = self.peek()
        sign = 1
        if t.kind == "op" and t.text in "+-":
            self.take()
            sign = -1 if t.text == "-" else 1
        result = self.term().scale(sign)
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if t.text == "+" else result - rhs
            else:
                return result

    def term(self) -> Expression:
        result = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> Expression:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.take()
            return -self.factor()
        base, gen = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            hat = self.take()
            if gen is None:
                raise ParseError("'^' is only allowed on generators", hat.line, hat.col)
            if gen.parity is Parity.ODD:
                raise ParityMisuseError(f"exponent on odd generator {gen.name}", hat.line, hat.col)
            n = self.take()
            if n.kind != "num" or "/" in n.text:
                raise ParseError("exponent must be a non-negative integer", n.line, n.col)
            return base ** int(n.text)
        return base

    def atom(self):
        t = self.take()
        if t.kind == "num":
            num, _, den = t.text.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", t.line, t.col)
            return Expression.constant(self.chart, mpq(int(num), int(den or 1))), None
        if t.kind == "name":
            g = generator_from_name(t.text)
            if g is None:
                raise UnknownGeneratorError(f"unknown generator {t.text!r}", t.line, t.col)
            try:
                return Expression.generator(self.chart, g), g
            except ChartMismatchError as exc:
                cls = IndexRangeError if (g.family in self.chart.even_families
                                          or g.family in self.chart.odd_families) else UnknownGeneratorError
                raise cls(str(exc), t.line, t.col) from None
        if t.kind == "op" and t.text == "(":
            inner = self.expr()
            close = self.take()
            if close.kind != "op" or close.text != ")":
                raise ParseError("expected ')'", close.line, close.col)
            return inner, None
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.line, t.col)


def parse_expression(text: str, chart: Chart, *, line: int = 1, column: int = 1) -> Expression:
    p = _Parser(_tokenize(text, line, column), chart)
    e = p.expr()
    p.expect_end()
    return normalize(e, chart)


def max_index(text: str) -> int:
    """Largest generator index mentioned in ``text`` (1 if none); used to infer ``--dim``."""
    best = 1
    for m in re.finditer(r"[A-Za-z_][A-Za-z0-9_]*", text):
        g = generator_from_name(m.group())
        if g is not None:
            best = max(best, g.index)
    return best


def uses_doubled(text: str) -> bool:
    for m in re.finditer(r"[A-Za-z_][A-Za-z0-9_]*", text):
        g = generator_from_name(m.group())
        if g is not None and g.family in ("xt", "p", "pt"):
            return True
    return False


# -- documents ------------------------------------------------------------------

ARRAY_RANKS = {"a": 2, "f": 3, "astar": 2, "Q": 3, "H": 3, "R": 3, "X": 1, "eta": 1}
_ALGEBROID_KEYS = {"a", "f", "astar", "Q"}
_FLUX_KEYS = {"H", "R"}
_SECTION_KEYS = {"X", "eta"}

_LHS = re.compile(r"^\s*(?P<name>[A-Za-z_]+)\s*(?P<idx>(\[\s*\d+\s*\])*)\s*$")


@dataclass(frozen=True)
class Document:
    dim: int
    arrays: dict  # name -> {index tuple: source text, line, column}


def _statements(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("#", 1)[0]
        col = 1
        for piece in code.split(";"):
            if piece.strip():
                yield lineno, col, piece
            col += len(piece) + 1


def parse_document(text: str) -> Document:
    dim = None
    arrays: dict = {}
    for lineno, col, stmt in _statements(text):
        lhs, eq, rhs = stmt.partition("=")
        if not eq:
            raise ParseError("expected 'key = value'", lineno, col)
        m = _LHS.match(lhs)
        if not m:
            raise ParseError(f"malformed left-hand side {lhs.strip()!r}", lineno, col)
        name = m.group("name")
        idx = tuple(int(s) for s in re.findall(r"\d+", m.group("idx")))
        rhs_col = col + len(lhs) + 1
        if name == "dim":
            if idx or dim is not None:
                raise ParseError("'dim' must be given once, without indices", lineno, col)
            if not rhs.strip().isdigit() or int(rhs) < 1:
                raise ParseError("dim must be a positive integer", lineno, rhs_col)
            dim = int(rhs)
            continue
        if dim is None:
            raise ParseError("'dim' must come first", lineno, col)
        if name not in ARRAY_RANKS:
            raise ParseError(f"unknown array {name!r}", lineno, col)
        if len(idx) != ARRAY_RANKS[name]:
            raise ParseError(f"{name} takes {ARRAY_RANKS[name]} indices", lineno, col)
        if any(i < 1 or i > dim for i in idx):
            raise IndexRangeError(f"index {list(idx)} of {name} outside 1..{dim}", lineno, col)
        entries = arrays.setdefault(name, {})
        if idx in entries:
            raise ParseError(f"duplicate entry {name}{list(idx)}", lineno, col)
        entries[idx] = (rhs, lineno, rhs_col)
    if dim is None:
        raise ParseError("missing 'dim'", 1, 1)
    return Document(dim, arrays)


def _entry_name(name, idx):
    return name + "".join(f"[{i}]" for i in idx)


def _parsed_array(doc: Document, name: str, chart: Chart, allowed_families: set) -> dict:
    out = {}
    for idx, (src, line, col) in doc.arrays.get(name, {}).items():
        e = parse_expression(src, chart, line=line, column=col)
        bad = e.families_used() - allowed_families
        if bad:
            raise StructureError(f"{_entry_name(name, idx)} uses generators outside "
                                 f"{sorted(allowed_families)}: {sorted(bad)}")
        out[idx] = e
    return out


def _skew_lower(name, entries, d, chart):
    """Fill a rank-3 array skew in its last two indices; reject inconsistencies."""
    zero = Expression.zero(chart)
    full = {}
    for (k, i, j), e in entries.items():
        if i == j and not e.is_zero:
            raise StructureError(f"{_entry_name(name, (k, i, j))} must vanish (skew-symmetry)")
    for k in range(1, d + 1):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                fwd, bwd = entries.get((k, i, j)), entries.get((k, j, i))
                if fwd is not None and bwd is not None and fwd != -bwd:
                    raise StructureError(
                        f"skew-symmetry violated: {_entry_name(name, (k, i, j))} != "
                        f"-{_entry_name(name, (k, j, i))}")
                full[(k, i, j)] = fwd if fwd is not None else (-bwd if bwd is not None else zero)
    return full


def _total_antisym(name, entries, d, chart):
    from itertools import permutations
    zero = Expression.zero(chart)
    full = {}
    for idx, e in entries.items():
        if len(set(idx)) < 3 and not e.is_zero:
            raise StructureError(f"{_entry_name(name, idx)} must vanish (total antisymmetry)")
    for idx, e in entries.items():
        if len(set(idx)) < 3:
            continue
        for perm in permutations(range(3)):
            tgt = tuple(idx[p] for p in perm)
            sign = _perm_sign(perm)
            val = e.scale(sign)
            prev = full.get(tgt)
            if prev is not None and prev != val:
                raise StructureError(f"total antisymmetry violated between "
                                     f"{_entry_name(name, idx)} and {_entry_name(name, tgt)}")
            full[tgt] = val
    for k in range(1, d + 1):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                full.setdefault((k, i, j), zero)
    return full


def _perm_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _matrix(entries, d, chart):
    zero = Expression.zero(chart)
    return tuple(tuple(entries.get((i, j), zero) for j in range(1, d + 1)) for i in range(1, d + 1))


def _cube(entries, d):
    return tuple(tuple(tuple(entries[(k, i, j)] for j in range(1, d + 1))
                       for i in range(1, d + 1)) for k in range(1, d + 1))


def parse_bialgebroid(text_or_doc):
    """Arrays ``a, f, astar, Q`` of a document as :class:`BialgebroidData`."""
    from .algebroid import BialgebroidData, DualAlgebroidData, LieAlgebroidData
    doc = text_or_doc if isinstance(text_or_doc, Document) else parse_document(text_or_doc)
    d = doc.dim
    chart = Chart(d, "base")
    arr = {k: _parsed_array(doc, k, chart, {"x"}) for k in _ALGEBROID_KEYS}
    primal = LieAlgebroidData(d, _matrix(arr["a"], d, chart), _cube(_skew_lower("f", arr["f"], d, chart), d))
    dual = DualAlgebroidData(d, _matrix(arr["astar"], d, chart),
                             _cube(_skew_lower("Q", arr["Q"], d, chart), d))
    return BialgebroidData(primal, dual)


def parse_flux(text_or_doc):
    """Arrays ``H, R`` of a document as :class:`FluxData`."""
    from .algebroid import FluxData
    doc = text_or_doc if isinstance(text_or_doc, Document) else parse_document(text_or_doc)
    d = doc.dim
    chart = Chart(d, "base")
    arr = {k: _parsed_array(doc, k, chart, {"x"}) for k in _FLUX_KEYS}
    return FluxData(_cube(_total_antisym("H", arr["H"], d, chart), d),
                    _cube(_total_antisym("R", arr["R"], d, chart), d))


def parse_section(text_or_doc):
    """Arrays ``X, eta`` over ``x, xt`` as a :class:`DoubleSection`."""
    from .dft import DoubleSection
    doc = text_or_doc if isinstance(text_or_doc, Document) else parse_document(text_or_doc)
    d = doc.dim
    chart = Chart(d, "doubled")
    zero = Expression.zero(chart)
    arr = {k: _parsed_array(doc, k, chart, {"x", "xt"}) for k in _SECTION_KEYS}
    X = tuple(arr["X"].get((i,), zero) for i in range(1, d + 1))
    eta = tuple(arr["eta"].get((i,), zero) for i in range(1, d + 1))
    return DoubleSection(X, eta)


def parse_structure(text: str):
    """Dispatch on the arrays present: BialgebroidData, FluxData or DoubleSection.

    A document with only ``dim`` is the zero bialgebroid. Mixing section
    arrays with structure arrays is rejected; use the typed parsers to read
    algebroid and flux arrays from one document.
    """
    doc = parse_document(text)
    keys = set(doc.arrays)
    kinds = [k for k, ks in (("algebroid", _ALGEBROID_KEYS), ("flux", _FLUX_KEYS),
                             ("section", _SECTION_KEYS)) if keys & ks]
    if len(kinds) > 1:
        raise StructureError(f"document mixes {' and '.join(kinds)} arrays")
    if kinds == ["section"]:
        return parse_section(doc)
    if kinds == ["flux"]:
        return parse_flux(doc)
    return parse_bialgebroid(doc)


def format_section(s, label: str = "") -> str:
    """Section document text (``X[i] = ...`` / ``eta[i] = ...``), parseable back."""
    lines = [f"# {label}"] if label else []
    lines.append(f"dim = {len(s.X)}")
    lines += [f"X[{i}] = {e}" for i, e in enumerate(s.X, start=1)]
    lines += [f"eta[{i}] = {e}" for i, e in enumerate(s.eta, start=1)]
    return "\n".join(lines)
