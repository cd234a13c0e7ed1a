"""Text format for structure equations, connections and curvature fixtures.

Statements (``#`` starts a comment)::

    algebra h3;
    param t, eps, rho;
    sign delta;
    radical s = r^4 - u1^2 - u2^2;
    let B = 4*(eps^2 + rho^2 - rho + 3/4);
    d e6 = -2*t*(e1^e2 - e3^e4);
    connection A { s[1][2] = lam*(e5 + e6); s[3][4] = -lam*(e5 + e6); }
    curvature family { o[1][2] = ...; o[1][2] + o[3][4] + o[5][6] = ...; }

``e<digits>`` is a basis monomial (``e12`` is ``e1^e2``).  ``^`` is a power
when its left side is a scalar and its right side an integer literal, and a
wedge product otherwise.  Connection entries given only above the diagonal
are mirrored with a minus sign.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .catalog import Builtin
from .connection import Connection
from .exterior import DIM, JacobiViolation, KForm, LieAlgebra, e
from .scalars import ONE, Scalar, as_scalar, free, radical, sign

__all__ = [
    "parse_form",
    "DSLError",
    "DSLSyntaxError",
    "UndeclaredParam",
    "DimensionError",
    "JacobiViolation",
    "DSLJacobiViolation",
    "Document",
    "CurvatureEntry",
    "parse",
    "serialize",
    "document_from_builtin",
]


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, expected: Sequence[str] = ()):
        loc = f"line {line}, col {col}: " if line else ""
        exp = f" (expected one of: {', '.join(sorted(set(expected)))})" if expected else ""
        ValueError.__init__(self, f"{loc}{message}{exp}")
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        self.errors: List["DSLError"] = [self]


class DSLSyntaxError(DSLError):
    pass


class UndeclaredParam(DSLError):
    pass


class DimensionError(DSLError):
    pass


class DSLJacobiViolation(DSLError, JacobiViolation):
    def __init__(self, k: int, residual: KForm):
        DSLError.__init__(self, f"d(d e{k}) = {residual} is not zero")
        self.k = k
        self.residual = residual


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<basis>e[0-9]+\b)
  | (?P<num>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()\[\]{};=,])
    """,
    re.VERBOSE,
)

KEYWORDS = {"algebra", "param", "sign", "radical", "let", "d", "connection", "curvature"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[Tok]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Tok(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Tok("eof", "", line, pos - start + 1))
    return out


@dataclass
class CurvatureEntry:
    """``sum(coef * Omega^i_j) = form``."""

    lhs: List[Tuple[int, int, int]]  # (sign, i, j)
    rhs: KForm
    line: int = 0

    def label(self) -> str:
        parts = []
        for k, (sg, i, j) in enumerate(self.lhs):
            op = ("-" if sg < 0 else "") if k == 0 else (" - " if sg < 0 else " + ")
            parts.append(f"{op}Omega^{i}_{j}")
        return "".join(parts)


@dataclass
class Document:
    name: str = ""
    decls: List[Tuple[str, str, Optional[Scalar]]] = field(default_factory=list)  # (kind, name, radicand)
    lets: Dict[str, Scalar] = field(default_factory=dict)
    diffs: Dict[int, KForm] = field(default_factory=dict)
    connections: Dict[str, Connection] = field(default_factory=dict)
    curvatures: Dict[str, List[CurvatureEntry]] = field(default_factory=dict)
    _algebra: Optional[LieAlgebra] = field(default=None, repr=False)

    @property
    def algebra(self) -> LieAlgebra:
        if self._algebra is None:
            params = [n for k, n, _ in self.decls]
            self._algebra = LieAlgebra(self.diffs, self.name, params)
        return self._algebra


Value = Union[Scalar, KForm]


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.env: Dict[str, Scalar] = {}
        self.doc = Document()
        self.errors: List[DSLError] = []

    # token helpers -----------------------------------------------------
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def advance(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail(f"unexpected {self.describe(self.tok)}", [repr(text)])
        return self.advance()

    def expect_name(self) -> Tok:
        if self.tok.kind != "name":
            self.fail(f"unexpected {self.describe(self.tok)}", ["identifier"])
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "num":
            self.fail(f"unexpected {self.describe(self.tok)}", ["integer"])
        return int(self.advance().text)

    @staticmethod
    def describe(t: Tok) -> str:
        return "end of input" if t.kind == "eof" else f"{t.text!r}"

    def fail(self, msg, expected=(), cls=DSLSyntaxError, tok: Optional[Tok] = None):
        t = tok or self.tok
        raise cls(msg, t.line, t.col, expected)

    def recover(self):
        depth = 0
        while self.tok.kind != "eof":
            t = self.advance()
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                if depth == 0:
                    return
                depth -= 1
            elif t.text == ";" and depth == 0:
                return

    # statements --------------------------------------------------------
    def parse(self) -> Document:
        while self.tok.kind != "eof":
            try:
                self.statement()
            except DSLError as err:
                self.errors.append(err)
                self.recover()
        if self.errors:
            first = self.errors[0]
            first.errors = list(self.errors)
            raise first
        try:
            _ = self.doc.algebra
        except JacobiViolation as jv:
            raise DSLJacobiViolation(jv.k, jv.residual) from jv
        return self.doc

    def statement(self):
        t = self.tok
        if t.kind != "name" or t.text not in KEYWORDS:
            self.fail(f"unexpected {self.describe(t)}", sorted(KEYWORDS))
        kw = self.advance().text
        getattr(self, f"stmt_{kw}")()

    def stmt_algebra(self):
        self.doc.name = self.expect_name().text
        self.expect(";")

    def _declare_names(self, kind: str):
        while True:
            n = self.expect_name()
            self._declare(n, kind)
            if self.at(","):
                self.advance()
                continue
            break
        self.expect(";")

    def _declare(self, n: Tok, kind: str, radicand: Optional[Scalar] = None):
        if n.text in KEYWORDS or re.fullmatch(r"e[0-9]+", n.text):
            self.fail(f"{n.text!r} is reserved", ["identifier"], tok=n)
        if n.text in self.env:
            self.fail(f"{n.text!r} declared twice", tok=n)
        if kind == "free":
            v = free(n.text)
        elif kind == "sign":
            v = sign(n.text)
        else:
            v = radical(n.text, radicand)
        self.env[n.text] = v
        self.doc.decls.append((kind, n.text, radicand))

    def stmt_param(self):
        self._declare_names("free")

    def stmt_sign(self):
        self._declare_names("sign")

    def stmt_radical(self):
        n = self.expect_name()
        self.expect("=")
        start = self.tok
        val = self.expr()
        if isinstance(val, KForm) or val.den:
            self.fail("radicand must be a polynomial in declared parameters", tok=start)
        if any(p.kind != "free" for p in val.symbols()):
            self.fail("radicand may only use plain parameters", tok=start)
        self._declare(n, "radical", val)
        self.expect(";")

    def stmt_let(self):
        n = self.expect_name()
        if n.text in self.env:
            self.fail(f"{n.text!r} declared twice", tok=n)
        self.expect("=")
        start = self.tok
        val = self.expr()
        if isinstance(val, KForm):
            self.fail("let binds scalars only", tok=start)
        self.env[n.text] = val
        self.doc.lets[n.text] = val
        self.expect(";")

    def stmt_d(self):
        b = self.tok
        if b.kind != "basis":
            self.fail(f"unexpected {self.describe(b)}", ["e<k>"])
        self.advance()
        k = int(b.text[1:])
        if len(b.text) != 2 or not 1 <= k <= DIM:
            self.fail(f"{b.text} is not a basis 1-form e1..e{DIM}", cls=DimensionError, tok=b)
        self.expect("=")
        form = self.form_expr(2)
        if k in self.doc.diffs:
            self.fail(f"d {b.text} given twice", tok=b)
        self.doc.diffs[k] = form
        self.expect(";")

    def _matrix_index(self, letter: str) -> Tuple[int, int, Tok]:
        t = self.tok
        if not self.at(letter):
            self.fail(f"unexpected {self.describe(t)}", [letter])
        self.advance()
        idx = []
        for _ in range(2):
            self.expect("[")
            it = self.tok
            v = self.expect_int()
            if not 1 <= v <= DIM:
                self.fail(f"index {v} outside 1..{DIM}", cls=DimensionError, tok=it)
            idx.append(v)
            self.expect("]")
        return idx[0], idx[1], t

    def stmt_connection(self):
        name = self.expect_name().text
        self.expect("{")
        entries: Dict[Tuple[int, int], KForm] = {}
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unterminated connection block", ["'}'"])
            try:
                i, j, t = self._matrix_index("s")
                self.expect("=")
                entries[(i, j)] = self.form_expr(1)
                self.expect(";")
            except DSLError as err:
                self.errors.append(err)
                self.recover()
        self.expect("}")
        for (i, j), f in list(entries.items()):
            if (j, i) not in entries:
                entries[(j, i)] = -f
        sig = [[KForm(1) for _ in range(DIM)] for _ in range(DIM)]
        for (i, j), f in entries.items():
            sig[i - 1][j - 1] = f
        conn = Connection(sig, name, metric=False)
        conn.metric = conn.is_skew()
        self.doc.connections[name] = conn

    def stmt_curvature(self):
        name = self.expect_name().text
        self.expect("{")
        rows: List[CurvatureEntry] = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unterminated curvature block", ["'}'"])
            try:
                line = self.tok.line
                lhs = []
                sg = 1
                if self.at("-"):
                    self.advance()
                    sg = -1
                while True:
                    i, j, _ = self._matrix_index("o")
                    lhs.append((sg, i, j))
                    if self.at("+") or self.at("-"):
                        sg = 1 if self.advance().text == "+" else -1
                        continue
                    break
                self.expect("=")
                rows.append(CurvatureEntry(lhs, self.form_expr(2), line))
                self.expect(";")
            except DSLError as err:
                self.errors.append(err)
                self.recover()
        self.expect("}")
        self.doc.curvatures[name] = rows

    # expressions -------------------------------------------------------
    def form_expr(self, degree: int) -> KForm:
        start = self.tok
        v = self.expr()
        if isinstance(v, Scalar):
            if v.is_zero():
                return KForm(degree)
            self.fail(f"expected a {degree}-form, got a scalar", tok=start)
        if v.degree != degree and not v.is_zero():
            self.fail(f"expected a {degree}-form, got a {v.degree}-form", tok=start)
        return v if v.degree == degree else KForm(degree)

    def expr(self) -> Value:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            right = self.term()
            left = self._add(left, right, op.text == "-", op)
        return left

    def _add(self, a: Value, b: Value, neg: bool, op: Tok) -> Value:
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a - b if neg else a + b
        if isinstance(a, Scalar) and a.is_zero():
            a = KForm(b.degree)
        if isinstance(b, Scalar) and b.is_zero():
            b = KForm(a.degree)
        if isinstance(a, KForm) and isinstance(b, KForm):
            if a.degree != b.degree and not a.is_zero() and not b.is_zero():
                self.fail(f"cannot add a {a.degree}-form and a {b.degree}-form", tok=op)
            if a.is_zero():
                return -b if neg else b
            return a - b if neg else a + b
        self.fail("cannot add a scalar and a form", tok=op)

    def term(self) -> Value:
        left = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance()
            right = self.unary()
            if op.text == "*":
                if isinstance(left, KForm) and isinstance(right, KForm):
                    self.fail("use ^ to wedge two forms", tok=op)
                if isinstance(left, KForm):
                    left = left.scale(right)
                elif isinstance(right, KForm):
                    left = right.scale(left)
                else:
                    left = left * right
            else:
                if isinstance(right, KForm):
                    self.fail("cannot divide by a form", tok=op)
                if right.is_zero():
                    self.fail("division by zero", tok=op)
                left = left.scale(ONE / right) if isinstance(left, KForm) else left / right
        return left

    def unary(self) -> Value:
        if self.at("-"):
            self.advance()
            v = self.unary()
            return -v
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Value:
        base = self.atom()
        if self.at("^"):
            op = self.advance()
            if isinstance(base, Scalar) and self.tok.kind == "num":
                n = int(self.advance().text)
                return base ** n
            right = self.unary_no_power_prefix()
            return self._wedge(base, right, op)
        return base

    def unary_no_power_prefix(self) -> Value:
        # the right operand of a wedge binds like a power (right associative)
        if self.at("-"):
            self.advance()
            return -self.unary_no_power_prefix()
        return self.power()

    def _wedge(self, a: Value, b: Value, op: Tok) -> Value:
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            self.fail("exponent must be an integer literal", ["integer"], tok=op)
        if isinstance(a, Scalar):
            return b.scale(a)
        if isinstance(b, Scalar):
            return a.scale(b)
        if a.degree + b.degree > DIM:
            self.fail(f"wedge degree {a.degree + b.degree} exceeds {DIM}", cls=DimensionError, tok=op)
        return a ^ b

    def atom(self) -> Value:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return as_scalar(int(t.text))
        if t.kind == "basis":
            self.advance()
            digits = [int(ch) for ch in t.text[1:]]
            if any(not 1 <= k <= DIM for k in digits) or len(digits) > DIM:
                self.fail(f"{t.text}: basis indices must be 1..{DIM}", cls=DimensionError, tok=t)
            return e(*digits)
        if t.kind == "name":
            if t.text in KEYWORDS and t.text not in self.env:
                self.fail(f"unexpected keyword {t.text!r}", ["expression"])
            self.advance()
            v = self.env.get(t.text)
            if v is None:
                self.fail(f"undeclared parameter {t.text!r}", cls=UndeclaredParam, tok=t)
            return v
        if self.at("("):
            self.advance()
            v = self.expr()
            self.expect(")")
            return v
        self.fail(f"unexpected {self.describe(t)}", ["number", "name", "e<k>", "'('", "'-'"])


def parse(text: str) -> Document:
    """Parse a document; raises the first error with ``.errors`` listing all."""
    return _Parser(text).parse()


def parse_form(text: str, env: Optional[Dict[str, Scalar]] = None) -> KForm:
    """Parse a single form expression such as ``2*e12345`` or ``e5 ^ e6``.

    ``env`` maps the parameter names that may appear to their Scalars.
    """
    p = _Parser(text)
    p.env.update(env or {})
    val = p.expr()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.describe(p.tok)}", ["end of input"])
    if not isinstance(val, KForm):
        raise DSLSyntaxError("expected a differential form", 1, 1, ["e<k>"])
    return val


# ---------------------------------------------------------------------------
# serialization


def _scalar_text(c: Scalar) -> str:
    return c.to_text()


def _form_text(f: KForm) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for idx, c in f.items():
        name = "e" + "".join(str(i) for i in idx)
        if c.is_const() and c.to_fraction() == 1:
            parts.append(name)
        else:
            parts.append(f"({_scalar_text(c)})*{name}")
    return " + ".join(parts)


def serialize(doc: Document) -> str:
    lines = []
    if doc.name:
        lines.append(f"algebra {doc.name};")
    for kind, name, rad in doc.decls:
        if kind == "free":
            lines.append(f"param {name};")
        elif kind == "sign":
            lines.append(f"sign {name};")
        else:
            lines.append(f"radical {name} = {_scalar_text(rad)};")
    for name, v in doc.lets.items():
        lines.append(f"let {name} = {_scalar_text(v)};")
    for k in sorted(doc.diffs):
        if not doc.diffs[k].is_zero():
            lines.append(f"d e{k} = {_form_text(doc.diffs[k])};")
    for name, conn in doc.connections.items():
        lines.append(f"connection {name} {{")
        for i in range(1, DIM + 1):
            for j in range(1, DIM + 1):
                f = conn.s(i, j)
                if f.is_zero():
                    continue
                if conn.metric and i > j:
                    continue
                lines.append(f"  s[{i}][{j}] = {_form_text(f)};")
        lines.append("}")
    for name, rows in doc.curvatures.items():
        lines.append(f"curvature {name} {{")
        for row in rows:
            lhs = ""
            for k, (sg, i, j) in enumerate(row.lhs):
                op = ("-" if sg < 0 else "") if k == 0 else (" - " if sg < 0 else " + ")
                lhs += f"{op}o[{i}][{j}]"
            lines.append(f"  {lhs} = {_form_text(row.rhs)};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def document_from_builtin(b: Builtin) -> Document:
    """A document holding the structure equations of a built-in algebra."""
    doc = Document(name=b.name)
    seen = set()
    for f in b.algebra.diffs.values():
        for p in f.symbols():
            if p.kind == "radical":
                for q in p.radicand.symbols():
                    seen.add((q.index, "free", q.name, None))
            seen.add((p.index, p.kind, p.name, p.radicand))
    for _, kind, name, rad in sorted(seen, key=lambda x: (x[1] == "radical", x[0])):
        doc.decls.append((kind, name, Scalar(rad) if rad is not None else None))
    doc.diffs = {k: f for k, f in b.algebra.diffs.items() if not f.is_zero()}
    doc._algebra = b.algebra
    return doc
