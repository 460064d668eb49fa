"""A tiny linear-loop language and its compilation to an LRS.

    x = 0; y = 6; z = 4;
    while true {
        x = 4x + 3y;
        y = 4y - 3x;
        z = 5z;
        if y + z > 0 { A } else { B }
    }

Updates are simultaneous: every right-hand side reads the values from the
start of the iteration. The state is a row vector, one step is x <- x A,
and the guard value in iteration n is u_n = x0 A^n g^T. The grammar is in
docs/loop_grammar.ebnf.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import LoopSyntaxError
from .lrs import Lrs, minimize_order

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>(?:\#|//)[^\n]*)
  | (?P<nl>\n)
  | (?P<float>\d+\.\d*|\.\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>>=|[-+*/=;{}()>])
  | (?P<ellipsis>\.\.\.|…)
    """,
    re.VERBOSE,
)
_KEYWORDS = {"while", "true", "if", "else"}
_DISPLAY = {"eof": "end of input", "ident": "a variable name", "num": "a number"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    out = []
    pos, line, start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        col = pos - start + 1
        if m is None:
            raise LoopSyntaxError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind == "float":
            raise LoopSyntaxError(f"decimal literal {text!r}; write rationals as p/q", line, col)
        elif kind not in ("ws", "comment"):
            if kind == "ident" and text in _KEYWORDS:
                kind = text
            elif kind == "op":
                kind = text
            out.append(_Tok(kind, text, line, col))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


@dataclass(frozen=True)
class LinearLoop:
    """variables, x0, A (row convention: A[i][j] = weight of variable i in new variable j), guard g."""

    variables: tuple[str, ...]
    init: tuple[Fraction, ...]
    update: tuple[tuple[Fraction, ...], ...]
    guard: tuple[Fraction, ...]
    strict: bool = True

    def __post_init__(self):
        d = len(self.variables)
        if len(set(self.variables)) != d:
            raise ValueError("duplicate variable names")
        if len(self.init) != d or len(self.guard) != d or len(self.update) != d:
            raise ValueError("dimension mismatch")
        if any(len(row) != d for row in self.update):
            raise ValueError("update matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.variables)

    def step(self, x: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        A = self.update
        return tuple(sum(x[i] * A[i][j] for i in range(self.dim)) for j in range(self.dim))

    def guard_values(self, count: int) -> Iterator[Fraction]:
        """u_1, ..., u_count by running the loop."""
        x = self.init
        for _ in range(count):
            x = self.step(x)
            yield sum(a * b for a, b in zip(x, self.guard))


# linear form: dict variable -> coefficient, with None for the constant term
_Form = dict


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0
        self.vars: list[str] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: _Tok | None = None):
        t = tok or self.tok
        raise LoopSyntaxError(msg, t.line, t.col)

    def expect(self, *kinds: str) -> _Tok:
        t = self.tok
        if t.kind not in kinds:
            got = repr(t.text) if t.text else "end of input"
            want = " or ".join(_DISPLAY.get(k, repr(k)) for k in kinds)
            self.fail(f"expected {want}, got {got}")
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    # expressions -----------------------------------------------------------

    def expr(self) -> _Form:
        f = self.term()
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.expect("+", "-").kind == "+" else -1
            g = self.term()
            for k, v in g.items():
                f[k] = f.get(k, 0) + sign * v
        return f

    def term(self) -> _Form:
        start = self.tok
        if self.tok.kind in ("+", "-"):
            sign = 1 if self.expect("+", "-").kind == "+" else -1
            f = self.term()
            return {k: sign * v for k, v in f.items()}
        f = self.factor()
        while True:
            t = self.tok
            if t.kind in ("*", "/"):
                self.i += 1
                g = self.factor()
            elif t.kind in ("ident", "(") and set(f) <= {None}:
                g = self.factor()  # implicit product such as 4x or 3/2 y
                t = _Tok("*", "*", t.line, t.col)
            else:
                return f
            if t.kind == "/":
                if set(g) - {None}:
                    self.fail("nonlinear update: division by a variable", start)
                c = g.get(None, 0)
                if c == 0:
                    self.fail("division by zero", t)
                f = {k: v / c for k, v in f.items()}
            else:
                if set(f) - {None} and set(g) - {None}:
                    self.fail("nonlinear update: product of variables", start)
                if set(f) - {None}:
                    f, g = g, f
                c = f.get(None, 0)
                f = {k: c * v for k, v in g.items()}

    def factor(self) -> _Form:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return {None: Fraction(int(t.text))}
        if t.kind == "ident":
            self.i += 1
            if t.text not in self.vars:
                self.fail(f"unknown variable {t.text!r}", t)
            return {t.text: Fraction(1)}
        if t.kind == "(":
            self.i += 1
            f = self.expr()
            self.expect(")")
            return f
        got = repr(t.text) if t.text else "end of input"
        self.fail(f"expected a number, variable or '(', got {got}")

    def _vector(self, f: _Form, what: str, tok: _Tok) -> tuple[Fraction, ...]:
        if f.get(None, 0) != 0:
            self.fail(f"{what} has a constant term; only linear (not affine) forms are allowed", tok)
        return tuple(Fraction(f.get(v, 0)) for v in self.vars)

    def end_statement(self):
        if self.tok.kind == "}":
            return
        self.expect(";")

    # program ---------------------------------------------------------------

    def skip_block(self):
        """Branch bodies are labels only; skip a balanced {...}."""
        self.expect("{")
        depth = 1
        while depth:
            t = self.tok
            if t.kind == "eof":
                self.fail("unterminated block: expected '}'")
            self.i += 1
            depth += {"{": 1, "}": -1}.get(t.kind, 0)

    def program(self) -> LinearLoop:
        init: dict[str, Fraction] = {}
        while self.tok.kind == "ident":
            name = self.expect("ident")
            if name.text in init:
                self.fail(f"variable {name.text!r} initialised twice", name)
            self.expect("=")
            at = self.tok
            f = self.expr()
            if set(f) - {None}:
                self.fail("initial values must be constants", at)
            init[name.text] = Fraction(f.get(None, 0))
            self.vars.append(name.text)
            if self.tok.kind != "while":
                self.end_statement()
        if not self.vars:
            self.fail("expected at least one variable initialisation")
        self.expect("while")
        self.expect("true")
        self.expect("{")
        updates: dict[str, tuple[Fraction, ...]] = {}
        while self.tok.kind == "ident":
            name = self.expect("ident")
            if name.text not in self.vars:
                self.fail(f"unknown variable {name.text!r}", name)
            if name.text in updates:
                self.fail(f"variable {name.text!r} updated twice in one iteration", name)
            self.expect("=")
            at = self.tok
            updates[name.text] = self._vector(self.expr(), "update", at)
            self.end_statement()
        self.expect("if")
        at = self.tok
        g = self.expr()
        op = self.expect(">", ">=")
        rhs = self.expr()
        for k, v in rhs.items():
            g[k] = g.get(k, 0) - v
        guard = self._vector(g, "guard", at)
        if self.tok.kind == "{":
            self.skip_block()
            if self.accept("else"):
                self.skip_block()
        elif not self.accept("ellipsis"):
            self.accept(";")
        self.accept(";")
        self.expect("}")
        self.expect("eof")
        d = len(self.vars)
        # column j of A is the update of variable j
        cols = [updates.get(v, tuple(Fraction(int(i == j)) for i in range(d))) for j, v in enumerate(self.vars)]
        A = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
        return LinearLoop(tuple(self.vars), tuple(init[v] for v in self.vars), A, guard, op.kind == ">")


def parse_loop(source: str) -> LinearLoop:
    return _Parser(source).program()


def _frac_src(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _form_src(coeffs, names) -> str:
    parts = []
    for c, v in zip(coeffs, names):
        if c == 0:
            continue
        mag = abs(c)
        body = v if mag == 1 else f"{_frac_src(mag)}*{v}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def to_source(loop: LinearLoop) -> str:
    """Canonical source text; parse_loop(to_source(L)) == L."""
    names = loop.variables
    lines = [f"{v} = {_frac_src(c)};" for v, c in zip(names, loop.init)]
    lines.append("while true {")
    d = loop.dim
    for j, v in enumerate(names):
        col = [loop.update[i][j] for i in range(d)]
        if col != [Fraction(int(i == j)) for i in range(d)]:
            lines.append(f"    {v} = {_form_src(col, names)};")
    op = ">" if loop.strict else ">="
    lines.append(f"    if {_form_src(loop.guard, names)} {op} 0 {{ A }} else {{ B }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def characteristic_polynomial(A) -> list[Fraction]:
    """[1, c_1, ..., c_d] with det(xI - A) = x^d + c_1 x^{d-1} + ... + c_d (Faddeev-LeVerrier)."""
    d = len(A)
    M = [[Fraction(0)] * d for _ in range(d)]
    c = [Fraction(1)]
    for k in range(1, d + 1):
        # M <- A M + c_{k-1} I, then c_k = -tr(A M) / k
        M = [[sum(A[i][t] * M[t][j] for t in range(d)) + (c[-1] if i == j else 0) for j in range(d)]
             for i in range(d)]
        tr = sum(sum(A[i][t] * M[t][i] for t in range(d)) for i in range(d))
        c.append(-tr / k)
    return c


@dataclass(frozen=True)
class CompiledLoop:
    """u_{n + offset} = seq[n] for n >= 1; offset > 0 only for singular A."""

    seq: Lrs
    offset: int


def compile_loop(loop: LinearLoop, minimize: bool = True) -> CompiledLoop:
    c = characteristic_polynomial(loop.update)
    d = loop.dim
    # x^m q(x) with q(0) != 0: the tail from u_max(m, 1) satisfies q by Cayley-Hamilton
    m = 0
    while m < d and c[d - m] == 0:
        m += 1
    if m == d:
        # nilpotent: u_n = 0 for n >= d
        return CompiledLoop(Lrs.zero(), max(d - 1, 0))
    q = c[: d - m + 1]
    k = len(q) - 1
    offset = max(m - 1, 0)
    vals = list(loop.guard_values(offset + k))[offset:]
    seq = Lrs([-x for x in q[1:]], vals)
    return CompiledLoop(minimize_order(seq) if minimize else seq, offset)


def loop_to_lrs(loop: LinearLoop) -> Lrs:
    """The guard sequence as an LRS (after dropping the prefix a singular update leaves)."""
    return compile_loop(loop).seq
