"""Polynomial text grammar, canonical printer and JSON schema.

Source files are UTF-8 text: a header line ``vars: x y z`` followed by the
expression (which may span several lines)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" exponent)?
    exponent := INT ("^" exponent)?          # right-associative, literals only
    atom   := INT | IDENT | "(" expr ")"

Unary minus binds looser than ``^`` so ``-x^2`` is ``-(x^2)``. Juxtaposition
is not multiplication. ``/`` only accepts a nonzero constant divisor, which is
how rational coefficients such as ``3/2*x`` are written.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .polycore import Poly, VarTable, rational

__all__ = [
    "ParseError",
    "PolySource",
    "parse",
    "parse_source",
    "parse_header",
    "format_poly",
    "format_source",
    "to_json",
    "from_json",
]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{msg}")


@dataclass(frozen=True)
class PolySource:
    header: str
    body: str
    body_line: int = 2  # 1-based line on which the body starts

    @classmethod
    def from_text(cls, text: str) -> "PolySource":
        lines = text.split("\n")
        # skip leading blank lines before the header
        i = 0
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i == len(lines):
            raise ParseError("empty source; expected a 'vars:' header", 1, 1)
        return cls(lines[i], "\n".join(lines[i + 1:]), i + 2)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str, line0: int) -> List[Tuple[str, str, int, int]]:
    toks = []
    for ln, line in enumerate(text.split("\n"), start=line0):
        pos = 0
        while True:
            m = _TOKEN.match(line, pos)
            if not m or m.end() == pos:
                break
            col = m.start(m.lastindex) + 1
            if m.group(1):
                toks.append(("int", m.group(1), ln, col))
            elif m.group(2):
                toks.append(("ident", m.group(2), ln, col))
            else:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", ln, col)
                toks.append(("op", ch, ln, col))
            pos = m.end()
    return toks


class _Parser:
    def __init__(self, toks, vt: VarTable, end: Tuple[int, int]):
        self.toks, self.vt, self.i, self.end = toks, vt, 0, end

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def where(self):
        t = self.peek()
        return (t[2], t[3]) if t else self.end

    def take(self, value=None):
        t = self.peek()
        if t is None or (value is not None and t[1] != value):
            want = f"{value!r}" if value else "a token"
            got = f"{t[1]!r}" if t else "end of input"
            raise ParseError(f"expected {want}, found {got}", *self.where())
        self.i += 1
        return t

    def parse(self) -> Poly:
        if self.peek() is None:
            raise ParseError("empty expression", *self.end)
        p = self.expr()
        t = self.peek()
        if t is not None:
            if t[0] in ("int", "ident") or t[1] == "(":
                raise ParseError(f"missing operator before {t[1]!r} (implicit multiplication is not allowed)", t[2], t[3])
            raise ParseError(f"unexpected {t[1]!r}", t[2], t[3])
        return p

    def expr(self) -> Poly:
        p = self.term()
        while (t := self.peek()) is not None and t[1] in ("+", "-"):
            self.i += 1
            q = self.term()
            p = p + q if t[1] == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while (t := self.peek()) is not None and t[1] in ("*", "/"):
            self.i += 1
            line, col = self.where()
            q = self.unary()
            if t[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError("divisor must be a nonzero constant", line, col)
                p = p.scale(Fraction(1) / Fraction(q.constant_value()))
        return p

    def unary(self) -> Poly:
        t = self.peek()
        if t is not None and t[1] in ("-", "+"):
            self.i += 1
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if (t := self.peek()) is not None and t[1] == "^":
            self.i += 1
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        t = self.peek()
        if t is None or t[0] != "int":
            raise ParseError("exponent must be a nonnegative integer literal", *self.where())
        self.i += 1
        e = int(t[1])
        if (u := self.peek()) is not None and u[1] == "^":
            self.i += 1
            e = e ** self.exponent()
        return e

    def atom(self) -> Poly:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", *self.end)
        kind, text, line, col = t
        self.i += 1
        if kind == "int":
            return Poly.const(self.vt, int(text))
        if kind == "ident":
            if text not in self.vt:
                raise ParseError(f"undeclared identifier {text!r}", line, col)
            return Poly.var(self.vt, text)
        if text == "(":
            p = self.expr()
            self.take(")")
            return p
        raise ParseError(f"unexpected {text!r}", line, col)


def parse(text: str, vt: VarTable, line0: int = 1) -> Poly:
    """Parse an expression over an already-declared table."""
    if not isinstance(vt, VarTable):
        vt = VarTable(vt)
    lines = text.split("\n")
    end = (line0 + len(lines) - 1, len(lines[-1]) + 1)
    return _Parser(_tokenize(text, line0), vt, end).parse()


def parse_header(line: str, line_no: int = 1) -> VarTable:
    m = re.fullmatch(r"\s*vars\s*:(.*)", line)
    if not m:
        raise ParseError("first line must be a 'vars:' declaration", line_no, 1)
    names = m.group(1).split()
    try:
        return VarTable(names)
    except ValueError as e:
        raise ParseError(str(e), line_no, 1) from None


def parse_source(src) -> Poly:
    """Parse a full source (``PolySource`` or raw text with header)."""
    if isinstance(src, str):
        src = PolySource.from_text(src)
    vt = parse_header(src.header, src.body_line - 1)
    return parse(src.body, vt, src.body_line)


def _format_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text: graded-lex descending, reduced fractions."""
    items = p.items()
    if not items:
        return "0"
    names = p.vars.names
    parts = []
    for exps, c in items:
        mono = "*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in zip(names, exps) if e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def format_source(p: Poly) -> str:
    return f"vars: {' '.join(p.vars.names)}\n{format_poly(p)}\n"


def to_json(p: Poly) -> dict:
    terms = []
    for exps, c in p.items():
        f = Fraction(c)
        terms.append({"exps": list(exps), "num": str(f.numerator), "den": str(f.denominator)})
    return {"vars": list(p.vars.names), "terms": terms}


def from_json(obj) -> Poly:
    if isinstance(obj, str):
        obj = json.loads(obj)
    vt = VarTable(obj["vars"])
    terms = {}
    for t in obj["terms"]:
        den = int(t["den"])
        if den <= 0:
            raise ValueError("denominator must be positive")
        exps = tuple(int(e) for e in t["exps"])
        if exps in terms:
            raise ValueError(f"duplicate monomial {exps}")
        terms[exps] = rational(Fraction(int(t["num"]), den))
    return Poly(vt, terms)
