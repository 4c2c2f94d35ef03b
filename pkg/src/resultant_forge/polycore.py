"""Exact arithmetic kernel: rationals and sparse multivariate polynomials.

Coefficients are ``fractions.Fraction`` values, normalised to ``int`` whenever
the denominator is 1 (ints are the fast path for the big determinant runs).
Monomials are packed into a single Python int, ``BITS`` bits per variable,
with the first variable of the table in the most significant field, so
integer order on keys is lex order and monomial multiplication is integer
addition.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

ExactRational = Union[int, Fraction]

BITS = 16
MASK = (1 << BITS) - 1
MAX_DEGREE = (1 << (BITS - 1)) - 1

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class VarTableMismatch(ValueError):
    """Operands live over different variable tables."""


class UnknownVariable(ValueError):
    pass


class MissingAssignment(ValueError):
    pass


def rational(x) -> ExactRational:
    """Coerce ``x`` (int, Fraction or a "p/q" string) to canonical form."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        s = x.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ValueError(f"not an exact rational: {x!r}")
        return rational(Fraction(s))
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def _norm(c):
    if type(c) is Fraction and c._denominator == 1:
        return c._numerator
    return c


def _div(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return _norm(Fraction(a) / b)


class VarTable:
    """Ordered, immutable list of distinct variable names."""

    __slots__ = ("names", "_index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for nm in names:
            if not isinstance(nm, str) or not _IDENT.match(nm):
                raise ValueError(f"invalid variable name {nm!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}
        self._hash = hash(names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r} (declared: {' '.join(self.names)})") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarTable({' '.join(self.names)})"

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise ValueError(f"exponent vector {tuple(exps)} does not match {self!r}")
        k = 0
        for e in exps:
            if not isinstance(e, int) or e < 0 or e > MAX_DEGREE:
                raise ValueError(f"bad exponent {e!r}")
            k = (k << BITS) | e
        return k

    def unpack(self, key: int) -> Tuple[int, ...]:
        n = len(self.names)
        out = [0] * n
        for i in range(n - 1, -1, -1):
            out[i] = key & MASK
            key >>= BITS
        return tuple(out)

    def unit(self, name: str) -> int:
        """Packed key of the monomial ``name``^1."""
        return 1 << (BITS * (len(self.names) - 1 - self.index(name)))


def _divides(small: int, big: int, vt: VarTable) -> bool:
    a, b = vt.unpack(small), vt.unpack(big)
    return all(x <= y for x, y in zip(a, b))


class Poly:
    """Sparse multivariate polynomial over Q with a fixed variable table.

    Instances are immutable. ``terms`` maps packed monomial keys to nonzero
    coefficients; use :meth:`items` for exponent tuples.
    """

    __slots__ = ("vars", "_terms", "_tdeg")

    def __init__(self, vars: VarTable, terms: Mapping[Tuple[int, ...], object] = None):
        if not isinstance(vars, VarTable):
            vars = VarTable(vars)
        self.vars = vars
        out: Dict[int, ExactRational] = {}
        for exps, c in (terms or {}).items():
            c = rational(c)
            if c:
                k = vars.pack(exps)
                out[k] = _norm(out.get(k, 0) + c)
                if not out[k]:
                    del out[k]
        self._terms = out
        self._tdeg = None

    @classmethod
    def _raw(cls, vars: VarTable, terms: Dict[int, ExactRational]) -> "Poly":
        # caller guarantees canonical terms (nonzero, normalised)
        p = object.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._tdeg = None
        return p

    # constructors
    @classmethod
    def zero(cls, vars: VarTable) -> "Poly":
        return cls._raw(vars, {})

    @classmethod
    def const(cls, vars: VarTable, c) -> "Poly":
        c = rational(c)
        return cls._raw(vars, {0: c} if c else {})

    @classmethod
    def var(cls, vars: VarTable, name: str) -> "Poly":
        return cls._raw(vars, {vars.unit(name): 1})

    # inspection
    @property
    def terms(self) -> Dict[int, ExactRational]:
        return self._terms

    def items(self) -> List[Tuple[Tuple[int, ...], ExactRational]]:
        """(exponents, coefficient) pairs in descending graded-lex order."""
        vt = self.vars
        rows = [(vt.unpack(k), c) for k, c in self._terms.items()]
        rows.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return rows

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> ExactRational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(0, 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._tdeg is None:
            vt = self.vars
            self._tdeg = max((sum(vt.unpack(k)) for k in self._terms), default=-1)
        return self._tdeg

    def degree_in(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        shift = BITS * (len(self.vars) - 1 - self.vars.index(name))
        return max(((k >> shift) & MASK for k in self._terms), default=-1)

    def degree_map(self) -> Dict[str, int]:
        return {v: self.degree_in(v) for v in self.variables()}

    def variables(self) -> Tuple[str, ...]:
        """Names that actually occur, in table order."""
        seen = [False] * len(self.vars)
        for k in self._terms:
            for i, e in enumerate(self.vars.unpack(k)):
                if e:
                    seen[i] = True
        return tuple(v for v, s in zip(self.vars.names, seen) if s)

    def coefficient(self, exps: Sequence[int]) -> ExactRational:
        return self._terms.get(self.vars.pack(exps), 0)

    def leading_term(self) -> Tuple[int, ExactRational]:
        """Largest packed key in lex order, with its coefficient."""
        k = max(self._terms)
        return k, self._terms[k]

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars is not self.vars and other.vars != self.vars:
                raise VarTableMismatch(f"{self.vars!r} vs {other.vars!r}")
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = rational(c)
        if not c:
            return Poly.zero(self.vars)
        if c == 1:
            return self
        return Poly._raw(self.vars, {k: _norm(v * c) for k, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly.zero(self.vars)
        if self.total_degree() + other.total_degree() > MAX_DEGREE:
            raise OverflowError("exponent exceeds packed-monomial capacity")
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((kb, cb),) = b.items()
            return Poly._raw(self.vars, {ka + kb: _norm(ca * cb) for ka, ca in a.items()})
        out: Dict[int, ExactRational] = {}
        get = out.get
        bl = list(b.items())
        for ka, ca in a.items():
            for kb, cb in bl:
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return Poly._raw(self.vars, {k: _norm(c) for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.vars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.vars == other.vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self._terms.get(0, 0) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self._terms.items())))

    def __str__(self) -> str:
        from .polyparse import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, vars={' '.join(self.vars.names)!r})"

    # structural helpers
    def reindex(self, vars: VarTable) -> "Poly":
        """Re-express over another table; every occurring variable must exist there."""
        if vars == self.vars:
            return self
        src = self.vars.names
        pos = [vars.index(v) if v in vars else None for v in src]
        out = {}
        for k, c in self._terms.items():
            exps = self.vars.unpack(k)
            new = [0] * len(vars)
            for i, e in enumerate(exps):
                if e:
                    if pos[i] is None:
                        raise UnknownVariable(f"variable {src[i]!r} occurs but is absent from {vars!r}")
                    new[pos[i]] = e
            out[vars.pack(new)] = c
        return Poly._raw(vars, out)

    def specialize(self, assignment: Mapping[str, object]) -> "Poly":
        """Substitute rationals for some variables, staying over the same table."""
        vt = self.vars
        idx = {vt.index(v): rational(x) for v, x in assignment.items()}
        out: Dict[int, ExactRational] = {}
        for k, c in self._terms.items():
            exps = list(vt.unpack(k))
            for i, x in idx.items():
                if exps[i]:
                    c = c * x ** exps[i]
                    exps[i] = 0
            if c:
                kk = vt.pack(exps)
                out[kk] = out.get(kk, 0) + c
        return Poly._raw(vt, {k: _norm(c) for k, c in out.items() if c})

    def content(self) -> ExactRational:
        """Positive rational c with self/c having coprime integer coefficients."""
        from math import gcd

        if not self._terms:
            return 0
        num = 0
        den = 1
        for c in self._terms.values():
            f = Fraction(c)
            num = gcd(num, f.numerator)
            den = den * f.denominator // gcd(den, f.denominator)
        return rational(Fraction(num, den))

    def primitive(self) -> "Poly":
        c = self.content()
        return self if not c else self.scale(Fraction(1) / c)


def _check(p: Poly, q: Poly):
    if p.vars is not q.vars and p.vars != q.vars:
        raise VarTableMismatch(f"{p.vars!r} vs {q.vars!r}")


def add(p: Poly, q: Poly) -> Poly:
    _check(p, q)
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    _check(p, q)
    return p * q


def partial_derivative(p: Poly, v: str) -> Poly:
    vt = p.vars
    unit = vt.unit(v)
    shift = BITS * (len(vt) - 1 - vt.index(v))
    out = {}
    for k, c in p.terms.items():
        e = (k >> shift) & MASK
        if e:
            out[k - unit] = _norm(c * e)
    return Poly._raw(vt, out)


def univariate_view(p: Poly, v: str) -> List[Poly]:
    """Coefficients c_0..c_d (index = power of v), each free of v."""
    vt = p.vars
    shift = BITS * (len(vt) - 1 - vt.index(v))
    buckets: Dict[int, Dict[int, ExactRational]] = {}
    for k, c in p.terms.items():
        e = (k >> shift) & MASK
        buckets.setdefault(e, {})[k - (e << shift)] = c
    if not buckets:
        return []
    d = max(buckets)
    return [Poly._raw(vt, buckets.get(i, {})) for i in range(d + 1)]


def from_univariate(coeffs: Sequence[Poly], v: str, vars: VarTable) -> Poly:
    x = Poly.var(vars, v)
    out = Poly.zero(vars)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def substitute(p: Poly, v: str, q: Poly) -> Poly:
    """Replace every occurrence of ``v`` in ``p`` by ``q`` (Horner)."""
    _check(p, q)
    coeffs = univariate_view(p, v)
    out = Poly.zero(p.vars)
    for c in reversed(coeffs):
        out = out * q + c
    return out


def substitute_fraction(p: Poly, names: Sequence[str], nums: Sequence[Poly], den: Poly) -> Tuple[Poly, int]:
    """Substitute v_i <- nums[i]/den jointly and clear the denominator.

    Returns (den^d * p(nums/den), d) where d is the total degree of ``p`` in
    the substituted group, so the result is a polynomial.
    """
    vt = p.vars
    idx = [vt.index(v) for v in names]
    groups: Dict[Tuple[int, ...], Dict[int, ExactRational]] = {}
    for k, c in p.terms.items():
        exps = list(vt.unpack(k))
        sub = tuple(exps[i] for i in idx)
        for i in idx:
            exps[i] = 0
        groups.setdefault(sub, {})[vt.pack(exps)] = c
    d = max((sum(s) for s in groups), default=0)
    powers_cache: Dict[Tuple[int, int], Poly] = {}

    def power(j: int, e: int) -> Poly:
        key = (j, e)
        if key not in powers_cache:
            powers_cache[key] = nums[j] ** e
        return powers_cache[key]

    den_pows = [Poly.const(vt, 1)]
    for _ in range(d):
        den_pows.append(den_pows[-1] * den)
    out = Poly.zero(vt)
    for sub, rest in groups.items():
        term = Poly._raw(vt, rest) * den_pows[d - sum(sub)]
        for j, e in enumerate(sub):
            if e:
                term = term * power(j, e)
        out = out + term
    return out, d


def evaluate(p: Poly, assignment: Mapping[str, object]) -> ExactRational:
    vt = p.vars
    occurring = p.variables()
    missing = [v for v in occurring if v not in assignment]
    if missing:
        raise MissingAssignment(f"no value for {', '.join(missing)}")
    vals = [rational(assignment[v]) if v in assignment else 0 for v in vt.names]
    total = 0
    for k, c in p.terms.items():
        t = c
        for x, e in zip(vals, vt.unpack(k)):
            if e:
                t = t * x ** e
        total += t
    return _norm(Fraction(total)) if not isinstance(total, int) else total


def _as_univariate(p: Poly, v: str) -> List[Fraction]:
    others = [u for u in p.variables() if u != v]
    if others:
        raise ValueError(f"polynomial is not univariate in {v!r}; also depends on {', '.join(others)}")
    return [Fraction(c.constant_value()) for c in univariate_view(p, v)]


def _uni_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = a[:]
    lb = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lb
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= f * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def univariate_gcd(p: Poly, q: Poly, v: str) -> Poly:
    """Monic gcd of two polynomials univariate in ``v`` (Euclid over Q)."""
    _check(p, q)
    a, b = _as_univariate(p, v), _as_univariate(q, v)
    if not a and not b:
        raise ValueError("gcd of two zero polynomials is undefined")
    while b:
        a, b = b, _uni_rem(a, b)
    lc = a[-1]
    return from_univariate([Poly.const(p.vars, c / lc) for c in a], v, p.vars)


def _rational_sqrt(c) -> Union[ExactRational, None]:
    c = Fraction(c)
    if c < 0:
        return None
    a, b = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if a * a != c.numerator or b * b != c.denominator:
        return None
    return _norm(Fraction(a, b))


def square_root(p: Poly) -> Union[Poly, None]:
    """Exact h with h*h == p and positive leading coefficient, else None.

    Peels off leading terms in lex order: each new term of h is
    LT(p - h^2) / (2 LT(h)).
    """
    if p.is_zero():
        return Poly.zero(p.vars)
    vt = p.vars
    k0, c0 = p.leading_term()
    exps = vt.unpack(k0)
    r0 = _rational_sqrt(c0)
    if r0 is None or any(e % 2 for e in exps):
        return None
    lead = Poly._raw(vt, {vt.pack([e // 2 for e in exps]): r0})
    hk = vt.pack([e // 2 for e in exps])
    h = lead
    rem = p - h * h
    while not rem.is_zero():
        k, c = rem.leading_term()
        if k > k0 or not _divides(hk, k, vt):
            return None
        t = Poly._raw(vt, {k - hk: _div(c, 2 * r0)})
        rem = rem - (h * t).scale(2) - t * t
        h = h + t
    return h


@dataclass(frozen=True, eq=False)
class PolyFraction:
    """num/den with no reduction; equality is by cross-multiplication."""

    num: Poly
    den: Poly

    def __post_init__(self):
        _check(self.num, self.den)
        if self.den.is_zero():
            raise ZeroDivisionError("PolyFraction with zero denominator")

    def __add__(self, other):
        other = _as_fraction(other, self.num.vars)
        return PolyFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return PolyFraction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_fraction(other, self.num.vars))

    def __mul__(self, other):
        other = _as_fraction(other, self.num.vars)
        return PolyFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyFraction):
            return NotImplemented
        return frac_equal(self, other)

    __hash__ = None


def _as_fraction(x, vars: VarTable) -> PolyFraction:
    if isinstance(x, PolyFraction):
        return x
    if isinstance(x, Poly):
        return PolyFraction(x, Poly.const(x.vars, 1))
    return PolyFraction(Poly.const(vars, x), Poly.const(vars, 1))


def frac_equal(a: PolyFraction, b: PolyFraction) -> bool:
    return a.num * b.den == b.num * a.den


def variables(vt: VarTable, *names: str) -> Tuple[Poly, ...]:
    """Convenience: the named variables as polynomials."""
    return tuple(Poly.var(vt, nm) for nm in names)
