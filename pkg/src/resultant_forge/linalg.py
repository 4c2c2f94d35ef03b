"""Exact dense linear algebra over Q[vars] and over Q."""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .polycore import ExactRational, Poly, VarTable, VarTableMismatch, _div, _norm, evaluate, rational

MINOR_CAP = 12
TERM_THRESHOLD = 4000
THREADS_ENV = "RESULTANT_FORGE_THREADS"


class DivisionNotExact(ArithmeticError):
    """Raised when q does not divide p; carries the remainder and a witness point."""

    def __init__(self, dividend: Poly, divisor: Poly, remainder: Poly, witness: Dict[str, ExactRational]):
        self.dividend, self.divisor, self.remainder, self.witness = dividend, divisor, remainder, witness
        super().__init__(
            f"division is not exact: remainder has {len(remainder)} terms; "
            f"p - q*quotient != 0 at {{{', '.join(f'{k}={v}' for k, v in witness.items())}}}"
        )


class MatrixTooLarge(ValueError):
    pass


class PolyMatrix:
    """Dense matrix of polynomials sharing one variable table."""

    def __init__(self, rows: Sequence[Sequence[Poly]], vars: Optional[VarTable] = None):
        rows = [list(r) for r in rows]
        if not rows and vars is None:
            raise ValueError("empty PolyMatrix needs an explicit VarTable")
        self.vars = vars if vars is not None else rows[0][0].vars
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged PolyMatrix")
            for e in r:
                if e.vars != self.vars:
                    raise VarTableMismatch("PolyMatrix entries must share one VarTable")
        self.rows = rows
        self.nrows, self.ncols = len(rows), ncols

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        inner = ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)
        return f"PolyMatrix([{inner}])"

    def term_count(self) -> int:
        return sum(len(e) for r in self.rows for e in r)

    def evaluate(self, assignment) -> "RatMatrix":
        return RatMatrix([[evaluate(e, assignment) for e in r] for r in self.rows])

    def swapped_rows(self, i: int, j: int) -> "PolyMatrix":
        rows = [r[:] for r in self.rows]
        rows[i], rows[j] = rows[j], rows[i]
        return PolyMatrix(rows, self.vars)


class RatMatrix:
    """Dense matrix over Q."""

    def __init__(self, rows: Sequence[Sequence[object]], ncols: Optional[int] = None):
        rows = [tuple(rational(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("empty RatMatrix needs ncols")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged RatMatrix")
        self.entries = tuple(rows)
        self.nrows, self.ncols = len(rows), ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and (self.ncols, self.entries) == (other.ncols, other.entries)

    def __repr__(self):
        return f"RatMatrix({[list(map(str, r)) for r in self.entries]})"

    def apply(self, v: Sequence[object]) -> Tuple[ExactRational, ...]:
        return tuple(_norm(Fraction(sum(a * x for a, x in zip(r, v)))) for r in self.entries)


# ---------------------------------------------------------------- division

def poly_divmod(p: Poly, q: Poly) -> Tuple[Poly, Poly]:
    """Multivariate division by ``q`` in lex order: p = q*quot + rem."""
    if p.vars != q.vars:
        raise VarTableMismatch(f"{p.vars!r} vs {q.vars!r}")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    vt = p.vars
    qk, qc = q.leading_term()
    qterms = list(q.terms.items())
    qexps = vt.unpack(qk)
    r = dict(p.terms)
    quot: Dict[int, ExactRational] = {}
    rem: Dict[int, ExactRational] = {}
    while r:
        k = max(r)
        c = r[k]
        if all(a >= b for a, b in zip(vt.unpack(k), qexps)):
            f = _div(c, qc)
            dk = k - qk
            quot[dk] = f
            for kq, cq in qterms:
                kk = kq + dk
                v = r.get(kk, 0) - f * cq
                if v:
                    r[kk] = v
                else:
                    r.pop(kk, None)
        else:
            rem[k] = c
            del r[k]
    return Poly._raw(vt, quot), Poly._raw(vt, {k: _norm(c) for k, c in rem.items()})


def _witness(rem: Poly) -> Dict[str, ExactRational]:
    names = rem.vars.names
    rng = random.Random(0)
    for attempt in range(200):
        pt = {v: rng.randint(-5 - attempt, 5 + attempt) for v in names}
        if evaluate(rem, pt) != 0:
            return pt
    raise AssertionError("nonzero polynomial vanished at 200 sample points")


def exact_divide(p: Poly, q: Poly) -> Poly:
    """The unique polynomial quot with p = q*quot, or DivisionNotExact."""
    quot, rem = poly_divmod(p, q)
    if rem:
        raise DivisionNotExact(p, q, rem, _witness(rem))
    return quot


# ------------------------------------------------------------- determinants

def _check_square(m: PolyMatrix):
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of a non-square {m.nrows}x{m.ncols} matrix")


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1").strip() or "1"
    n = int(raw)
    return (os.cpu_count() or 1) if n == 0 else max(1, n)


def _minor(rows: List[List[Poly]], vars: VarTable, start: int, cols: Tuple[int, ...], memo) -> Poly:
    """det of rows[start:] restricted to ``cols`` (sorted), memoised on cols."""
    if not cols:
        return Poly.const(vars, 1)
    hit = memo.get(cols)
    if hit is not None:
        return hit
    row = rows[start]
    acc = Poly.zero(vars)
    for pos, j in enumerate(cols):
        e = row[j]
        if e.is_zero():
            continue
        sub = _minor(rows, vars, start + 1, cols[:pos] + cols[pos + 1:], memo)
        if sub.is_zero():
            continue
        t = e * sub
        acc = acc - t if pos & 1 else acc + t
    memo[cols] = acc
    return acc


def _cofactor_job(args):
    rows, vars, cols = args
    return _minor(rows, vars, 1, cols, {})


def det_minor_expansion(m: PolyMatrix, cap: int = MINOR_CAP, threads: Optional[int] = None) -> Poly:
    """Laplace expansion along rows, memoised on the remaining column subset."""
    _check_square(m)
    n = m.nrows
    if n > cap:
        raise MatrixTooLarge(f"{n}x{n} exceeds the minor-expansion cap {cap}; use det_bareiss")
    if n == 0:
        return Poly.const(m.vars, 1)
    threads = thread_count() if threads is None else threads
    cols = tuple(range(n))
    if threads <= 1 or n < 6:
        return _minor(m.rows, m.vars, 0, cols, {})
    # top-level cofactors in parallel; combined in fixed column order
    jobs = [(m.rows, m.vars, cols[:j] + cols[j + 1:]) for j in range(n) if not m.rows[0][j].is_zero()]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        subs = list(ex.map(_cofactor_job, jobs))
    acc = Poly.zero(m.vars)
    it = iter(subs)
    for j in range(n):
        e = m.rows[0][j]
        if e.is_zero():
            continue
        t = e * next(it)
        acc = acc - t if j & 1 else acc + t
    return acc


def det_bareiss(m: PolyMatrix) -> Poly:
    """Fraction-free elimination; every division is exact by construction."""
    _check_square(m)
    n = m.nrows
    if n == 0:
        return Poly.const(m.vars, 1)
    a = [r[:] for r in m.rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(m.vars)
        pivot = a[k][k]
        rk = a[k]
        const_prev = prev.constant_value() if prev is not None and prev.is_constant() else None
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                t = ri[j] * pivot
                if not aik.is_zero() and not rk[j].is_zero():
                    t = t - aik * rk[j]
                if prev is None:
                    ri[j] = t
                elif const_prev is not None:
                    ri[j] = t.scale(Fraction(1) / Fraction(const_prev)) if const_prev != 1 else t
                else:
                    ri[j] = exact_divide(t, prev)
            ri[k] = Poly.zero(m.vars)
        prev = pivot
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def choose_method(m: PolyMatrix) -> str:
    if m.nrows > MINOR_CAP or m.term_count() > TERM_THRESHOLD:
        return "bareiss"
    return "minor"


def determinant(m: PolyMatrix, method: str = "auto") -> Poly:
    if method == "auto":
        method = choose_method(m)
    if method == "minor":
        return det_minor_expansion(m)
    if method == "bareiss":
        return det_bareiss(m)
    raise ValueError(f"unknown determinant method {method!r}")


# --------------------------------------------------------------- over Q

def rat_det(m: RatMatrix) -> ExactRational:
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in r] for r in m.entries]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return _norm(det)


def rref(m: RatMatrix) -> Tuple[List[Dict[int, Fraction]], List[int]]:
    """Reduced row echelon form as sparse rows; pivots are leftmost nonzeros.

    Rows are processed in order and each new pivot is the leftmost surviving
    column, so the result is deterministic.
    """
    basis: List[Dict[int, Fraction]] = []  # rows in echelon form, keyed by pivot
    pivot_of: Dict[int, int] = {}
    for r in m.entries:
        row = {j: Fraction(x) for j, x in enumerate(r) if x}
        # basis rows are fully reduced, so clearing one pivot never
        # reintroduces another
        for p in [j for j in row if j in pivot_of]:
            f = row.get(p)
            if not f:
                continue
            for j, c in basis[pivot_of[p]].items():
                v = row.get(j, 0) - f * c
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {j: c * inv for j, c in row.items()}
        # back-substitute into earlier rows
        for prow in basis:
            f = prow.get(lead)
            if f:
                for j, c in row.items():
                    v = prow.get(j, 0) - f * c
                    if v:
                        prow[j] = v
                    else:
                        prow.pop(j, None)
        pivot_of[lead] = len(basis)
        basis.append(row)
    order = sorted(range(len(basis)), key=lambda i: min(basis[i]))
    rows = [basis[i] for i in order]
    return rows, [min(r) for r in rows]


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def nullspace(m: RatMatrix) -> List[Tuple[ExactRational, ...]]:
    """Basis of {v : m v = 0}: one vector per free column, free entry 1."""
    rows, pivots = rref(m)
    pivset = set(pivots)
    out = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [0] * m.ncols
        v[f] = 1
        for r, p in zip(rows, pivots):
            c = r.get(f)
            if c:
                v[p] = _norm(-c)
        out.append(tuple(v))
    return out
