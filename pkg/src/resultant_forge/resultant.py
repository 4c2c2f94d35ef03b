"""Sylvester matrices, resultants and a gcd-based common-factor oracle."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .linalg import PolyMatrix, determinant
from .polycore import Poly, VarTableMismatch, univariate_gcd, univariate_view


class DegenerateInput(ValueError):
    """Both polynomials are constant in the elimination variable."""


class PreconditionViolated(ValueError):
    """Both leading coefficients vanish (both inputs are zero)."""


@dataclass(frozen=True)
class SylvesterLayout:
    """Coefficients in descending powers: a_0 is the leading coefficient."""

    f_coeffs: Tuple[Poly, ...]
    g_coeffs: Tuple[Poly, ...]
    m: int
    n: int

    @property
    def size(self) -> int:
        return self.m + self.n

    def matrix(self) -> PolyMatrix:
        vt = (self.f_coeffs or self.g_coeffs)[0].vars
        zero = Poly.zero(vt)
        N = self.size
        rows = []
        # n shifted rows of a's, then m shifted rows of b's
        for i in range(self.n):
            row = [zero] * N
            row[i:i + self.m + 1] = self.f_coeffs
            rows.append(row)
        for j in range(self.m):
            row = [zero] * N
            row[j:j + self.n + 1] = self.g_coeffs
            rows.append(row)
        return PolyMatrix(rows, vt)


def sylvester_layout(f: Poly, g: Poly, v: str) -> SylvesterLayout:
    if f.vars != g.vars:
        raise VarTableMismatch(f"{f.vars!r} vs {g.vars!r}")
    fc, gc = univariate_view(f, v), univariate_view(g, v)
    if not fc and not gc:
        raise PreconditionViolated("both leading coefficients are zero (f = g = 0)")
    m, n = len(fc) - 1, len(gc) - 1
    if m <= 0 and n <= 0:
        raise DegenerateInput(f"both polynomials are constant in {v!r}")
    zero = Poly.zero(f.vars)
    # a zero polynomial has no coefficients; give it a single zero so the
    # layout keeps its shape (n = 0 rows of it, or a zero block)
    fc = fc or [zero]
    gc = gc or [zero]
    return SylvesterLayout(tuple(reversed(fc)), tuple(reversed(gc)), max(m, 0), max(n, 0))


def sylvester(f: Poly, g: Poly, v: str) -> PolyMatrix:
    return sylvester_layout(f, g, v).matrix()


@dataclass
class ResultantResult:
    value: Poly
    m: int
    n: int
    method: str
    notes: List[str] = field(default_factory=list)


def resultant_ex(f: Poly, g: Poly, v: str, method: str = "auto") -> ResultantResult:
    """Resultant plus the bookkeeping the pipelines report."""
    lay = sylvester_layout(f, g, v)
    notes = []
    if lay.m == 0 or lay.n == 0:
        notes.append(
            f"degree collapse in {v} (deg f = {lay.m}, deg g = {lay.n}): "
            "using Res = g^deg f / f^deg g convention"
        )
    if f.is_zero() or g.is_zero():
        notes.append("one input is the zero polynomial; resultant is 0")
    mat = lay.matrix()
    if method == "auto":
        from .linalg import choose_method

        method = choose_method(mat)
    return ResultantResult(determinant(mat, method), lay.m, lay.n, method, notes)


def resultant(f: Poly, g: Poly, v: str, method: str = "auto") -> Poly:
    return resultant_ex(f, g, v, method).value


# ------------------------------------------------------------------ oracle

SHARED = "SharedRoot"
NOT_SHARED = "NoSharedRoot"
INCONCLUSIVE = "Inconclusive"


@dataclass
class OracleTrial:
    point: dict
    status: str  # "valid" or a reason the trial was discarded
    gcd_degree: Optional[int] = None
    resultant_value: Optional[Fraction] = None
    consistent: Optional[bool] = None


@dataclass
class OracleVerdict:
    verdict: str
    trials: List[OracleTrial]

    @property
    def valid_trials(self) -> List[OracleTrial]:
        return [t for t in self.trials if t.status == "valid"]


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def common_factor_oracle(f: Poly, g: Poly, v: str, trials: int = 5,
                         rng: Optional[random.Random] = None, res: Optional[Poly] = None) -> OracleVerdict:
    """Check for a shared root by specialising all other variables.

    A trial is discarded when the specialisation kills a leading coefficient
    in ``v`` (degrees must be preserved for specialisation to commute with
    the resultant). In each valid trial the specialised resultant is compared
    with the univariate gcd: gcd degree >= 1 must coincide with Res = 0.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("common_factor_oracle needs nonzero inputs")
    rng = rng or random.Random(0)
    if res is None:
        res = resultant(f, g, v)
    others = [u for u in f.vars.names if u != v]
    lf, lg = univariate_view(f, v)[-1], univariate_view(g, v)[-1]
    out = []
    for _ in range(trials):
        pt = {u: _random_rational(rng) for u in others}
        if lf.specialize(pt).is_zero() or lg.specialize(pt).is_zero():
            out.append(OracleTrial(pt, "leading coefficient vanished"))
            continue
        fs, gs = f.specialize(pt), g.specialize(pt)
        if fs.degree_in(v) <= 0 and gs.degree_in(v) <= 0:
            out.append(OracleTrial(pt, "both specialisations constant"))
            continue
        gd = univariate_gcd(fs, gs, v).degree_in(v)
        rv = res.specialize(pt).constant_value()
        out.append(OracleTrial(pt, "valid", gd, rv, (gd >= 1) == (rv == 0)))
    valid = [t for t in out if t.status == "valid"]
    if not valid or not all(t.consistent for t in valid):
        verdict = INCONCLUSIVE
    elif any(t.gcd_degree >= 1 for t in valid):
        verdict = SHARED
    else:
        verdict = NOT_SHARED
    return OracleVerdict(verdict, out)
