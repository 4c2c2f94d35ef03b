"""Seeded random generators and the selfcheck property suite.

Everything here is driven by one ``random.Random``; the JSON report carries
no timings so equal seeds give byte-identical output.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .linalg import PolyMatrix, det_bareiss, det_minor_expansion
from .polycore import Poly, VarTable, evaluate, partial_derivative, univariate_gcd
from .polyparse import format_poly, parse
from .report import FAIL, PASS
from .resultant import SHARED, common_factor_oracle, resultant


def random_coeff(rng: random.Random, bound: int = 9, fractions: bool = False):
    c = rng.randint(-bound, bound)
    if fractions and rng.random() < 0.3:
        return Fraction(c, rng.randint(1, 5))
    return c


def random_poly(rng: random.Random, vt: VarTable, max_terms: int = 5, max_deg: int = 3,
                bound: int = 9, fractions: bool = False) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(0, max_deg) for _ in vt.names)
        terms[exps] = random_coeff(rng, bound, fractions)
    return Poly(vt, terms)


def random_univariate(rng: random.Random, vt: VarTable, v: str, deg: int, bound: int = 9) -> Poly:
    """Degree exactly ``deg`` in ``v`` with integer coefficients."""
    i = vt.index(v)
    terms = {}
    for e in range(deg + 1):
        c = rng.randint(-bound, bound)
        if e == deg and c == 0:
            c = rng.choice([-1, 1]) * rng.randint(1, bound)
        exps = [0] * len(vt)
        exps[i] = e
        terms[tuple(exps)] = c
    return Poly(vt, terms)


def planted_pair(rng: random.Random, vt: VarTable, v: str, max_deg: int = 4):
    """Two polynomials of degree <= max_deg sharing a factor of degree >= 1."""
    dh = rng.randint(1, max_deg)
    h = random_univariate(rng, vt, v, dh)
    f = h * random_univariate(rng, vt, v, rng.randint(0, max_deg - dh))
    g = h * random_univariate(rng, vt, v, rng.randint(0, max_deg - dh))
    return f, g


def coprime_pair(rng: random.Random, vt: VarTable, v: str, max_deg: int = 4):
    """Random pair, resampled until the Euclidean gcd is constant."""
    while True:
        f = random_univariate(rng, vt, v, rng.randint(1, max_deg))
        g = random_univariate(rng, vt, v, rng.randint(1, max_deg))
        if univariate_gcd(f, g, v).degree_in(v) == 0:
            return f, g


def random_matrix(rng: random.Random, size: int, vt: VarTable, max_deg: int = 2, max_terms: int = 3) -> PolyMatrix:
    rows = [[random_poly(rng, vt, max_terms, max_deg, bound=5) for _ in range(size)] for _ in range(size)]
    return PolyMatrix(rows, vt)


# ------------------------------------------------------------------ properties

@dataclass
class PropertyResult:
    name: str
    cases: int
    failures: int = 0
    first_failure: Optional[dict] = None

    def fail(self, case: dict):
        self.failures += 1
        if self.first_failure is None:
            self.first_failure = case

    def to_dict(self) -> dict:
        d = {"name": self.name, "cases": self.cases, "failures": self.failures}
        if self.first_failure is not None:
            d["first_failure"] = self.first_failure
        return d


def _texts(**polys) -> dict:
    return {k: format_poly(p) for k, p in polys.items()}


def prop_ring_axioms(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x", "y", "z"])
    res = PropertyResult("ring axioms", cases)
    zero, one = Poly.zero(vt), Poly.const(vt, 1)
    for _ in range(cases):
        p, q, r = (random_poly(rng, vt, fractions=True) for _ in range(3))
        ok = (p + q == q + p and p * q == q * p
              and (p + q) + r == p + (q + r) and (p * q) * r == p * (q * r)
              and p * (q + r) == p * q + p * r
              and p + zero == p and p * one == p and (p - p).is_zero())
        if not ok:
            res.fail(_texts(p=p, q=q, r=r))
    return res


def prop_derivative(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x", "y"])
    res = PropertyResult("product rule", cases)
    for _ in range(cases):
        p, q = random_poly(rng, vt), random_poly(rng, vt)
        lhs = partial_derivative(p * q, "x")
        rhs = partial_derivative(p, "x") * q + p * partial_derivative(q, "x")
        if lhs != rhs:
            res.fail(_texts(p=p, q=q))
    return res


def prop_resultant_gcd(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x"])
    res = PropertyResult("resultant vanishes iff gcd is nonconstant", cases)
    for i in range(cases):
        f, g = planted_pair(rng, vt, "x") if i % 2 == 0 else coprime_pair(rng, vt, "x")
        if f.degree_in("x") < 1 and g.degree_in("x") < 1:
            continue
        r = resultant(f, g, "x")
        shared = univariate_gcd(f, g, "x").degree_in("x") >= 1
        if r.is_zero() != shared:
            res.fail(_texts(f=f, g=g, res=r))
    return res


def prop_oracle(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x", "y"])
    res = PropertyResult("oracle confirms shared roots", cases)
    for _ in range(cases):
        h = random_poly(rng, vt, 3, 1, bound=4) + Poly.var(vt, "x")
        f = h * random_poly(rng, vt, 2, 1, bound=4)
        g = h * random_poly(rng, vt, 2, 1, bound=4)
        if f.degree_in("x") < 1 or g.degree_in("x") < 1:
            continue
        verdict = common_factor_oracle(f, g, "x", trials=3, rng=rng)
        if verdict.verdict != SHARED and verdict.valid_trials:
            res.fail(_texts(f=f, g=g))
    return res


def prop_det(rng: random.Random, cases: int, size: int = 4) -> PropertyResult:
    vt = VarTable(["x", "y"])
    res = PropertyResult(f"minor expansion equals Bareiss ({size}x{size})", cases)
    for _ in range(cases):
        m = random_matrix(rng, size, vt)
        if det_minor_expansion(m, threads=1) != det_bareiss(m):
            res.fail({"matrix": [[format_poly(e) for e in row] for row in m.rows]})
    return res


def prop_specialisation(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x", "y"])
    res = PropertyResult("resultant commutes with specialisation", cases)
    for _ in range(cases):
        f = random_univariate(rng, vt, "x", rng.randint(1, 3)) + random_poly(rng, vt, 3, 2)
        g = random_univariate(rng, vt, "x", rng.randint(1, 3)) + random_poly(rng, vt, 3, 2)
        if f.degree_in("x") < 1 or g.degree_in("x") < 1:
            continue
        y = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        fs, gs = f.specialize({"y": y}), g.specialize({"y": y})
        if fs.degree_in("x") != f.degree_in("x") or gs.degree_in("x") != g.degree_in("x"):
            continue
        lhs = resultant(f, g, "x").specialize({"y": y})
        if lhs != resultant(fs, gs, "x"):
            res.fail(dict(_texts(f=f, g=g), y=str(y)))
    return res


def prop_roundtrip(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x", "y", "z"])
    res = PropertyResult("parse(format(p)) == p", cases)
    for _ in range(cases):
        p = random_poly(rng, vt, fractions=True)
        text = format_poly(p)
        q = parse(text, vt)
        if q != p or format_poly(q) != text:
            res.fail({"p": text})
    return res


def prop_evaluation(rng: random.Random, cases: int) -> PropertyResult:
    vt = VarTable(["x", "y"])
    res = PropertyResult("evaluation is a ring map", cases)
    for _ in range(cases):
        p, q = random_poly(rng, vt), random_poly(rng, vt)
        pt = {"x": Fraction(rng.randint(-4, 4), rng.randint(1, 3)), "y": rng.randint(-4, 4)}
        if evaluate(p * q, pt) != evaluate(p, pt) * evaluate(q, pt) or evaluate(p + q, pt) != evaluate(p, pt) + evaluate(q, pt):
            res.fail(_texts(p=p, q=q))
    return res


SUITE: List[tuple] = [
    (prop_ring_axioms, 60),
    (prop_derivative, 60),
    (prop_evaluation, 60),
    (prop_roundtrip, 100),
    (prop_resultant_gcd, 100),
    (prop_oracle, 40),
    (prop_specialisation, 40),
    (prop_det, 30),
]


def selfcheck(seed: int = 0, scale: float = 1.0) -> dict:
    rng = random.Random(seed)
    results = []
    for fn, n in SUITE:
        results.append(fn(rng, max(1, int(n * scale))))
    verdict = PASS if all(r.failures == 0 for r in results) else FAIL
    return {"seed": seed, "properties": [r.to_dict() for r in results], "verdict": verdict}


def selfcheck_json(seed: int = 0, scale: float = 1.0) -> str:
    return json.dumps(selfcheck(seed, scale), indent=2, sort_keys=True)


def random_frame_config(rng: random.Random, n: int, repeated: bool = False):
    """Random post-lemma frame data; ``repeated`` makes exactly one pair of curvatures equal."""
    from .codazzi import FrameConfig

    H = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    mu = Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.randint(1, 2))
    ln = -n * H / 2
    k = n - 3
    vals: List[Fraction] = []
    while len(vals) < (k - 1 if repeated else k):
        v = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
        if v != ln and v not in vals:
            vals.append(v)
    if repeated:
        vals.insert(rng.randrange(len(vals) + 1), rng.choice(vals))
    return FrameConfig(n, tuple(vals), mu, H)
