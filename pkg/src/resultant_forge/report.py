"""Report records shared by the pipelines and the CLI."""
from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .polycore import Poly
from .polyparse import format_poly

DEFAULT_MAX_TERMS = 50_000

PASS = "PASS"
FAIL = "FAIL"


def rat_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def poly_summary(p: Poly, max_terms: int = DEFAULT_MAX_TERMS) -> Dict[str, Any]:
    text = format_poly(p)
    out: Dict[str, Any] = {
        "vars": list(p.vars.names),
        "terms": len(p),
        "degree_map": p.degree_map(),
        "total_degree": p.total_degree(),
    }
    if len(p) <= max_terms:
        out["poly"] = text
    else:
        out["sha256"] = hashlib.sha256(text.encode()).hexdigest()
    return out


@dataclass
class Stage:
    name: str
    poly: Poly
    millis: float = 0.0
    notes: List[str] = field(default_factory=list)

    @property
    def nonzero(self) -> bool:
        return not self.poly.is_zero()

    def to_dict(self, max_terms: int = DEFAULT_MAX_TERMS, timing: bool = True) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "name": self.name,
            "degree_map": self.poly.degree_map(),
            "nonzero": self.nonzero,
            "terms": len(self.poly),
        }
        if timing:
            d["millis"] = round(self.millis, 1)
        if self.notes:
            d["notes"] = list(self.notes)
        return d


@dataclass
class PipelineReport:
    case: str
    params: Dict[str, Any]
    stages: List[Stage] = field(default_factory=list)
    verdict: str = FAIL
    proportionality_constants: Dict[str, Optional[str]] = field(default_factory=dict)
    printed_vs_derived_diffs: List[str] = field(default_factory=list)
    final: Optional[Poly] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self, max_terms: int = DEFAULT_MAX_TERMS, timing: bool = True) -> Dict[str, Any]:
        d = {
            "case": self.case,
            "params": self.params,
            "stages": [s.to_dict(max_terms, timing) for s in self.stages],
            "verdict": self.verdict,
            "proportionality_constants": self.proportionality_constants,
            "printed_vs_derived_diffs": self.printed_vs_derived_diffs,
        }
        if self.final is not None:
            d["final"] = poly_summary(self.final, max_terms)
        if self.extra:
            d["extra"] = self.extra
        return d

    def to_json(self, max_terms: int = DEFAULT_MAX_TERMS, timing: bool = True) -> str:
        return json.dumps(self.to_dict(max_terms, timing), indent=2, sort_keys=False)


@contextmanager
def timed(sink: list):
    t0 = time.perf_counter()
    yield
    sink.append((time.perf_counter() - t0) * 1000.0)
