from __future__ import annotations

import os
import sys
from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from resultant_forge.polycore import Poly, VarTable  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

XYZ = VarTable(["x", "y", "z"])
X = VarTable(["x"])

small_rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polys(draw, vt=XYZ, max_terms=5, max_deg=3, rationals=True):
    coeff = small_rationals if rationals else st.integers(-6, 6)
    exps = st.tuples(*[st.integers(0, max_deg) for _ in vt.names])
    terms = draw(st.dictionaries(exps, coeff, max_size=max_terms))
    return Poly(vt, terms)


def univariate(coeffs, vt=X, v="x"):
    i = vt.index(v)
    terms = {}
    for e, c in enumerate(coeffs):
        ex = [0] * len(vt)
        ex[i] = e
        terms[tuple(ex)] = c
    return Poly(vt, terms)


# acceptance lines, printed once at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
