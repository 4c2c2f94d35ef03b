import random

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import univariate
from resultant_forge.checks import coprime_pair, planted_pair
from resultant_forge.polycore import Poly, VarTable, univariate_view, variables
from resultant_forge.resultant import (
    INCONCLUSIVE,
    NOT_SHARED,
    SHARED,
    DegenerateInput,
    PreconditionViolated,
    common_factor_oracle,
    resultant,
    resultant_ex,
    sylvester,
)

X = VarTable(["x"])
VT = VarTable(["x", "H", "a0", "a1", "b0", "b1"])
x, H, a0, a1, b0, b1 = variables(VT, "x", "H", "a0", "a1", "b0", "b1")


def consts(rows, vt=X):
    return [[Poly.const(vt, c) for c in r] for r in rows]


def test_sylvester_layouts():
    xx, = variables(X, "x")
    assert sylvester(xx - 1, xx + 1, "x").rows == consts([[1, -1], [1, 1]])
    assert sylvester(xx ** 2 + 1, xx - 1, "x").rows == consts([[1, 0, 1], [1, -1, 0], [0, 1, -1]])
    assert sylvester(a0 * x + a1, b0 * x + b1, "x").rows == [[a0, a1], [b0, b1]]


def test_resultant_examples():
    xx, = variables(X, "x")
    assert resultant(xx - 1, xx + 1, "x") == Poly.const(X, 2)
    assert resultant(xx ** 2 + 1, xx - 1, "x") == Poly.const(X, 2)
    p, q = x ** 2 + H, 3 * x - a0
    assert resultant((x - 1) * p, (x - 1) * q, "x").is_zero()


def test_methods_agree():
    f = (x - H) ** 3 + a0 * x
    g = x ** 2 * b0 - a1
    assert resultant(f, g, "x", "minor") == resultant(f, g, "x", "bareiss")


def test_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        resultant(H + 1, a0, "x")
    with pytest.raises(PreconditionViolated):
        resultant(Poly.zero(VT), Poly.zero(VT), "x")
    r = resultant_ex(x ** 2 + 1, Poly.const(VT, 3), "x")
    assert r.value == Poly.const(VT, 9)
    assert r.notes


def test_oracle_examples():
    f, g = (x - H) * (x + 1), (x - H) * (x + 2)
    assert resultant(f, g, "x").is_zero()
    assert common_factor_oracle(f, g, "x").verdict == SHARED
    v = common_factor_oracle(x - 1, x - 2, "x")
    assert v.verdict == NOT_SHARED
    # Res = prod(a_i - b_j) over roots 1 and 2, i.e. -1; nonzero as required
    assert resultant(x - 1, x - 2, "x") == Poly.const(VT, oracles.resultant([-1, 1], [-2, 1]))
    assert resultant(x - 1, x - 2, "x") == Poly.const(VT, -1)


def test_oracle_flags_a_wrong_resultant():
    f, g = (x - H) * (x + 1), (x - H) * (x + 2)
    v = common_factor_oracle(f, g, "x", res=Poly.const(VT, 1))
    assert v.verdict == INCONCLUSIVE


def test_swap_sign_rule():
    f, g = x ** 3 + H * x + 1, x ** 2 - a0
    assert resultant(g, f, "x") == resultant(f, g, "x") * (-1) ** (3 * 2)
    f, g = x ** 3 + H, x - a0
    assert resultant(g, f, "x") == -resultant(f, g, "x")


coeff_lists = st.lists(st.integers(-7, 7), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


@given(coeff_lists, coeff_lists)
def test_matches_euclidean_oracle(a, b):
    r = resultant(univariate(a), univariate(b), "x")
    assert r == Poly.const(X, oracles.resultant(a, b))


@given(coeff_lists, coeff_lists)
def test_zero_iff_common_root(a, b):
    r = resultant(univariate(a), univariate(b), "x")
    assert r.is_zero() == (oracles.gcd_degree(a, b) >= 1)


@given(st.integers(0, 10 ** 6))
def test_planted_and_coprime_pairs(seed):
    rng = random.Random(seed)
    f, g = planted_pair(rng, X, "x")
    assert resultant(f, g, "x").is_zero()
    f, g = coprime_pair(rng, X, "x")
    assert not resultant(f, g, "x").is_zero()


@given(st.integers(0, 10 ** 6))
def test_oracle_on_planted_bivariate(seed):
    rng = random.Random(seed)
    h = x + rng.randint(-3, 3) * H + rng.randint(-3, 3)
    f = h * (x ** 2 + rng.randint(1, 4) * H)
    g = h * (rng.randint(1, 4) * x - H + 1)
    v = common_factor_oracle(f, g, "x", trials=4, rng=rng)
    assert v.verdict == SHARED
    assert all(t.gcd_degree >= 1 for t in v.valid_trials)


def test_leading_coefficient_kills_are_discarded():
    f, g = H * x ** 2 + 1, x - 1
    v = common_factor_oracle(f, g, "x", trials=30, rng=random.Random(0))
    for t in v.trials:
        assert t.status == "valid" or t.point["H"] == 0
    assert univariate_view(f, "x")[-1] == H
