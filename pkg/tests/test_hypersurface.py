import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import small_rationals
from resultant_forge.linalg import PolyMatrix, det_bareiss
from resultant_forge.polycore import Poly, VarTable, evaluate, partial_derivative, square_root, substitute, univariate_view, variables
from resultant_forge.resultant import resultant
from resultant_forge.hypersurface import (
    TABLE_VI,
    CaseVIParams,
    CaseVParams,
    ParameterError,
    build_f_case5,
    build_f_case6,
    build_g_case5,
    build_PQR,
    case4_check,
    case5_matrix,
    case6_matrix,
    derive_f_case5,
    derive_f_case6,
    eliminate_lambdaA,
    lemma51_identities,
    norm_constraint_vi,
    printed_g1,
    proportionality,
    symmetric_f_case6,
    theorem1_pipeline,
    theorem2_pipeline,
    trace_constraint_v,
    trace_constraint_vi,
)

FIVE = [(6, 4, 1), (7, 4, 2), (8, 5, 1)]


# ------------------------------------------------------------------ parameters

@pytest.mark.parametrize("args", [(5, 4), (4, 3), (6, 2), (6, 4, 0)])
def test_case5_invariants(args):
    with pytest.raises(ParameterError):
        CaseVParams(*args)


@pytest.mark.parametrize("args", [(8, 2, 2), (8, 4, 0), (7, 4, 2), (8, 4, 2, 0)])
def test_case6_invariants(args):
    with pytest.raises(ParameterError):
        CaseVIParams(*args)


def test_fraction_strings_accepted():
    assert CaseVParams(6, 4, "1/2").mu == Fraction(1, 2)
    assert CaseVIParams(8, 4, 2, 1, "5/3").k1 == Fraction(5, 3)


# ------------------------------------------------------------------ five curvatures

def test_trace_constraint_examples():
    p = trace_constraint_v(CaseVParams(6, 4))
    l3, l5, H = variables(p.vars, "l3", "l5", "H")
    assert p == 4 * l3 + 2 * l5 - 18 * H
    assert substitute(p, "l3", H * Fraction(9, 2) - l5 * Fraction(1, 2)).is_zero()
    q = trace_constraint_v(CaseVParams(5, 3))
    m3, m4, G = variables(q.vars, "l3", "l4", "H")
    assert q == 2 * m3 + 2 * m4 - 15 * G


def test_PQR_examples():
    P, Q, R = build_PQR(CaseVParams(6, 4, 1))
    l3, H = variables(P.vars, "l3", "H")
    assert P == Poly.const(P.vars, 2)
    assert Q == 42 * H - 8 * l3
    assert R == 18 * H - 4 * l3
    assert build_PQR(CaseVParams(7, 4, 2))[0] == Poly.const(P.vars, 8)


def _f_termwise(n, r, mu, l3, H):
    P = Fraction(mu) * 2 * (n - r - 1)
    Q = n * (n - r + 5) * H - 4 * (r - 2) * l3
    R = 3 * n * H - 2 * (r - 2) * l3
    s2 = l3 * l3 + mu * mu
    t = 2 * l3 + n * H
    return 2 * P * Q * s2 + Q * t * (l3 * P - mu * R) - 2 * P * R * s2 - P * t * (l3 * R + mu * P)


@pytest.mark.parametrize("n,r,mu", FIVE)
@given(l3=small_rationals, H=small_rationals)
def test_f_case5_matches_termwise_evaluation(n, r, mu, l3, H):
    f = build_f_case5(CaseVParams(n, r, mu))
    assert evaluate(f, {"l3": l3, "H": H}) == _f_termwise(n, r, mu, l3, H)


def test_f_case5_degree_regression():
    f = build_f_case5(CaseVParams(6, 4, 1))
    assert f.degree_in("l3") == 3


def test_symbolic_mu_specialises():
    p = CaseVParams(6, 4, 1, symbolic_mu=True)
    f = build_f_case5(p)
    assert "mu" in f.vars
    assert f.specialize({"mu": 1}).reindex(VarTable(["l3", "H"])) == build_f_case5(CaseVParams(6, 4, 1))


@pytest.mark.parametrize("n,r,mu", FIVE)
def test_derived_f_proportional_to_printed(n, r, mu):
    d = derive_f_case5(CaseVParams(n, r, mu))
    assert d.constant == 1
    assert d.poly == build_f_case5(CaseVParams(n, r, mu))


@pytest.mark.parametrize("n,r,mu", FIVE)
def test_derived_determinant_at_random_points(n, r, mu):
    # independent check: numeric 2x2 determinant against the claimed factorisation
    m = case5_matrix(CaseVParams(n, r, mu))
    rng = random.Random(n * 100 + r)
    for _ in range(10):
        pt = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for v in m.vars.names}
        num = [[evaluate(m[i, j], pt) for j in range(2)] for i in range(2)]
        b1, b2, l3, H = pt["wB1"], pt["wB2"], pt["l3"], pt["H"]
        expect = (b1 * b1 + b2 * b2) * 2 * (l3 * l3 + mu * mu) * _f_termwise(n, r, mu, l3, H)
        assert oracles.leibniz_det(num) == expect


def test_determinant_vanishes_without_wB():
    m = case5_matrix(CaseVParams(6, 4, 1))
    zeroed = PolyMatrix([[e.specialize({"wB1": 0, "wB2": 0}) for e in row] for row in m.rows], m.vars)
    assert det_bareiss(zeroed).is_zero()


def test_printed_g_is_the_l3_derivative():
    p = CaseVParams(6, 4, 1)
    f, g = build_f_case5(p), build_g_case5(p)
    assert g == partial_derivative(f, "l3")
    assert g.degree_in("l3") == 2
    P, Q, R = build_PQR(p)
    l3 = Poly.var(P.vars, "l3")
    # the leading bracket 4 P l3 (Q - R) is the derivative of 2PQ s2 - 2PR s2 in its l3 * (Q-R) part
    assert (P * l3 * (Q - R) * 4).degree_in("l3") == 2


@pytest.mark.parametrize("n,r,mu", FIVE)
def test_theorem1_nonzero_in_H(n, r, mu):
    rep = theorem1_pipeline(CaseVParams(n, r, mu))
    assert rep.verdict == "PASS"
    assert rep.final.variables() == ("H",)
    assert rep.extra["final_degree_H"] == 6
    assert rep.extra["g_comparison"] == "equal"


def test_theorem1_content_regression():
    assert theorem1_pipeline(CaseVParams(6, 4, 1)).extra["final_content"] == "509607936"


@pytest.mark.parametrize("n,r,mu", FIVE)
def test_theorem1_specialisation_oracle(n, r, mu):
    rep = theorem1_pipeline(CaseVParams(n, r, mu))
    f = build_f_case5(CaseVParams(n, r, mu))
    lead = univariate_view(f, "l3")[-1]
    for h in [Fraction(1), Fraction(-2, 3), Fraction(5, 7), Fraction(3)]:
        if evaluate(lead, {"H": h}) == 0:
            continue
        coeffs = [evaluate(c, {"H": h}) for c in univariate_view(f, "l3")]
        deriv = [i * c for i, c in enumerate(coeffs)][1:]
        assert evaluate(rep.final, {"H": h}) == oracles.resultant(coeffs, deriv)


def test_res_f_f_is_zero():
    f = build_f_case5(CaseVParams(6, 4, 1))
    assert resultant(f, f, "l3").is_zero()


def test_symbolic_mu_pipeline():
    rep = theorem1_pipeline(CaseVParams(6, 4, 1, symbolic_mu=True))
    assert rep.verdict == "PASS"
    assert set(rep.final.variables()) <= {"H", "mu"}


# ------------------------------------------------------------------ four curvatures

@pytest.mark.parametrize("n,expected", [(4, "6*H"), (6, "3*H"), (10, "15/7*H")])
def test_case4_forces_minimal(n, expected):
    out = case4_check(n, 1)
    assert out["constraint"] == expected
    assert out["solutions"] == ["H = 0"]
    assert out["verdict"] == "PASS"


def test_case4_scales_with_mu():
    assert case4_check(10, 2)["constraint"] == "30/7*H"
    assert case4_check(4, 1)["cleared_constraint"] == "12*H"
    with pytest.raises(ParameterError):
        case4_check(6, 0)


# ------------------------------------------------------------------ six curvatures

def test_trace_and_norm_examples():
    p = CaseVIParams(8, 4, 2, 1, 5)
    lA, lB, lC, H = variables(TABLE_VI, "lA", "lB", "lC", "H")
    assert trace_constraint_vi(p) == 4 * lA + 4 * lB + 2 * lC - 24 * H
    assert norm_constraint_vi(p) == 8 * lA ** 2 + 8 * lB ** 2 + 4 * lC ** 2 + 64 * H ** 2 - 28
    solved = (12 * H - 2 * lB - lC) * Fraction(1, 2)
    assert substitute(trace_constraint_vi(p), "lA", solved).is_zero()
    assert all(norm_constraint_vi(p).degree_in(v) == 2 for v in ("lA", "lB", "lC"))


@pytest.mark.parametrize("nrs", [(8, 4, 2), (9, 4, 3)])
def test_lemma51_identities(nrs):
    out = lemma51_identities(CaseVIParams(*nrs))
    assert len(out["identities"]) == 8
    assert out["all_hold"]


def test_solve_check_flags_P2_multiplicity():
    assert lemma51_identities(CaseVIParams(8, 4, 2))["notes"] == []
    notes = lemma51_identities(CaseVIParams(9, 4, 3))["notes"]
    assert any("r-2" in n for n in notes)


@pytest.mark.parametrize("nrs,k", [((8, 4, 2), 4), ((9, 4, 3), 6)])
def test_derived_f6_is_symmetric_form(nrs, k):
    p = CaseVIParams(*nrs)
    d = derive_f_case6(p)
    assert d.poly.vars == TABLE_VI
    assert d.constants["f_derived/f_symmetric"] == str(k)
    assert d.constants["f_derived/f_printed"] is None
    assert proportionality(d.poly, build_f_case6(p)) is None
    assert d.poly == symmetric_f_case6(p).scale(k)


def test_case6_determinant_alternates():
    m = case6_matrix(CaseVIParams(8, 4, 2))
    swapped = PolyMatrix([[row[1], row[0], row[2]] for row in m.rows], m.vars)
    assert det_bareiss(swapped) == -det_bareiss(m)


def test_case6_determinant_vanishes_without_wC():
    p = CaseVIParams(8, 4, 2)
    d = derive_f_case6(p)
    from resultant_forge.hypersurface import _subst_fracs, check_solves
    fr, _, _ = check_solves(p)
    q = _subst_fracs(d.determinant, fr).num
    assert q.specialize({"wC1": 0, "wC2": 0}).is_zero()


def test_eliminate_lambdaA():
    p = CaseVIParams(8, 4, 2, 1, 5)
    assert eliminate_lambdaA(trace_constraint_vi(p), p).is_zero()
    T3 = VarTable(["lB", "lC", "H"])
    g1 = eliminate_lambdaA(norm_constraint_vi(p), p).reindex(T3)
    assert proportionality(g1, printed_g1(p, T3)) == 8


@given(small_rationals, small_rationals, small_rationals)
@settings(max_examples=30)
def test_eliminate_lambdaA_evaluation_oracle(b, c, h):
    p = CaseVIParams(9, 4, 3, 1, 5)
    f = norm_constraint_vi(p)
    lA = (3 * 9 * h - 2 * 3 * b - 2 * p.c * c) / Fraction(2 * 2)
    direct = evaluate(f, {"lA": lA, "lB": b, "lC": c, "H": h})
    assert evaluate(eliminate_lambdaA(f, p), {"lB": b, "lC": c, "H": h}) == direct * (2 * 2) ** 2


# ------------------------------------------------------------------ six-curvature chain

@pytest.fixture(scope="module")
def chain_943():
    return theorem2_pipeline(CaseVIParams(9, 4, 3, 1, 5))


@pytest.fixture(scope="module")
def chain_842():
    return theorem2_pipeline(CaseVIParams(8, 4, 2, 1, 5))


def test_theorem2_943_passes(chain_943):
    assert chain_943.verdict == "PASS"
    assert chain_943.final.variables() == ("H",)
    assert chain_943.extra["final_degree_H"] == 132


def test_theorem2_stage_degrees_842(chain_842):
    degs = {s.name: s.poly.degree_map() for s in chain_842.stages}
    assert degs["f"] == {"lA": 4, "lB": 4, "lC": 4, "H": 4}
    assert degs["f1"] == {"lB": 4, "lC": 5, "H": 6}
    assert degs["g1"] == {"lB": 2, "lC": 2, "H": 2}
    assert degs["f2"] == {"lC": 12, "H": 12}
    assert chain_842.extra["g2_degree_in_lC"] == 11


def test_theorem2_842_square_obstruction(chain_842):
    # r-2 = s makes f symmetric in (lA, lB); the two lB-roots of g1 then give
    # the same factor, so f2 is a square and Res(f2, df2) vanishes identically
    f2 = chain_842.stage("f2").poly
    _, lc = f2.leading_term()
    h = square_root(f2.scale(lc))
    assert h is not None
    assert chain_842.stage("final").poly.is_zero()
    assert chain_842.verdict == "FAIL"
    info = chain_842.extra["repeated_factor"]
    assert info["square"] and info["root_final_nonzero"]
    assert info["root_final_degree_H"] == 30


def test_theorem2_symmetry_when_multiplicities_match():
    p = CaseVIParams(8, 4, 2)
    f = derive_f_case6(p).poly
    vt = VarTable(["lB", "lA", "lC", "H"])
    swapped = Poly(TABLE_VI, {e: c for e, c in f.reindex(vt).items()})
    assert swapped == f


def _chain_at(p: CaseVIParams, rep, h):
    T2 = VarTable(["lB", "lC"])
    f1 = rep.stage("f1").poly.specialize({"H": h}).reindex(T2)
    g1 = rep.stage("g1").poly.specialize({"H": h}).reindex(T2)
    if any(univariate_view(q, "lB")[-1].is_zero() for q in (f1, g1)):
        return None
    f2 = resultant(f1, g1, "lB")
    T1 = VarTable(["lC"])
    f2 = f2.reindex(T1)
    if f2.degree_in("lC") != rep.stage("f2").poly.degree_in("lC"):
        return None
    return resultant(f2, partial_derivative(f2, "lC"), "lC").constant_value()


def test_theorem2_specialisation_consistency(chain_943):
    p = CaseVIParams(9, 4, 3, 1, 5)
    checked = 0
    for h in [Fraction(1), Fraction(2, 3), Fraction(-5, 4)]:
        v = _chain_at(p, chain_943, h)
        if v is None:
            continue
        checked += 1
        assert evaluate(chain_943.final, {"H": h}) == v
    assert checked >= 2
