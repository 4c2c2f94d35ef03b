import random

from resultant_forge.checks import coprime_pair, planted_pair, random_frame_config, selfcheck, selfcheck_json
from resultant_forge.polycore import VarTable, univariate_gcd

X = VarTable(["x"])


def test_generators_are_seeded():
    assert planted_pair(random.Random(1), X, "x") == planted_pair(random.Random(1), X, "x")


def test_planted_pairs_share_a_factor():
    rng = random.Random(0)
    for _ in range(50):
        f, g = planted_pair(rng, X, "x")
        assert univariate_gcd(f, g, "x").degree_in("x") >= 1
        assert f.degree_in("x") <= 4 and g.degree_in("x") <= 4


def test_coprime_pairs():
    rng = random.Random(0)
    for _ in range(50):
        f, g = coprime_pair(rng, X, "x")
        assert univariate_gcd(f, g, "x").degree_in("x") == 0


def test_frame_configs():
    rng = random.Random(4)
    cfg = random_frame_config(rng, 7, repeated=True)
    assert len(set(cfg.lambda_values)) == len(cfg.lambda_values) - 1
    cfg = random_frame_config(rng, 7)
    assert len(set(cfg.lambda_values)) == len(cfg.lambda_values)


def test_selfcheck_passes_and_is_reproducible():
    a = selfcheck_json(7, 0.3)
    assert a == selfcheck_json(7, 0.3)
    assert selfcheck(7, 0.3)["verdict"] == "PASS"
