"""Random sweep of frame configurations through the vanishing report."""
import argparse
import random
from collections import Counter

from resultant_forge.checks import random_frame_config
from resultant_forge.codazzi import vanishing_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=9)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = Counter()
    for i in range(args.count):
        repeated = i % 3 == 2
        cfg = random_frame_config(rng, rng.randint(args.n_min, args.n_max), repeated)
        rep = vanishing_report(cfg)
        tally[(cfg.n, repeated, rep.verdict)] += 1
        if rep.verdict != "PASS":
            print("FAIL", cfg.to_dict(), rep.to_dict()["missing"], rep.to_dict()["exceptions_forced"])
    for (n, rep_, v), c in sorted(tally.items()):
        print(f"n={n} repeated={rep_!s:<5} {v}: {c}")


if __name__ == "__main__":
    main()
