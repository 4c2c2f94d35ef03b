"""Run the five-curvature elimination over a grid of (n, r) and print one line each."""
import argparse
import time

from resultant_forge.hypersurface import CaseVParams, ParameterError, theorem1_pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--mu", default="1")
    args = ap.parse_args()
    for n in range(5, args.n_max + 1):
        for r in range(3, n):
            try:
                params = CaseVParams(n, r, args.mu)
            except ParameterError:
                continue
            t0 = time.perf_counter()
            rep = theorem1_pipeline(params)
            print(f"n={n:<3} r={r:<3} {rep.verdict}  deg_H={rep.extra['final_degree_H']:<3} "
                  f"g={rep.extra['g_comparison']:<12} {time.perf_counter() - t0:6.2f}s")


if __name__ == "__main__":
    main()
