"""Run the six-curvature chain for the given parameter sets and dump the reports."""
import argparse
import json
from pathlib import Path

from resultant_forge.hypersurface import CaseVIParams, theorem2_pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sets", nargs="*", default=["8,4,2", "9,4,3"], help="n,r,s triples")
    ap.add_argument("--mu", default="1")
    ap.add_argument("--k1", default="5")
    ap.add_argument("--out", type=Path, help="directory for JSON reports")
    args = ap.parse_args()
    for spec in args.sets:
        n, r, s = (int(t) for t in spec.split(","))
        rep = theorem2_pipeline(CaseVIParams(n, r, s, args.mu, args.k1))
        print(f"(n,r,s)=({n},{r},{s}) verdict={rep.verdict}")
        for st in rep.stages:
            print(f"   {st.name:<12} {st.poly.degree_map()}  {st.millis:.0f} ms")
        for d in rep.printed_vs_derived_diffs:
            print(f"   note: {d}")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"theorem2_{n}_{r}_{s}.json").write_text(rep.to_json(timing=True))
    if args.out:
        print(json.dumps(sorted(p.name for p in args.out.iterdir())))


if __name__ == "__main__":
    main()
