"""Sweep small (d, f) and tabulate conductor radicality, HFD verdicts and squeeze status.

usage: python3 scripts/corpus_sweep.py [--bound N] [--dmax D] [--fmax F] [--out PATH]
"""
import argparse
import csv
import sys

from hfdorders.core import is_squarefree, make_order
from hfdorders.overrings import conductor, squeeze_verify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=2000)
    ap.add_argument("--dmax", type=int, default=30)
    ap.add_argument("--fmax", type=int, default=6)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["d", "f", "radical_conductor", "order_verdict", "squeeze", "intermediate_verdicts"])
    nonvacuous = []
    for d in range(-1, -args.dmax - 1, -1):
        if not is_squarefree(-d):
            continue
        for f in range(2, args.fmax + 1):
            R = make_order(d, f)
            rep = squeeze_verify(R, args.bound)
            verdicts = rep.stats.get("intermediate_verdicts", {})
            w.writerow([d, f, conductor(R, R.maximal).radical, rep.stats["order_verdict"], rep.status.value,
                        ";".join(f"{k}:{v}" for k, v in sorted(verdicts.items()))])
            if rep.status.value != "VACUOUS":
                nonvacuous.append((d, f, rep.status.value))
    print(f"# non-vacuous squeeze runs: {nonvacuous}", file=sys.stderr)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
