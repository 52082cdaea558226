"""Tableau depth and peak live-branch size against formula size, by modal depth."""
import argparse
import csv
import math
import sys

from lgdda.formula import modal_depth, node_count
from lgdda.oracle import FormulaConfig, random_conjunction, random_formula
from lgdda.tableau import decide_formula


def fit_exponent(points) -> float:
    xs = [math.log(x) for x, _ in points]
    ys = [math.log(y) for _, y in points]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((a - mx) * (b - my) for a, b in zip(xs, ys)) / sum((a - mx) ** 2 for a in xs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depths", type=int, default=5)
    ap.add_argument("--per-depth", type=int, default=100)
    ap.add_argument("--csv", help="write one row per formula here")
    args = ap.parse_args()

    rows = []
    for depth in range(1, args.depths + 1):
        cfg = FormulaConfig(max_depth=depth)
        formulas = [random_formula(cfg, s) for s in range(args.per_depth)]
        formulas += [random_conjunction(cfg, s, 6) for s in range(args.per_depth // 2)]
        for phi in formulas:
            stats = decide_formula(phi).stats
            rows.append((depth, node_count(phi), modal_depth(phi), stats.max_depth, stats.peak_live))
        mine = [r for r in rows if r[0] == depth]
        print(f"depth {depth}: {len(mine)} formulas, max size {max(r[1] for r in mine)}, "
              f"max peak {max(r[4] for r in mine)}, max recursion {max(r[3] for r in mine)}")
    print(f"fitted exponent of peak against size: {fit_exponent([(r[1], r[4]) for r in rows]):.2f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["depth_cfg", "size", "modal_depth", "recursion", "peak_live"])
            out.writerows(rows)
        print(f"wrote {args.csv}", file=sys.stderr)


if __name__ == "__main__":
    main()
