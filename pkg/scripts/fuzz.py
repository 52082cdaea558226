"""Cross-check the tableau against the brute-force oracle over seeded random formulas."""
import argparse
import time

from lgdda.oracle import FormulaConfig, OracleBounds, cross_check, random_conjunction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=20000)
    ap.add_argument("--conjunctions", action="store_true",
                    help="use conjunctions of random formulas, which are unsatisfiable more often")
    ap.add_argument("--artifacts", default="fuzz_artifacts")
    args = ap.parse_args()

    cfg = FormulaConfig()
    formulas = None
    if args.conjunctions:
        formulas = [random_conjunction(cfg, args.seed * 1_000_003 + k) for k in range(args.n)]
    start = time.time()
    report = cross_check(args.n, cfg, OracleBounds(budget=args.budget), seed=args.seed,
                         formulas=formulas, artifacts=args.artifacts)
    print(report.to_json())
    print(f"{time.time() - start:.1f}s")


if __name__ == "__main__":
    main()
