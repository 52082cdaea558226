"""Decide the committee claims at a chosen grading and print each verdict."""
import argparse

from lgdda.committee import AGENTS, claims, committee_model
from lgdda.formula import render
from lgdda.semantics import disagreement_degree
from lgdda.tableau import decide_formula


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("grades", nargs="*", type=int, default=[1, 1, 1, 1, 1],
                    help="k0 k1 k2 k3 k4 (shared rule, Ann, Bob, Cath, John)")
    ap.add_argument("--show", action="store_true", help="print the formulas too")
    args = ap.parse_args()
    if len(args.grades) != 5:
        ap.error("need exactly five grades")

    for name, (phi, expected) in claims(*args.grades).items():
        verdict = decide_formula(phi, "valid", extract=True)
        mark = "ok" if verdict.positive == expected else "MISMATCH"
        extra = f" (countermodel with {len(verdict.model.worlds)} worlds)" if verdict.model else ""
        print(f"{name:24s} {verdict.result:8s} {mark}{extra}")
        if args.show:
            print(f"  {render(phi)}")
    degree = disagreement_degree(committee_model(*args.grades), AGENTS)
    print(f"disagreement degree of the whole committee: {degree}")


if __name__ == "__main__":
    main()
