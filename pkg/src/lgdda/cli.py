"""Command-line front end.

Exit codes: 0 for true/sat/valid/ok, 1 for false/unsat/invalid/violations,
2 for usage, input and resource errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from typing import Optional, Sequence

from . import axioms as ax
from .formula import FormulaError, ParseError, agents_of, atoms_of, group_of, parse, render
from .grades import format_grade, grade_to_json, min_star
from .kripke import ModelError, eval_world, validate_ngdm, validate_qngdm, with_explicit_rho
from .oracle import (
    CrossCheckFailure,
    FormulaConfig,
    OracleBounds,
    OracleBudgetExceeded,
    cross_check,
)
from .semantics import check, disagreement_degree
from .serialize import (
    FormatError,
    declared_atoms,
    dox_model_from_json,
    dox_model_to_json,
    dump_json,
    load_json,
    magbm_atoms,
    magbm_from_json,
    magbm_to_json,
    verdict_to_json,
)
from .tableau import ResourceLimitError, TableauConfig, decide_formula, is_valid
from .transforms import filtrate, transform

KINDS = ("qngdm", "ngdm", "magbm")


class UsageError(Exception):
    pass


def _emit(args, human: str, data) -> None:
    print(json.dumps(data, indent=2) if args.json else human)


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        caret = " " * exc.pos + "^"
        raise UsageError(f"{exc}\n  {exc.text}\n  {caret}") from None


def _load_model(path: str):
    """A Kripke model when the file lists worlds, else a belief-base model."""
    data = load_json(path)
    if isinstance(data, dict) and "worlds" in data:
        return data, dox_model_from_json(data)
    return data, magbm_from_json(data)


def _check_vocabulary(data, model, phi) -> None:
    unknown = agents_of(phi) - set(model.agents)
    if unknown:
        raise UsageError(f"formula mentions undeclared agents {sorted(unknown)}")
    declared = declared_atoms(data)
    if declared is None:
        if hasattr(model, "worlds"):
            declared = model.atoms() | _base_atoms(model)
        else:
            declared = magbm_atoms(model)
    unknown = atoms_of(phi) - declared
    if unknown:
        raise UsageError(f"formula mentions undeclared atoms {sorted(unknown)} "
                         "(list them under \"atoms\" to make them false everywhere)")


def _base_atoms(model) -> set:
    out = set()
    for base in model.dox.values():
        for f in base:
            out |= atoms_of(f)
    return out


# -- subcommands ---------------------------------------------------------------

def cmd_parse(args) -> int:
    phi = _formula(args.formula)
    _emit(args, render(phi), {"formula": render(phi)})
    return 0


def cmd_mc(args) -> int:
    data, model = _load_model(args.model)
    phi = _formula(args.formula)
    _check_vocabulary(data, model, phi)
    if hasattr(model, "worlds"):
        world = args.world or model.designated
        if world not in model.worlds:
            raise UsageError(f"unknown world {world!r}")
        value = eval_world(model, world, phi)
    else:
        if args.world:
            raise UsageError("--world applies to Kripke models only")
        value = check(model, phi)
    _emit(args, "true" if value else "false", {"result": value})
    return 0 if value else 1


def _tableau_config(args) -> TableauConfig:
    return TableauConfig(max_depth=args.max_depth, order_seed=args.seed_order)


def _decide(args, mode: str) -> int:
    phi = _formula(args.formula)
    verdict = decide_formula(phi, mode, extract=bool(args.extract_model) or args.json,
                             config=_tableau_config(args))
    if args.extract_model:
        if verdict.model is None:
            print(f"no model to write: {verdict.result}", file=sys.stderr)
        else:
            dump_json(dox_model_to_json(verdict.model), args.extract_model)
    if args.json:
        print(json.dumps(verdict_to_json(verdict), indent=2))
    else:
        print(verdict.result)
        if args.stats:
            print(" ".join(f"{k}={v}" for k, v in verdict.stats.as_dict().items()))
    return 0 if verdict.positive else 1


def cmd_sat(args) -> int:
    return _decide(args, "sat")


def cmd_valid(args) -> int:
    return _decide(args, "valid")


def cmd_disagree(args) -> int:
    data, model = _load_model(args.model)
    try:
        group = group_of(args.group)
    except FormulaError as exc:
        raise UsageError(str(exc)) from None
    unknown = group - set(model.agents)
    if unknown:
        raise UsageError(f"undeclared agents {sorted(unknown)}")
    if hasattr(model, "worlds"):
        degree = min_star(model.distance(group, model.designated, u) for u in model.worlds)
    else:
        degree = disagreement_degree(model, group)
    _emit(args, format_grade(degree), {"degree": grade_to_json(degree)})
    return 0


def _read_kind(path: str, kind: str):
    data = load_json(path)
    return magbm_from_json(data) if kind == "magbm" else dox_model_from_json(data)


def _write_kind(model, path: str, kind: str) -> None:
    dump_json(magbm_to_json(model) if kind == "magbm" else dox_model_to_json(model), path)


def _truth(model, phi) -> bool:
    if hasattr(model, "worlds"):
        return eval_world(model, model.designated, phi)
    return check(model, phi)


def cmd_transform(args) -> int:
    model = _read_kind(args.inp, args.source)
    phi = _formula(args.formula) if args.formula else None
    out = transform(model, args.source, args.target, phi)
    _write_kind(out, args.out, args.target)
    size = len(out.worlds) if hasattr(out, "worlds") else len(out.context)
    info = {"kind": args.target, "size": size}
    human = f"wrote {args.target} with {size} {'worlds' if hasattr(out, 'worlds') else 'context states'}"
    if phi is not None:
        before, after = _truth(model, phi), _truth(out, phi)
        info["formula"] = {"before": before, "after": after}
        human += f"; formula {str(before).lower()} -> {str(after).lower()}"
    _emit(args, human, info)
    return 0


def cmd_filtrate(args) -> int:
    model = dox_model_from_json(load_json(args.inp))
    phi = _formula(args.formula)
    out = filtrate(model, phi)
    dump_json(dox_model_to_json(out), args.out)
    _emit(args, f"wrote {len(out.worlds)} worlds (from {len(model.worlds)})",
          {"worlds": len(out.worlds), "source_worlds": len(model.worlds)})
    return 0


def cmd_validate(args) -> int:
    model = dox_model_from_json(load_json(args.inp))
    explicit = with_explicit_rho(model)
    report = validate_ngdm(explicit) if args.kind == "ngdm" else validate_qngdm(explicit)
    listing = [{"condition": v.condition, "group": sorted(v.group), "from": v.pair[0], "to": v.pair[1],
                "detail": v.detail} for v in report.violations]
    _emit(args, "ok" if report.ok else str(report), {"ok": report.ok, "violations": listing})
    return 0 if report.ok else 1


def _parse_bounds(text: Optional[str], cls, allowed: Optional[set] = None):
    """``key=value,key=value`` into a dataclass with integer fields."""
    if not text:
        return cls()
    names = allowed or {f.name for f in fields(cls)}
    values = {}
    for item in text.split(","):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise UsageError(f"bad bound {item!r}; known keys: {', '.join(sorted(names))}")
        try:
            values[key] = int(raw)
        except ValueError:
            raise UsageError(f"bound {key} needs an integer, got {raw!r}") from None
    return cls(**values)


def cmd_axioms(args) -> int:
    bounds = _parse_bounds(args.bounds, ax.Bounds)
    labelled = ax.labelled_corpus(bounds)
    formulas = [f for _, f in labelled]
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(ax.write_lines(formulas))
    failed = [(name, f) for name, f in labelled if not is_valid(f)]
    lifted_failed = []
    if args.nec:
        bad = {f for _, f in failed}
        verified = [f for f in formulas if f not in bad]
        lifted_failed = [f for f in ax.nec_lifts(verified, bounds) if not is_valid(f)]
    counts: dict = {}
    for name, _ in labelled:
        counts[name] = counts.get(name, 0) + 1
    data = {"instances": len(labelled), "by_schema": counts,
            "invalid": [f"{name}: {render(f)}" for name, f in failed],
            "nec_invalid": [render(f) for f in lifted_failed]}
    human = f"{len(labelled)} instances, {len(failed)} not valid"
    if args.nec:
        human += f"; {len(lifted_failed)} necessitation lifts not valid"
    for line in data["invalid"] + data["nec_invalid"]:
        human += "\n  " + line
    _emit(args, human, data)
    return 0 if not failed and not lifted_failed else 1


def cmd_fuzz(args) -> int:
    cfg = FormulaConfig(max_depth=args.depth, max_grade=args.max_grade,
                        agents=tuple(str(i) for i in range(1, args.agents + 1)),
                        atoms=tuple("pqrstuv"[: args.atoms]))
    oracle = _parse_bounds(args.bounds, OracleBounds, {"grade_cap", "budget"})
    try:
        report = cross_check(args.n, cfg, oracle, seed=args.seed, artifacts=args.artifacts)
    except CrossCheckFailure as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return 1
    print(report.to_json())
    return 0


# -- wiring --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lgdda", description="Graded distributed belief: "
                                "model checking, satisfiability and model transformations.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    sp = add("parse", cmd_parse, "print the canonical form of a formula")
    sp.add_argument("formula")

    sp = add("mc", cmd_mc, "model-check a formula at the designated point")
    sp.add_argument("--model", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--world", help="evaluate at this world instead (Kripke models)")

    for name, func in (("sat", cmd_sat), ("valid", cmd_valid)):
        sp = add(name, func, f"decide {'satisfiability' if name == 'sat' else 'validity'}")
        sp.add_argument("formula")
        sp.add_argument("--extract-model", metavar="PATH",
                        help="write the model (for valid: the countermodel) as JSON")
        sp.add_argument("--stats", action="store_true")
        sp.add_argument("--max-depth", type=int)
        sp.add_argument("--seed-order", type=int, help="shuffle the order of negated boxes")

    sp = add("disagree", cmd_disagree, "print the disagreement degree of a group")
    sp.add_argument("--model", required=True)
    sp.add_argument("--group", required=True, help='agents, e.g. "Ann Bob"')

    sp = add("transform", cmd_transform, "convert between model kinds")
    sp.add_argument("--from", dest="source", choices=KINDS, required=True)
    sp.add_argument("--to", dest="target", choices=KINDS, required=True)
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--formula", help="report the formula's truth before and after")

    sp = add("filtrate", cmd_filtrate, "quotient a Kripke model by a formula's subformulas")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--out", required=True)

    sp = add("validate", cmd_validate, "check the notional or quasi-notional conditions")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--as", dest="kind", choices=("ngdm", "qngdm"), required=True)

    sp = add("axioms", cmd_axioms, "check every axiom instance within bounds")
    sp.add_argument("--bounds", help="e.g. agents=2,max_grade=2,atoms=1,max_omega=2,max_psi=2")
    sp.add_argument("--emit", metavar="PATH", help="write the instances, one per line")
    sp.add_argument("--nec", action="store_true", help="also check necessitation lifts")

    sp = add("fuzz", cmd_fuzz, "cross-check the tableau against brute-force search")
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--bounds", help="e.g. grade_cap=2,budget=20000")
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--agents", type=int, default=2)
    sp.add_argument("--atoms", type=int, default=2)
    sp.add_argument("--max-grade", type=int, default=2)
    sp.add_argument("--artifacts", metavar="DIR", help="where to write failing cases")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, FormulaError, ModelError, ResourceLimitError,
            OracleBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
