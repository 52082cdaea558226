"""Brute-force cross-validation of the tableau.

``bounded_search`` enumerates small notional models (distances derived from
beliefs) and model-checks them directly; it shares no code with the
tableau.  ``cross_check`` runs the tableau on seeded random formulas and
confronts every verdict with an independent check.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from itertools import combinations, combinations_with_replacement, product
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from .formula import (
    And,
    Atom,
    Box,
    Formula,
    Not,
    Top,
    Tri,
    agents_of,
    atoms_of,
    is_inner,
    iter_nodes,
    modal_depth,
    render,
    sort_key,
)
from .grades import OMEGA, nonempty_subgroups, sort_agents
from .kripke import DoxModel, eval_world, validate_qngdm
from .tableau import ResourceLimitError, TableauConfig, decide_formula


class OracleBudgetExceeded(RuntimeError):
    pass


class CrossCheckFailure(AssertionError):
    pass


# -- random formulas ---------------------------------------------------------

@dataclass(frozen=True)
class FormulaConfig:
    agents: tuple = ("1", "2")
    atoms: tuple = ("p", "q")
    max_grade: int = 2
    max_depth: int = 3
    # relative weights of atom, negation, conjunction, triangle, box
    weights: tuple = (2, 3, 3, 2, 2)

    def node_bound(self) -> int:
        return 2 ** (self.max_depth + 1) - 1


_KINDS = ("atom", "not", "and", "tri", "box")


def random_formula(cfg: FormulaConfig = FormulaConfig(), seed: int = 0) -> Formula:
    rng = random.Random(seed)
    groups = nonempty_subgroups(cfg.agents)
    agents = sort_agents(cfg.agents)

    def gen(depth: int, inner: bool) -> Formula:
        if depth == 0:
            return Atom(rng.choice(cfg.atoms))
        kinds = _KINDS[:4] if inner else _KINDS
        kind = rng.choices(kinds, weights=cfg.weights[: len(kinds)])[0]
        if kind == "atom":
            return Atom(rng.choice(cfg.atoms))
        if kind == "not":
            return Not(gen(depth - 1, inner))
        if kind == "and":
            return And(gen(depth - 1, inner), gen(depth - 1, inner))
        if kind == "tri":
            return Tri(rng.choice(agents), rng.randint(1, cfg.max_grade), gen(depth - 1, True))
        return Box(rng.choice(groups), rng.randint(0, cfg.max_grade), gen(depth - 1, False))

    return gen(cfg.max_depth, False)


def random_conjunction(cfg: FormulaConfig = FormulaConfig(), seed: int = 0, width: int = 3) -> Formula:
    """Conjunction of ``width`` random formulas; far more often unsatisfiable than one alone."""
    parts = [random_formula(cfg, seed * 7919 + n) for n in range(width)]
    out = parts[0]
    for f in parts[1:]:
        out = And(out, f)
    return out


# -- bounded model search -----------------------------------------------------

def candidate_beliefs(phi: Formula, agent: str, pool: str = "inner") -> list:
    """Formulas ``agent`` may believe in searched models.

    ``inner``: every box-free subformula of ``phi``.  ``bodies``: only what
    ``agent`` is said to believe somewhere in ``phi``.
    """
    if pool == "inner":
        found = {g for g in iter_nodes(phi) if is_inner(g) and not isinstance(g, Top)}
    elif pool == "bodies":
        found = {g.body for g in iter_nodes(phi) if isinstance(g, Tri) and g.agent == agent}
    else:
        raise ValueError(f"unknown pool {pool!r}")
    return sorted(found, key=sort_key)


def _grade_values(cap: int) -> list:
    return [*range(1, cap + 1), OMEGA]


def _agent_bases(cands: Sequence, cap: int) -> Iterator[dict]:
    values = _grade_values(cap)
    for n in range(len(cands) + 1):
        for support in combinations(cands, n):
            for grades in product(values, repeat=n):
                yield dict(zip(support, grades))


def _count_agent_bases(m: int, cap: int) -> int:
    return sum(math.comb(m, n) * len(_grade_values(cap)) ** n for n in range(m + 1))


def _local_states(atoms: Sequence[str], agents: Sequence[str], cands: dict, cap: int) -> Iterator:
    valuations = [frozenset(c) for n in range(len(atoms) + 1) for c in combinations(atoms, n)]
    per_agent = [list(_agent_bases(cands[a], cap)) for a in agents]
    for val in valuations:
        for bases in product(*per_agent):
            yield val, bases


def search_space_size(phi: Formula, max_worlds: int, grade_cap: int, pool: str = "inner",
                      agents: Iterable[str] = ()) -> int:
    atoms = atoms_of(phi)
    all_agents = sort_agents(set(agents) | agents_of(phi))
    local = 2 ** len(atoms)
    for a in all_agents:
        local *= _count_agent_bases(len(candidate_beliefs(phi, a, pool)), grade_cap)
    return sum(local * math.comb(local + n - 2, n - 1) for n in range(1, max_worlds + 1))


def bounded_search(
    phi: Formula,
    max_worlds: int = 1,
    grade_cap: int = 2,
    budget: Optional[int] = None,
    pool: str = "inner",
    agents: Iterable[str] = (),
) -> Optional[DoxModel]:
    """First notional model with at most ``max_worlds`` worlds satisfying ``phi``, or None.

    Worlds beyond the designated one are interchangeable, so they are
    enumerated as multisets.  Raises ``OracleBudgetExceeded`` up front when
    the space is larger than ``budget`` models.
    """
    all_agents = sort_agents(set(agents) | agents_of(phi))
    atoms = sorted(atoms_of(phi))
    if budget is not None:
        total = search_space_size(phi, max_worlds, grade_cap, pool, all_agents)
        if total > budget:
            raise OracleBudgetExceeded(f"{total} candidate models exceed the budget of {budget}")
    cands = {a: candidate_beliefs(phi, a, pool) for a in all_agents}
    states = list(_local_states(atoms, all_agents, cands, grade_cap))
    for n in range(1, max_worlds + 1):
        for first in range(len(states)):
            for rest in combinations_with_replacement(range(len(states)), n - 1):
                model = _build(all_agents, [states[first], *(states[r] for r in rest)])
                if eval_world(model, model.designated, phi):
                    return model
    return None


def _build(agents: Sequence[str], chosen: Sequence) -> DoxModel:
    worlds = tuple(f"v{n}" for n in range(len(chosen)))
    dox = {}
    valuation: dict = {}
    for w, (val, bases) in zip(worlds, chosen):
        for p in val:
            valuation.setdefault(p, set()).add(w)
        for a, base in zip(agents, bases):
            if base:
                dox[(a, w)] = base
    return DoxModel(tuple(agents), worlds, worlds[0], dox, valuation, None)


# -- cross-checking ----------------------------------------------------------

@dataclass(frozen=True)
class OracleBounds:
    # tried in order; a tier is skipped when its space exceeds the budget
    tiers: tuple = (("inner", 1), ("bodies", 1), ("bodies", 2), ("bodies", 3), ("inner", 2))
    grade_cap: int = 2
    budget: int = 20000


@dataclass
class CrossCheckReport:
    n: int = 0
    sat: int = 0
    unsat: int = 0
    models_verified: int = 0
    oracle_tiers_run: int = 0
    oracle_tiers_skipped: int = 0
    unsat_without_oracle: int = 0
    max_depth_excess: int = 0
    failures: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def cross_check(
    n: int = 100,
    cfg: FormulaConfig = FormulaConfig(),
    bounds: OracleBounds = OracleBounds(),
    seed: int = 0,
    formulas: Optional[Iterable[Formula]] = None,
    artifacts: Optional[Path] = None,
    on_result=None,
    negate: bool = True,
) -> CrossCheckReport:
    """Decide ``n`` seeded random formulas (or ``formulas``) and confront each verdict.

    With ``negate`` each formula is decided both as given and negated.  SAT:
    the extracted model must satisfy the formula and validate.  UNSAT: no
    oracle tier within budget may find a model.  Any contradiction raises
    ``CrossCheckFailure`` after writing the offending case to ``artifacts``.
    """
    if formulas is None:
        formulas = (random_formula(cfg, seed * 1_000_003 + k) for k in range(n))
    report = CrossCheckReport()
    for base in formulas:
        for phi in ((base, Not(base)) if negate else (base,)):
            _check_one(phi, bounds, report, artifacts, on_result)
    return report


def _check_one(phi, bounds, report, artifacts, on_result) -> None:
    report.n += 1
    try:
        verdict = decide_formula(phi, "sat", extract=True, config=TableauConfig())
    except AssertionError as exc:  # extracted model failed verification
        _fail(report, phi, f"tableau self-check failed: {exc}", artifacts)
    if verdict.stats.max_depth > _depth_bound(phi):
        report.max_depth_excess += 1
    if verdict.result == "sat":
        report.sat += 1
        model = verdict.model
        if not eval_world(model, model.designated, phi) or not validate_qngdm(model).ok:
            _fail(report, phi, "extracted model does not check", artifacts, model)
        report.models_verified += 1
    else:
        report.unsat += 1
        ran = 0
        for pool, worlds in bounds.tiers:
            try:
                found = bounded_search(phi, worlds, bounds.grade_cap, bounds.budget, pool)
            except OracleBudgetExceeded:
                report.oracle_tiers_skipped += 1
                continue
            ran += 1
            report.oracle_tiers_run += 1
            if found is not None:
                _fail(report, phi, f"tableau says unsat but oracle ({pool}, {worlds} worlds) "
                      "found a model", artifacts, found)
        if not ran:
            report.unsat_without_oracle += 1
    if on_result is not None:
        on_result(phi, verdict)


def _depth_bound(phi: Formula) -> int:
    return modal_depth(phi) + 1


def _fail(report, phi, message, artifacts, model=None):
    report.failures.append({"formula": render(phi), "reason": message})
    if artifacts is not None:
        from .serialize import dox_model_to_json

        artifacts = Path(artifacts)
        artifacts.mkdir(parents=True, exist_ok=True)
        case = {"formula": render(phi), "reason": message,
                "model": dox_model_to_json(model) if model is not None else None}
        (artifacts / f"failure_{len(report.failures)}.json").write_text(json.dumps(case, indent=2))
    raise CrossCheckFailure(f"{message}: {render(phi)}")


__all__ = [
    "FormulaConfig", "random_formula", "random_conjunction", "bounded_search", "search_space_size",
    "OracleBounds", "cross_check", "CrossCheckReport", "CrossCheckFailure",
    "OracleBudgetExceeded", "candidate_beliefs", "ResourceLimitError",
]
