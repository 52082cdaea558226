"""Kripke-style graded doxastic models (notional and quasi-notional).

One ``DoxModel`` type serves both kinds.  With ``rho=None`` the distance
between worlds is derived from the doxastic function (the notional reading);
with an explicit ``rho`` table, missing entries mean omega.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .formula import And, Atom, Box, Formula, FormulaError, Not, Top, Tri
from .grades import (
    OMEGA,
    Grade,
    grade_sum,
    iter_partitions,
    nonempty_subgroups,
    partition_sum,
    proper_subgroups,
    sort_agents,
)
from .semantics import EMPTY_BASE, BeliefBase, State

MAX_AGENTS = 8


class ModelError(ValueError):
    pass


@dataclass
class DoxModel:
    agents: tuple
    worlds: tuple
    designated: str
    dox: dict = field(default_factory=dict)  # (agent, world) -> BeliefBase
    valuation: dict = field(default_factory=dict)  # atom -> frozenset of worlds
    rho: Optional[dict] = None  # (group, world, world) -> finite grade
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.agents = tuple(sort_agents(self.agents))
        self.worlds = tuple(self.worlds)
        if len(self.agents) > MAX_AGENTS:
            raise ModelError(f"at most {MAX_AGENTS} agents are supported, got {len(self.agents)}")
        if self.designated not in self.worlds:
            raise ModelError(f"designated world {self.designated!r} is not a world")
        self.dox = {
            key: b if isinstance(b, BeliefBase) else BeliefBase(b)
            for key, b in self.dox.items()
            if len(b)
        }
        self.valuation = {p: frozenset(ws) for p, ws in self.valuation.items()}
        if self.rho is not None:
            self.rho = {(frozenset(j), w, u): d for (j, w, u), d in self.rho.items() if d != OMEGA}

    @property
    def groups(self) -> list[frozenset]:
        return nonempty_subgroups(self.agents)

    def base(self, agent: str, world: str) -> BeliefBase:
        return self.dox.get((agent, world), EMPTY_BASE)

    def true_atoms(self, world: str) -> frozenset:
        return frozenset(p for p, ws in self.valuation.items() if world in ws)

    def state_at(self, world: str) -> State:
        return State({a: self.base(a, world) for a in self.agents}, self.true_atoms(world))

    def distance(self, group: Iterable[str], w: str, u: str) -> Grade:
        group = frozenset(group)
        if self.rho is None:
            return derived_rho(self, group, w, u)
        return self.rho.get((group, w, u), OMEGA)

    def atoms(self) -> set[str]:
        return set(self.valuation)


def _holds(model: DoxModel, w: str, phi: Formula) -> bool:
    key = (w, phi)
    cached = model._cache.get(key)
    if cached is not None:
        return cached
    if isinstance(phi, Atom):
        value = w in model.valuation.get(phi.name, ())
    elif isinstance(phi, Top):
        value = True
    elif isinstance(phi, Not):
        value = not _holds(model, w, phi.sub)
    elif isinstance(phi, And):
        value = _holds(model, w, phi.left) and _holds(model, w, phi.right)
    elif isinstance(phi, Tri):
        value = model.base(phi.agent, w)[phi.body] >= phi.grade
    elif isinstance(phi, Box):
        value = all(
            _holds(model, u, phi.body)
            for u in model.worlds
            if model.distance(phi.group, w, u) <= phi.grade
        )
    else:
        raise FormulaError(f"unexpected formula {phi!r}")
    model._cache[key] = value
    return value


def eval_world(model: DoxModel, w: str, phi: Formula) -> bool:
    if w not in model.worlds:
        raise ModelError(f"unknown world {w!r}")
    return _holds(model, w, phi)


def derived_rho(model: DoxModel, group: Iterable[str], w: str, u: str) -> Grade:
    """Summed weight, over the group's beliefs at ``w``, of those false at ``u``."""
    return grade_sum(_singleton_derived(model, i, w, u) for i in group)


def _singleton_derived(model: DoxModel, agent: str, w: str, u: str) -> Grade:
    key = ("derived", agent, w, u)
    if key not in model._cache:
        base = model.base(agent, w)
        val = model.valuation
        model._cache[key] = grade_sum(
            g for alpha, g in base.items()
            if (u not in val.get(alpha.name, ()) if isinstance(alpha, Atom) else not _holds(model, u, alpha))
        )
    return model._cache[key]


def full_rho(model: DoxModel) -> dict:
    """The distance table of ``model`` with every finite entry made explicit."""
    table = {}
    for j in model.groups:
        for w in model.worlds:
            for u in model.worlds:
                d = model.distance(j, w, u)
                if d != OMEGA:
                    table[(j, w, u)] = d
    return table


def with_explicit_rho(model: DoxModel) -> DoxModel:
    if model.rho is not None:
        return model
    return DoxModel(model.agents, model.worlds, model.designated, dict(model.dox),
                    dict(model.valuation), full_rho(model))


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    condition: str
    group: tuple
    pair: tuple
    detail: str


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, condition: str, group: Iterable[str], w: str, u: str, detail: str) -> None:
        self.violations.append(Violation(condition, tuple(sort_agents(group)), (w, u), detail))

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(
            f"{v.condition}: group={{{' '.join(v.group)}}} pair={v.pair[0]}->{v.pair[1]}: {v.detail}"
            for v in self.violations
        )


def additivity_witness(model: DoxModel, group: frozenset, w: str, u: str) -> Optional[dict]:
    """First partition of rho(J,w,u) bounding every proper subgroup's distance from above."""
    d = model.distance(group, w, u)
    if d == OMEGA:
        return None
    subs = [(j, model.distance(j, w, u)) for j in proper_subgroups(group)]
    for delta in iter_partitions(d, group):
        if all(partition_sum(delta, j) >= dj for j, dj in subs):
            return delta
    return None


def _require_rho(model: DoxModel) -> None:
    if model.rho is None:
        raise ModelError("validation needs an explicit distance table (rho)")


def validate_qngdm(model: DoxModel) -> ValidationReport:
    _require_rho(model)
    report = ValidationReport()
    for (j, w, u), d in sorted(model.rho.items(), key=_entry_key):
        derived = derived_rho(model, j, w, u)
        if d < derived:
            report.add("QNGDM-DOX", j, w, u, f"rho={d} < falsified belief weight {derived}")
        if len(j) > 1 and additivity_witness(model, j, w, u) is None:
            report.add("QNGDM-rho-ADD", j, w, u,
                       f"no partition of {d} dominates all proper subgroup distances")
    return report


def validate_ngdm(model: DoxModel) -> ValidationReport:
    _require_rho(model)
    report = ValidationReport()
    rho = model.rho
    singles = [(i, frozenset({i})) for i in model.agents]
    found = []
    for wn, w in enumerate(model.worlds):
        for un, u in enumerate(model.worlds):
            table = {i: rho.get((g, w, u), OMEGA) for i, g in singles}
            derived = {i: _singleton_derived(model, i, w, u) for i, _ in singles}
            for jn, j in enumerate(model.groups):
                d = rho.get((j, w, u), OMEGA)
                expected = grade_sum(derived[i] for i in j)
                if d != expected:
                    found.append((jn, wn, un, "NGDM-DOX", j, w, u,
                                  f"rho={_fmt(d)} != derived {_fmt(expected)}"))
                if len(j) > 1:
                    total = grade_sum(table[i] for i in j)
                    if d != total:
                        found.append((jn, wn, un, "NGDM-rho-ADD", j, w, u,
                                      f"rho={_fmt(d)} != sum of singleton distances {_fmt(total)}"))
    # group-major order, as the checks are listed per group
    for *_, condition, j, w, u, detail in sorted(found, key=lambda v: v[:3]):
        report.add(condition, j, w, u, detail)
    return report


def _fmt(g: Grade) -> str:
    return "w" if g == OMEGA else str(g)


def _entry_key(item) -> tuple:
    (j, w, u), _ = item
    return (len(j), sort_agents(j), str(w), str(u))


def world_state_map(model: DoxModel) -> Mapping[str, State]:
    return {w: model.state_at(w) for w in model.worlds}
