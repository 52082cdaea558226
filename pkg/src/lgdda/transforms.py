"""Satisfaction-preserving transformations between the three model classes.

The chain ``filtrate -> qngdm_to_ngdm -> ngdm_to_magbm -> magbm_to_qngdm``
goes from any finite quasi-notional model to a small one, then to a notional
model, to a belief-base model, and back to a quasi-notional model, keeping
the truth of a chosen formula at the designated point.
"""
from __future__ import annotations

import re
from typing import Optional

from .formula import Atom, Formula, Tri, atoms_of, sort_key, subformula_closure
from .grades import OMEGA, max_star, min_star, partition_sum, sort_agents
from .kripke import (
    DoxModel,
    ModelError,
    additivity_witness,
    eval_world,
    validate_ngdm,
    validate_qngdm,
    with_explicit_rho,
)
from .semantics import MAGBM, BeliefBase, implausibility


class TransformError(ModelError):
    pass


def _require_qngdm(model: DoxModel) -> DoxModel:
    model = with_explicit_rho(model)
    report = validate_qngdm(model)
    if not report.ok:
        raise TransformError(f"input is not a valid QNGDM:\n{report}")
    return model


def filtrate(model: DoxModel, phi: Formula) -> DoxModel:
    """Quotient ``model`` by agreement on every subformula of ``phi``."""
    model = _require_qngdm(model)
    subs = sorted(subformula_closure(phi), key=sort_key)
    classes: dict[tuple, list] = {}
    for w in model.worlds:
        classes.setdefault(tuple(eval_world(model, w, s) for s in subs), []).append(w)
    members = {cls[0]: cls for cls in classes.values()}  # named after first member
    names = list(members)

    rho = {}
    for j in model.groups:
        for a in names:
            for b in names:
                d = min_star(model.distance(j, u, v) for u in members[a] for v in members[b])
                if d != OMEGA:
                    rho[(j, a, b)] = d

    tri_grades: dict[tuple, set] = {}
    for s in subs:
        if isinstance(s, Tri):
            tri_grades.setdefault((s.agent, s.body), set()).add(s.grade)
    dox = {}
    for a in names:
        for agent in model.agents:
            entries = {}
            for (i, alpha), grades in tri_grades.items():
                if i != agent:
                    continue
                kept = [k for k in grades if all(model.base(i, u)[alpha] >= k for u in members[a])]
                g = max_star(kept)
                if g:
                    entries[alpha] = g
            if entries:
                dox[(agent, a)] = BeliefBase(entries)

    valuation = {
        p: frozenset(a for a in names if all(u in ws for u in members[a]))
        for p, ws in model.valuation.items()
    }
    designated = next(a for a in names if model.designated in members[a])
    return DoxModel(model.agents, tuple(names), designated, dox, valuation, rho)


# -- quasi-notional to notional ---------------------------------------------

def _copy_id(w: str, group: frozenset) -> str:
    return f"{w}@{'+'.join(sort_agents(group))}"


def chi_atom(world: str) -> str:
    # injective escaping keeps distinct worlds on distinct atoms
    return "__chi_" + re.sub(r"[^A-Za-z0-9]", lambda m: f"_{ord(m.group()):x}_", str(world))


def _model_atoms(model: DoxModel) -> set[str]:
    names = set(model.valuation)
    for base in model.dox.values():
        for alpha in base:
            names |= atoms_of(alpha)
    return names


def qngdm_to_ngdm(model: DoxModel, phi: Optional[Formula] = None) -> DoxModel:
    """Copy each world once per group, then pin distances with fresh characterizing atoms."""
    model = _require_qngdm(model)
    if not model.agents:
        # no groups, no distances: already notional
        return model
    groups = model.groups
    all_agents = frozenset(model.agents)

    # stage 1: group-indexed copies, distances from additivity witnesses
    copies = [(w, g) for w in model.worlds for g in groups]
    ids = {c: _copy_id(*c) for c in copies}
    if len(set(ids.values())) != len(ids):
        raise TransformError("world copies do not have distinct names")
    rho1: dict = {}
    for w in model.worlds:
        for u in model.worlds:
            for j in groups:
                if model.distance(j, w, u) == OMEGA:
                    continue
                delta = additivity_witness(model, j, w, u)
                if delta is None:
                    raise TransformError(f"no additivity witness for {sorted(j)} at {w}->{u}")
                for sub in groups:
                    if sub <= j:
                        d = partition_sum(delta, sub)
                        for src in groups:
                            rho1[(sub, ids[(w, src)], ids[(u, j)])] = d

    # stage 2: characterizing atoms make every distance equal to its derived value
    chis = {c: chi_atom(ids[c]) for c in copies}
    taken = _model_atoms(model) | (atoms_of(phi) if phi is not None else set())
    clash = taken & set(chis.values())
    if clash or len(set(chis.values())) != len(chis):
        raise TransformError(f"characterizing atom names collide: {sorted(clash) or 'duplicates'}")

    dox = {}
    for (w, src) in copies:
        for agent in model.agents:
            base = model.base(agent, w)
            entries = dict(base.items())
            for (u, j) in copies:
                target = rho1.get((frozenset({agent}), ids[(w, src)], ids[(u, j)]), OMEGA)
                if target == OMEGA:
                    entries[Atom(chis[(u, j)])] = OMEGA
                    continue
                falsified = sum(g for alpha, g in base.items() if not eval_world(model, u, alpha))
                extra = target - falsified
                assert extra >= 0, "distance below falsified belief weight in a valid QNGDM"
                if extra:
                    entries[Atom(chis[(u, j)])] = extra
            if entries:
                dox[(agent, ids[(w, src)])] = BeliefBase(entries)

    valuation = {p: frozenset(ids[(w, g)] for w in ws for g in groups)
                 for p, ws in model.valuation.items()}
    everywhere = frozenset(ids.values())
    for c in copies:
        valuation[chis[c]] = everywhere - {ids[c]}

    return DoxModel(model.agents, tuple(ids[c] for c in copies),
                    ids[(model.designated, all_agents)], dox, valuation, rho1)


# -- notional to belief-base models and back ---------------------------------

def ngdm_to_magbm(model: DoxModel) -> MAGBM:
    explicit = with_explicit_rho(model)
    report = validate_ngdm(explicit)
    if not report.ok:
        raise TransformError(f"input is not a valid NGDM:\n{report}")
    states = {w: model.state_at(w) for w in model.worlds}
    return MAGBM(model.agents, states[model.designated], [states[w] for w in model.worlds])


def magbm_to_qngdm(model: MAGBM) -> DoxModel:
    """One world per context state; the designated state gets its own world unless it
    equals a context state, and distances into that extra world are omega."""
    names = [f"s{n}" for n in range(len(model.context))]
    designated = next((names[n] for n, s in enumerate(model.context) if s == model.designated), None)
    states = dict(zip(names, model.context))
    if designated is None:
        designated = "s_designated"
        states[designated] = model.designated
    worlds = tuple(states)

    agents = tuple(sort_agents(model.agents))
    dox = {(a, w): s.base(a) for w, s in states.items() for a in agents if len(s.base(a))}
    valuation: dict = {}
    for w, s in states.items():
        for p in s.valuation:
            valuation.setdefault(p, set()).add(w)

    probe = DoxModel(agents, worlds, designated, dox, valuation, {})
    rho = {}
    for j in probe.groups:
        for w, s in states.items():
            for u in names:
                d = implausibility(s, states[u], j)
                if d != OMEGA:
                    rho[(j, w, u)] = d
    return DoxModel(agents, worlds, designated, dox, valuation, rho)


def transform(model, source: str, target: str, phi: Optional[Formula] = None):
    """Route between model kinds along the filtration/copy/reconstruction cycle."""
    kinds = ("qngdm", "ngdm", "magbm")
    if source not in kinds or target not in kinds:
        raise TransformError(f"model kinds are {kinds}")
    current, kind = model, source
    while kind != target:
        if kind == "qngdm":
            current, kind = qngdm_to_ngdm(current, phi), "ngdm"
        elif kind == "ngdm":
            current, kind = ngdm_to_magbm(current), "magbm"
        else:
            current, kind = magbm_to_qngdm(current), "qngdm"
    return current
