"""JSON reading and writing for belief-base models, Kripke models and verdicts.

Formulas are stored as strings in the formula grammar, grades as integers
or ``"w"`` for omega.  Errors carry the JSON path of the offending value.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Iterable, Optional

from .formula import FormulaError, agents_of, atoms_of, is_inner, parse, render, sort_key
from .grades import GradeError, grade_from_json, grade_to_json, group_key, sort_agents
from .kripke import DoxModel, ModelError
from .semantics import MAGBM, BeliefBase, State


class FormatError(ValueError):
    def __init__(self, message: str, where: str = "") -> None:
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None


_SCALAR = r'(?:"[^"\\]*"|-?\d+|true|false|null)'
_FLAT_LIST = re.compile(rf"\[\s*({_SCALAR}(?:,\s*{_SCALAR})*)\s*\]")


def dump_json(data: Any, path: Optional[str | Path] = None) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(data, indent=2)
    text = _FLAT_LIST.sub(lambda m: json.dumps(json.loads(m.group(0))), text) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


# -- helpers -----------------------------------------------------------------

def _expect(value, kind, where: str):
    if not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise FormatError(f"expected {names}, got {type(value).__name__}", where)
    return value


def _grade(raw, where: str):
    if isinstance(raw, bool):
        raise FormatError("grade must be a number or \"w\"", where)
    try:
        return grade_from_json(raw)
    except (GradeError, ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from None


def _formula(raw, where: str, agents: Iterable[str]):
    _expect(raw, str, where)
    try:
        f = parse(raw)
    except FormulaError as exc:
        raise FormatError(str(exc), where) from None
    unknown = agents_of(f) - set(agents)
    if unknown:
        raise FormatError(f"undeclared agents {sorted(unknown)}", where)
    return f


def _base(raw, where: str, agents) -> BeliefBase:
    _expect(raw, list, where)
    entries = {}
    for n, item in enumerate(raw):
        here = f"{where}[{n}]"
        if not isinstance(item, list) or len(item) != 2:
            raise FormatError("belief entries are [formula, grade] pairs", here)
        f = _formula(item[0], here, agents)
        if not is_inner(f):
            raise FormatError(f"belief base entries must be box-free: {item[0]!r}", here)
        g = _grade(item[1], here)
        if f in entries:
            raise FormatError(f"duplicate belief {render(f)}", here)
        if g == 0:
            continue
        entries[f] = g
    try:
        return BeliefBase(entries)
    except ValueError as exc:
        raise FormatError(str(exc), where) from None


def _base_json(base: BeliefBase) -> list:
    return [[render(f), grade_to_json(g)] for f, g in sorted(base.items(), key=lambda e: sort_key(e[0]))]


def _agents(raw, where: str = "agents") -> list[str]:
    _expect(raw, list, where)
    for n, a in enumerate(raw):
        _expect(a, str, f"{where}[{n}]")
    if len(set(raw)) != len(raw):
        raise FormatError("duplicate agent", where)
    return sort_agents(raw)


def _group(raw, where: str, agents) -> frozenset:
    if isinstance(raw, str):
        raw = raw.replace(",", " ").split()
    _expect(raw, list, where)
    group = frozenset(str(a) for a in raw)
    if not group:
        raise FormatError("group must be nonempty", where)
    unknown = group - set(agents)
    if unknown:
        raise FormatError(f"undeclared agents {sorted(unknown)}", where)
    return group


def declared_atoms(data: dict) -> Optional[set]:
    """Atoms named by an optional top-level ``"atoms"`` list."""
    if "atoms" not in data:
        return None
    raw = _expect(data["atoms"], list, "atoms")
    return {str(p) for p in raw}


# -- belief-base models ------------------------------------------------------

def _state(raw, where: str, agents) -> State:
    _expect(raw, dict, where)
    val = _expect(raw.get("valuation", []), list, f"{where}.valuation")
    bases_raw = _expect(raw.get("bases", {}), dict, f"{where}.bases")
    bases = {}
    for a, b in bases_raw.items():
        if a not in agents:
            raise FormatError(f"undeclared agent {a!r}", f"{where}.bases")
        bases[a] = _base(b, f"{where}.bases.{a}", agents)
    return State(bases, frozenset(str(p) for p in val))


def magbm_from_json(data: Any) -> MAGBM:
    _expect(data, dict, "$")
    for key in ("agents", "designated", "context"):
        if key not in data:
            raise FormatError(f"missing key {key!r}", "$")
    agents = _agents(data["agents"])
    designated = _state(data["designated"], "designated", agents)
    ctx = _expect(data["context"], list, "context")
    context = [_state(s, f"context[{n}]", agents) for n, s in enumerate(ctx)]
    return MAGBM(tuple(agents), designated, context)


def _state_json(state: State, agents) -> dict:
    return {
        "valuation": sorted(state.valuation),
        "bases": {a: _base_json(state.base(a)) for a in agents if len(state.base(a))},
    }


def magbm_to_json(model: MAGBM) -> dict:
    agents = sort_agents(model.agents)
    return {
        "agents": agents,
        "designated": _state_json(model.designated, agents),
        "context": [_state_json(s, agents) for s in model.context],
    }


def magbm_atoms(model: MAGBM) -> set:
    out = set()
    for s in [model.designated, *model.context]:
        out |= set(s.valuation)
        for a in model.agents:
            for f in s.base(a):
                out |= atoms_of(f)
    return out


# -- Kripke models -------------------------------------------------------------

def dox_model_from_json(data: Any) -> DoxModel:
    _expect(data, dict, "$")
    for key in ("agents", "worlds", "designated"):
        if key not in data:
            raise FormatError(f"missing key {key!r}", "$")
    agents = _agents(data["agents"])
    worlds_raw = _expect(data["worlds"], list, "worlds")
    worlds = [str(w) for w in worlds_raw]
    if len(set(worlds)) != len(worlds):
        raise FormatError("duplicate world", "worlds")
    known = set(worlds)
    designated = data["designated"]
    if designated not in known:
        raise FormatError(f"unknown world {designated!r}", "designated")

    valuation = {}
    for p, ws in _expect(data.get("valuation", {}), dict, "valuation").items():
        _expect(ws, list, f"valuation.{p}")
        bad = [w for w in ws if w not in known]
        if bad:
            raise FormatError(f"unknown worlds {bad}", f"valuation.{p}")
        valuation[p] = frozenset(ws)

    dox = {}
    for a, per_world in _expect(data.get("dox", {}), dict, "dox").items():
        if a not in agents:
            raise FormatError(f"undeclared agent {a!r}", "dox")
        _expect(per_world, dict, f"dox.{a}")
        for w, b in per_world.items():
            if w not in known:
                raise FormatError(f"unknown world {w!r}", f"dox.{a}")
            dox[(a, w)] = _base(b, f"dox.{a}.{w}", agents)

    rho = None
    if "rho" in data:
        rho = {}
        for n, entry in enumerate(_expect(data["rho"], list, "rho")):
            here = f"rho[{n}]"
            _expect(entry, dict, here)
            missing = {"group", "from", "to", "d"} - set(entry)
            if missing:
                raise FormatError(f"missing keys {sorted(missing)}", here)
            group = _group(entry["group"], f"{here}.group", agents)
            for end in ("from", "to"):
                if entry[end] not in known:
                    raise FormatError(f"unknown world {entry[end]!r}", f"{here}.{end}")
            key = (group, entry["from"], entry["to"])
            if key in rho:
                raise FormatError("duplicate distance entry", here)
            rho[key] = _grade(entry["d"], f"{here}.d")
    try:
        return DoxModel(tuple(agents), tuple(worlds), designated, dox, valuation, rho)
    except ModelError as exc:
        raise FormatError(str(exc), "$") from None


def dox_model_to_json(model: DoxModel) -> dict:
    out = {
        "agents": list(model.agents),
        "worlds": list(model.worlds),
        "designated": model.designated,
        "valuation": {p: [w for w in model.worlds if w in ws]
                      for p, ws in sorted(model.valuation.items())},
        "dox": {},
    }
    for a in model.agents:
        per_world = {w: _base_json(model.base(a, w)) for w in model.worlds if len(model.base(a, w))}
        if per_world:
            out["dox"][a] = per_world
    if model.rho is not None:
        order = {w: n for n, w in enumerate(model.worlds)}
        entries = sorted(model.rho.items(),
                         key=lambda e: (group_key(e[0][0]), order[e[0][1]], order[e[0][2]]))
        out["rho"] = [{"group": sort_agents(j), "from": w, "to": u, "d": grade_to_json(d)}
                      for (j, w, u), d in entries]
    return out


def load_magbm(path) -> MAGBM:
    return magbm_from_json(load_json(path))


def load_dox_model(path) -> DoxModel:
    return dox_model_from_json(load_json(path))


def verdict_to_json(verdict) -> dict:
    return {
        "result": verdict.result,
        "model": dox_model_to_json(verdict.model) if verdict.model is not None else None,
        "stats": verdict.stats.as_dict(),
    }
