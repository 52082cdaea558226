"""Tableau decision procedure with countermodel extraction.

The search is depth-first and keeps a single branch alive.  Boolean
structure is saturated first (double negation, conjunction, branching on
negated conjunction), then the saturated literal set is checked for clashes
(complementary pairs, ``false``, and grade monotonicity of triangles).  Each
negated box ``~D{J,k} phi`` must then have at least one satisfiable
denominator: for a partition ``delta`` of ``k`` over ``J`` the successor
must refute ``phi``, satisfy every box ``D{J',k'} psi`` with ``J' <= J`` and
``sum(delta[J']) <= k'``, and satisfy enough triangle bodies that the
leftover believed weight of each agent ``i`` fits in ``delta[i]``.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .formula import (
    And,
    Atom,
    Box,
    Formula,
    Not,
    Top,
    Tri,
    agents_of,
    modal_depth,
    node_count,
    sort_key,
)
from .grades import (
    Grade,
    grade_sum,
    iter_partitions,
    nonempty_subgroups,
    partition_sum,
    sort_agents,
)
from .kripke import DoxModel, eval_world, validate_qngdm


class ResourceLimitError(RuntimeError):
    """A configured search budget was exhausted; this is not a verdict."""


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class Denominator:
    witness: dict
    formulas: frozenset
    source: Formula

    def sorted_formulas(self) -> list:
        return sorted(self.formulas, key=sort_key)


@dataclass
class Trace:
    """An open branch: its saturated literals and one open denominator per negated box."""

    literals: frozenset
    successors: list = field(default_factory=list)  # (negated box, Denominator, Trace)


@dataclass
class Stats:
    max_depth: int = 0
    nodes: int = 0
    denominators: int = 0
    peak_live: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class TableauConfig:
    max_depth: Optional[int] = None
    max_denominators: Optional[int] = None  # per negated box
    order_seed: Optional[int] = None


@dataclass
class Verdict:
    result: str  # sat | unsat | valid | invalid
    query: Formula
    model: Optional[DoxModel] = None
    stats: Stats = field(default_factory=Stats)

    @property
    def positive(self) -> bool:
        return self.result in ("sat", "valid")


# -- literal sets -------------------------------------------------------------

class _Branch:
    """Saturated literals with the indexes needed for clash detection."""

    __slots__ = ("lits", "pos", "neg")

    def __init__(self) -> None:
        self.lits: set = set()
        self.pos: dict = {}  # (agent, body) -> highest asserted grade
        self.neg: dict = {}  # (agent, body) -> lowest denied grade

    def copy(self) -> "_Branch":
        other = _Branch()
        other.lits = set(self.lits)
        other.pos = dict(self.pos)
        other.neg = dict(self.neg)
        return other

    def add(self, f: Formula) -> bool:
        """Add a literal; False when the branch closes."""
        if f in self.lits:
            return True
        if isinstance(f, Not):
            s = f.sub
            if isinstance(s, Top) or s in self.lits:
                return False
            if isinstance(s, Tri):
                key = (s.agent, s.body)
                if self.pos.get(key, 0) >= s.grade:
                    return False
                if key not in self.neg or s.grade < self.neg[key]:
                    self.neg[key] = s.grade
        else:
            if Not(f) in self.lits:
                return False
            if isinstance(f, Tri):
                key = (f.agent, f.body)
                if key in self.neg and self.neg[key] <= f.grade:
                    return False
                self.pos[key] = max(self.pos.get(key, 0), f.grade)
        self.lits.add(f)
        return True

    def refutes(self, f: Formula) -> bool:
        if isinstance(f, Not):
            return f.sub in self.lits
        return Not(f) in self.lits


def _is_negated_box(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.sub, Box)


# -- negated-box elimination --------------------------------------------------

def _elim_parts(others: Iterable[Formula], negbox: Formula):
    box = negbox.sub
    members = sort_agents(box.group)
    weights: dict = {i: {} for i in members}
    boxes = []
    for f in sorted(others, key=sort_key):
        if isinstance(f, Tri) and f.agent in box.group:
            w = weights[f.agent]
            w[f.body] = max(w.get(f.body, 0), f.grade)
        elif isinstance(f, Box) and f.group <= box.group:
            boxes.append(f)
    bodies = sorted({a for w in weights.values() for a in w}, key=sort_key)
    return box, members, weights, boxes, bodies


def _admissible(kept: frozenset, weights: dict, delta: dict) -> bool:
    return all(
        grade_sum(g for alpha, g in weights[i].items() if alpha not in kept) <= delta[i]
        for i in weights
    )


def _selections(bodies: list, weights: dict, delta: dict, minimal: bool) -> Iterator[frozenset]:
    """Sets of triangle bodies the successor must satisfy, smallest first."""
    for n in range(len(bodies) + 1):
        for combo in combinations(bodies, n):
            kept = frozenset(combo)
            if not _admissible(kept, weights, delta):
                continue
            if minimal and any(_admissible(kept - {a}, weights, delta) for a in kept):
                continue
            yield kept


def _forced(boxes: list, delta: dict) -> list:
    return [b.body for b in boxes if partition_sum(delta, b.group) <= b.grade]


def box_elim(node: Iterable[Formula], negbox: Formula) -> list[Denominator]:
    """Every denominator of the elimination rule for ``negbox``, deduplicated."""
    node = set(node)
    if negbox not in node or not _is_negated_box(negbox):
        raise ValueError("negbox must be a negated box belonging to the node")
    box, members, weights, boxes, bodies = _elim_parts(node - {negbox}, negbox)
    out, seen = [], set()
    for delta in iter_partitions(box.grade, members):
        forced = _forced(boxes, delta)
        for kept in _selections(bodies, weights, delta, minimal=False):
            formulas = frozenset([Not(box.body), *forced, *kept])
            if formulas not in seen:
                seen.add(formulas)
                out.append(Denominator(delta, formulas, negbox))
    return out


def residual(node: Iterable[Formula], agent: str, kept: Iterable[Formula]) -> Grade:
    """Believed weight of ``agent`` left unsatisfied when only ``kept`` bodies hold."""
    kept = set(kept)
    best: dict = {}
    for f in node:
        if isinstance(f, Tri) and f.agent == agent and f.body not in kept:
            best[f.body] = max(best.get(f.body, 0), f.grade)
    return grade_sum(best.values())


# -- the search ----------------------------------------------------------------

class Prover:
    def __init__(self, config: Optional[TableauConfig] = None) -> None:
        self.config = config or TableauConfig()
        self.stats = Stats()
        self._live = 0
        self._rng = random.Random(self.config.order_seed) if self.config.order_seed is not None else None

    def solve(self, formulas: Iterable[Formula], depth: int = 0) -> Optional[Trace]:
        formulas = sorted(set(formulas), key=sort_key)
        limit = self.config.max_depth
        if limit is not None and depth > limit:
            raise ResourceLimitError(f"tableau depth {depth} exceeds the limit {limit}")
        self.stats.nodes += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        weight = sum(node_count(f) for f in formulas)
        self._live += weight
        self.stats.peak_live = max(self.stats.peak_live, self._live)
        try:
            return self._expand(list(reversed(formulas)), _Branch(), [], depth)
        finally:
            self._live -= weight

    def _expand(self, todo: list, branch: _Branch, pending: list, depth: int) -> Optional[Trace]:
        while todo:
            f = todo.pop()
            if isinstance(f, And):
                todo.extend((f.right, f.left))
                continue
            if isinstance(f, Not):
                if isinstance(f.sub, Not):
                    todo.append(f.sub.sub)
                    continue
                if isinstance(f.sub, And):
                    pending.append(f)
                    continue
            if not branch.add(f):
                return None
        while pending:
            f = pending.pop(0)
            left, right = Not(f.sub.left), Not(f.sub.right)
            if left in branch.lits or right in branch.lits:
                continue
            options = [o for o in (left, right) if not branch.refutes(o)]
            for n, choice in enumerate(options):
                child = branch if n == len(options) - 1 else branch.copy()
                result = self._expand([choice], child, list(pending), depth)
                if result is not None:
                    return result
            return None
        return self._modal(branch, depth)

    def _modal(self, branch: _Branch, depth: int) -> Optional[Trace]:
        literals = frozenset(branch.lits)
        negboxes = sorted((f for f in literals if _is_negated_box(f)), key=sort_key)
        if self._rng is not None:
            self._rng.shuffle(negboxes)
        successors = []
        for negbox in negboxes:
            found = None
            tried = 0
            for den in self._lazy_denominators(literals - {negbox}, negbox):
                tried += 1
                self.stats.denominators += 1
                cap = self.config.max_denominators
                if cap is not None and tried > cap:
                    raise ResourceLimitError(f"more than {cap} denominators for {negbox}")
                child = self.solve(den.formulas, depth + 1)
                if child is not None:
                    found = (negbox, den, child)
                    break
            if found is None:
                return None
            successors.append(found)
        return Trace(literals, successors)

    def _lazy_denominators(self, others: frozenset, negbox: Formula) -> Iterator[Denominator]:
        """Minimal denominators only; a superset of a closed denominator is closed too.

        A candidate is skipped when some earlier partition forces a subset of
        its boxes and already admits its triangle bodies, since a subset of it
        was then tried before.  Nothing but the current partition is stored.
        """
        box, members, weights, boxes, bodies = _elim_parts(others, negbox)
        head = Not(box.body)
        for n, delta in enumerate(iter_partitions(box.grade, members)):
            forced = _forced(boxes, delta)
            forced_set = set(forced)
            for kept in _selections(bodies, weights, delta, minimal=True):
                if self._dominated(box, members, weights, boxes, n, forced_set, kept):
                    continue
                yield Denominator(delta, frozenset([head, *forced, *kept]), negbox)

    @staticmethod
    def _dominated(box, members, weights, boxes, n, forced_set, kept) -> bool:
        for m, earlier in enumerate(iter_partitions(box.grade, members)):
            if m >= n:
                return False
            if set(_forced(boxes, earlier)) <= forced_set and _admissible(kept, weights, earlier):
                return True
        return False


def decide_node(node: Iterable[Formula], config: Optional[TableauConfig] = None):
    """Return ``(satisfiable, trace, stats)`` for a finite set of formulas."""
    prover = Prover(config)
    trace = prover.solve(node)
    return trace is not None, trace, prover.stats


def extract_model(trace: Optional[Trace], agents: Iterable[str] = (), root: str = "w0") -> DoxModel:
    """Build the pointed model of an open trace: one world per node of the trace tree."""
    if trace is None:
        raise TraceError("no open branch to extract a model from")
    worlds: list = []
    dox: dict = {}
    valuation: dict = {}
    rho: dict = {}
    agent_set = set(agents)

    def build(t: Trace, wid: str) -> None:
        if t is None:
            raise TraceError(f"trace is incomplete below world {wid}")
        worlds.append(wid)
        for f in t.literals:
            if isinstance(f, Atom):
                valuation.setdefault(f.name, set()).add(wid)
            elif isinstance(f, Tri):
                base = dox.setdefault((f.agent, wid), {})
                base[f.body] = max(base.get(f.body, 0), f.grade)
            agent_set.update(agents_of(f))
        for n, (negbox, den, child) in enumerate(t.successors, 1):
            cid = f"{wid}_{n}"
            build(child, cid)
            for sub in nonempty_subgroups(negbox.sub.group):
                rho[(sub, wid, cid)] = partition_sum(den.witness, sub)

    build(trace, root)
    return DoxModel(tuple(agent_set), tuple(worlds), root, dox, valuation, rho)


class ModelCheckFailure(AssertionError):
    pass


def verify_model(model: DoxModel, query: Formula) -> None:
    if not eval_world(model, model.designated, query):
        raise ModelCheckFailure(f"extracted model does not satisfy {query}")
    report = validate_qngdm(model)
    if not report.ok:
        raise ModelCheckFailure(f"extracted model is not a QNGDM:\n{report}")


def decide_formula(
    phi: Formula,
    mode: str = "sat",
    extract: bool = False,
    config: Optional[TableauConfig] = None,
    agents: Iterable[str] = (),
) -> Verdict:
    if mode not in ("sat", "valid"):
        raise ValueError(f"mode must be 'sat' or 'valid', got {mode!r}")
    query = phi if mode == "sat" else Not(phi)
    satisfiable, trace, stats = decide_node([query], config)
    bound = modal_depth(query) + 1
    assert stats.max_depth <= bound, f"branch depth {stats.max_depth} exceeds {bound}"
    model = None
    if satisfiable and extract:
        model = extract_model(trace, set(agents) | agents_of(phi))
        verify_model(model, query)
    if mode == "sat":
        result = "sat" if satisfiable else "unsat"
    else:
        result = "invalid" if satisfiable else "valid"
    return Verdict(result, query, model, stats)


def is_valid(phi: Formula, **kw) -> bool:
    return decide_formula(phi, "valid", **kw).result == "valid"


def is_satisfiable(phi: Formula, **kw) -> bool:
    return decide_formula(phi, "sat", **kw).result == "sat"

