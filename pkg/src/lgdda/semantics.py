"""Belief-base semantics: states, merged bases, implausibility and model checking."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .formula import And, Atom, Box, Formula, FormulaError, Not, Top, Tri, is_inner
from .grades import Grade, check_grade, grade_sum, min_star


class BeliefBase(Mapping):
    """Immutable graded multiset of box-free formulas.

    Only strictly positive grades are stored; looking up an absent formula
    gives 0.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Optional[Mapping | Iterable] = None) -> None:
        items: dict = {}
        if entries is not None:
            pairs = entries.items() if isinstance(entries, Mapping) else entries
            for alpha, g in pairs:
                if not is_inner(alpha):
                    raise FormulaError(f"belief base entries must be box-free: {alpha}")
                g = check_grade(g)
                if g > 0:
                    items[alpha] = g
        self._items = items
        self._hash: Optional[int] = None

    def __getitem__(self, alpha: Formula) -> Grade:
        return self._items.get(alpha, 0)

    def __contains__(self, alpha: object) -> bool:
        return alpha in self._items

    def __iter__(self) -> Iterator[Formula]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    # direct views; the Mapping defaults go through __getitem__ per entry
    def items(self):
        return self._items.items()

    def values(self):
        return self._items.values()

    def keys(self):
        return self._items.keys()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BeliefBase):
            return self._items == other._items
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{a}: {g}" for a, g in self._items.items())
        return f"BeliefBase({{{inner}}})"

    @property
    def support(self) -> frozenset:
        return frozenset(self._items)


EMPTY_BASE = BeliefBase()


@dataclass(frozen=True)
class State:
    """Per-agent graded belief bases plus the set of true atoms."""

    bases: Mapping[str, BeliefBase] = field(default_factory=dict)
    valuation: frozenset = frozenset()

    def __post_init__(self) -> None:
        # an empty base and a missing one are the same state
        bases = {a: b if isinstance(b, BeliefBase) else BeliefBase(b) for a, b in self.bases.items()}
        object.__setattr__(self, "bases", {a: b for a, b in bases.items() if len(b)})
        object.__setattr__(self, "valuation", frozenset(self.valuation))

    def base(self, agent: str) -> BeliefBase:
        return self.bases.get(agent, EMPTY_BASE)

    def __hash__(self) -> int:
        return hash((frozenset(self.bases.items()), self.valuation))


@dataclass
class MAGBM:
    """A designated state together with a finite context of states."""

    agents: tuple
    designated: State
    context: list = field(default_factory=list)


def eval_state(state: State, alpha: Formula) -> bool:
    if isinstance(alpha, Atom):
        return alpha.name in state.valuation
    if isinstance(alpha, Top):
        return True
    if isinstance(alpha, Not):
        return not eval_state(state, alpha.sub)
    if isinstance(alpha, And):
        return eval_state(state, alpha.left) and eval_state(state, alpha.right)
    if isinstance(alpha, Tri):
        return state.base(alpha.agent)[alpha.body] >= alpha.grade
    raise FormulaError(f"states evaluate box-free formulas only, got {alpha}")


def merged_base(state: State, group: Iterable[str]) -> BeliefBase:
    members = list(group)
    support = set()
    for i in members:
        support.update(state.base(i))
    return BeliefBase({a: grade_sum(state.base(i)[a] for i in members) for a in support})


def implausibility(state: State, other: State, group: Iterable[str]) -> Grade:
    """Total merged weight of the group's beliefs (at ``state``) falsified at ``other``."""
    merged = merged_base(state, group)
    return grade_sum(g for alpha, g in merged.items() if not eval_state(other, alpha))


def accessible(state: State, other: State, group: Iterable[str], k: Grade) -> bool:
    return implausibility(state, other, group) <= k


def check(model: MAGBM, phi: Formula, state: Optional[State] = None) -> bool:
    point = model.designated if state is None else state
    return _check(model, phi, point)


def _check(model: MAGBM, phi: Formula, point: State) -> bool:
    if is_inner(phi):
        return eval_state(point, phi)
    if isinstance(phi, Not):
        return not _check(model, phi.sub, point)
    if isinstance(phi, And):
        return _check(model, phi.left, point) and _check(model, phi.right, point)
    if isinstance(phi, Box):
        return all(
            _check(model, phi.body, other)
            for other in model.context
            if implausibility(point, other, phi.group) <= phi.grade
        )
    raise FormulaError(f"unexpected formula {phi!r}")


def disagreement_degree(model: MAGBM, group: Iterable[str]) -> Grade:
    """Least implausibility of any context state; ``D{J,k-1} false`` holds iff this is >= k."""
    members = list(group)
    return min_star(implausibility(model.designated, s, members) for s in model.context)
