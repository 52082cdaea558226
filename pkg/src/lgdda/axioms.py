"""Instances of the axiom schemas, for testing validity of the decision procedure."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Box,
    Formula,
    Not,
    Top,
    Tri,
    conj_all,
    disj_all,
    implies,
    render,
)
from .grades import iter_partitions, nonempty_subgroups, partition_sum, sort_agents

SCHEMAS = ("K", "MonTri", "IntTriBox", "IntBoxBox", "MonK", "MonJ")


class SchemaError(ValueError):
    pass


def instantiate(schema: str, **p) -> Formula:
    """Build one schema instance; see ``SCHEMAS`` for names and the builders below for params."""
    try:
        builder = _BUILDERS[schema]
    except KeyError:
        raise SchemaError(f"unknown schema {schema!r}; expected one of {SCHEMAS}") from None
    return builder(**p)


def k_axiom(group, k: int, phi: Formula, psi: Formula) -> Formula:
    g = frozenset(group)
    return implies(Box(g, k, implies(phi, psi)), implies(Box(g, k, phi), Box(g, k, psi)))


def mon_tri(agent: str, k, k_low, body: Formula) -> Formula:
    if not k >= k_low >= 1:
        raise SchemaError(f"MonTri needs k >= k' >= 1, got {k}, {k_low}")
    return implies(Tri(agent, k, body), Tri(agent, k_low, body))


def int_tri_box(omega: Sequence[Tri], group, k: int) -> Formula:
    """Triangles of group members entail that the group, at strength ``k``, believes
    all of their bodies except some subset of total weight at most ``k``."""
    group = frozenset(group)
    omega = list(omega)
    seen = {}
    for t in omega:
        if not isinstance(t, Tri) or t.agent not in group:
            raise SchemaError(f"IntTriBox needs triangles of agents in the group, got {t}")
        if seen.setdefault((t.agent, t.body), t.grade) != t.grade:
            raise SchemaError(f"two grades for agent {t.agent} on {t.body}")
    if len(set(omega)) != len(omega):
        raise SchemaError("duplicate triangles in IntTriBox")
    disjuncts = []
    for subset in _subsets(omega):
        if sum(t.grade for t in subset) <= k:
            chosen = set(subset)
            disjuncts.append(conj_all(t.body for t in omega if t not in chosen))
    return implies(conj_all(omega), Box(group, k, disj_all(disjuncts)))


def int_box_box(psi: Sequence[Box], group, k: int) -> Formula:
    group = frozenset(group)
    psi = list(psi)
    for b in psi:
        if not isinstance(b, Box) or not b.group <= group:
            raise SchemaError(f"IntBoxBox needs boxes over subgroups of the group, got {b}")
    disjuncts = [
        conj_all(b.body for b in psi if partition_sum(delta, b.group) <= b.grade)
        for delta in iter_partitions(k, group)
    ]
    return implies(conj_all(psi), Box(group, k, disj_all(disjuncts)))


def mon_k(group, k: int, k_low: int, body: Formula) -> Formula:
    if not k >= k_low:
        raise SchemaError(f"MonK needs k >= k', got {k}, {k_low}")
    g = frozenset(group)
    return implies(Box(g, k, body), Box(g, k_low, body))


def mon_j(group, wider, k: int, body: Formula) -> Formula:
    g, h = frozenset(group), frozenset(wider)
    if not g <= h:
        raise SchemaError("MonJ needs J to be a subset of J'")
    return implies(Box(g, k, body), Box(h, k, body))


def nec(phi: Formula, group, k: int) -> Formula:
    """Necessitation applied to an already-valid formula."""
    return Box(frozenset(group), k, phi)


_BUILDERS = {
    "K": k_axiom,
    "MonTri": mon_tri,
    "IntTriBox": int_tri_box,
    "IntBoxBox": int_box_box,
    "MonK": mon_k,
    "MonJ": mon_j,
}


def _subsets(items: Sequence) -> Iterator[tuple]:
    for n in range(len(items) + 1):
        yield from combinations(items, n)


def simplify(f: Formula) -> Formula:
    """Unit laws for true/false, idempotent conjunction and double negation."""
    if isinstance(f, Not):
        sub = simplify(f.sub)
        if isinstance(sub, Not):
            return sub.sub
        return Not(sub)
    if isinstance(f, And):
        a, b = simplify(f.left), simplify(f.right)
        if a == BOTTOM or b == BOTTOM:
            return BOTTOM
        if isinstance(a, Top):
            return b
        if isinstance(b, Top) or a == b:
            return a
        return And(a, b)
    if isinstance(f, Box):
        return Box(f.group, f.grade, simplify(f.body))
    return f


# -- corpus ------------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    agents: int = 2
    max_grade: int = 2
    atoms: int = 1
    max_omega: int = 2
    max_psi: int = 2

    def agent_names(self) -> list[str]:
        return [str(i) for i in range(1, self.agents + 1)]

    def atom_pool(self) -> list[Atom]:
        names = "pqrstuv"
        return [Atom(names[i]) for i in range(self.atoms)]


def corpus(bounds: Bounds = Bounds()) -> list[Formula]:
    """Every schema instance within ``bounds``, in a fixed order; all are valid."""
    return [f for _, f in labelled_corpus(bounds)]


def labelled_corpus(bounds: Bounds = Bounds()) -> list[tuple[str, Formula]]:
    agents = bounds.agent_names()
    atoms = bounds.atom_pool()
    groups = nonempty_subgroups(agents)
    grades = range(bounds.max_grade + 1)
    pool = [*atoms, TOP, BOTTOM]
    out: list = []

    for j, k in product(groups, grades):
        for phi, psi in product(pool, pool):
            out.append(("K", k_axiom(j, k, phi, psi)))
    if not atoms:
        return out

    for i, p in product(agents, atoms):
        for k, low in product(range(1, bounds.max_grade + 1), repeat=2):
            if k >= low:
                out.append(("MonTri", mon_tri(i, k, low, p)))

    for j in groups:
        for k, low in product(grades, grades):
            if k >= low:
                out.extend(("MonK", mon_k(j, k, low, p)) for p in atoms)
        for wider in groups:
            if j <= wider:
                for k in grades:
                    out.extend(("MonJ", mon_j(j, wider, k, p)) for p in atoms)

    for j in groups:
        slots = [(i, p) for i in sort_agents(j) for p in atoms]
        for n in range(bounds.max_omega + 1):
            for chosen in combinations(slots, n):
                for gs in product(range(1, bounds.max_grade + 1), repeat=n):
                    omega = [Tri(i, g, p) for (i, p), g in zip(chosen, gs)]
                    for k in grades:
                        out.append(("IntTriBox", int_tri_box(omega, j, k)))

    for j in groups:
        boxes = [Box(sub, g, p) for sub in groups if sub <= j for g in grades for p in atoms]
        for n in range(bounds.max_psi + 1):
            for chosen in combinations(boxes, n):
                for k in grades:
                    out.append(("IntBoxBox", int_box_box(chosen, j, k)))
    return out


def nec_lifts(valid: Iterable[Formula], bounds: Bounds = Bounds()) -> list[Formula]:
    """Necessitate each formula once, cycling through every (group, grade) pair."""
    agents = bounds.agent_names()
    pairs = [(j, k) for j in nonempty_subgroups(agents) for k in range(bounds.max_grade + 1)]
    return [nec(f, *pairs[n % len(pairs)]) for n, f in enumerate(valid)]


def write_lines(formulas: Iterable[Formula]) -> str:
    return "".join(render(f) + "\n" for f in formulas)

