"""Grades: natural numbers extended with an absorbing top element ``OMEGA``.

Grades are plain Python ints, with ``math.inf`` standing in for omega.  This
keeps comparisons, ``min``/``max`` and addition native (``n + inf == inf``).
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Iterator, Literal, Sequence, Union

Grade = Union[int, float]

OMEGA: float = math.inf


class GradeError(ValueError):
    pass


def is_finite(g: Grade) -> bool:
    return g != OMEGA


def check_grade(g: object, *, minimum: int = 0, allow_omega: bool = True) -> Grade:
    """Validate ``g`` as a grade, returning it (ints normalised, omega kept)."""
    if g == OMEGA:
        if not allow_omega:
            raise GradeError("omega is not allowed here")
        return OMEGA
    if isinstance(g, bool) or not isinstance(g, int):
        raise GradeError(f"grade must be a nonnegative integer or omega, got {g!r}")
    if g < minimum:
        raise GradeError(f"grade {g} is below the minimum {minimum}")
    return g


def grade_sum(values: Iterable[Grade]) -> Grade:
    total = 0
    for v in values:
        if v == OMEGA:
            return OMEGA
        total += v
    return total


def bounded_extrema(values: Iterable[Grade], mode: Literal["min", "max"]) -> Grade:
    """``min*``/``max*``: ordinary extrema, with ``min(()) = OMEGA`` and ``max(()) = 0``.

    The empty-set defaults are the ones the model constructions rely on
    (an empty set of candidate distances means "unreachable", an empty set
    of believed grades means "not believed").
    """
    if mode == "min":
        return min(values, default=OMEGA)
    if mode == "max":
        return max(values, default=0)
    raise ValueError(f"unknown mode {mode!r}")


def min_star(values: Iterable[Grade]) -> Grade:
    return bounded_extrema(values, "min")


def max_star(values: Iterable[Grade]) -> Grade:
    return bounded_extrema(values, "max")


# -- agents and groups -------------------------------------------------------

def agent_key(agent: str) -> tuple:
    """Global agent order: numeric names numerically, then the rest lexically."""
    return (0, int(agent), agent) if agent.isdigit() else (1, 0, agent)


def sort_agents(agents: Iterable[str]) -> list[str]:
    return sorted(set(agents), key=agent_key)


def group_key(group: Iterable[str]) -> tuple:
    members = sort_agents(group)
    return (len(members), [agent_key(a) for a in members])


def nonempty_subgroups(agents: Iterable[str]) -> list[frozenset[str]]:
    """All nonempty subsets, ordered by size and then by agent order."""
    ordered = sort_agents(agents)
    return [
        frozenset(c)
        for size in range(1, len(ordered) + 1)
        for c in combinations(ordered, size)
    ]


def proper_subgroups(group: Iterable[str]) -> list[frozenset[str]]:
    members = sort_agents(group)
    return [g for g in nonempty_subgroups(members) if len(g) < len(members)]


# -- partitions --------------------------------------------------------------

Partition = dict  # agent -> finite grade; ordered by the global agent order


def _compositions(k: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(k - first, parts - 1):
            yield (first, *rest)


def iter_partitions(k: Grade, group: Iterable[str]) -> Iterator[Partition]:
    """Lazily yield every way of dividing ``k`` among ``group``, lexicographically."""
    members = sort_agents(group)
    if not members:
        raise GradeError("partition of a grade requires a nonempty group")
    if k == OMEGA:
        raise GradeError("partition of infinite grade")
    check_grade(k)
    for values in _compositions(int(k), len(members)):
        yield dict(zip(members, values))


def partitions(k: Grade, group: Iterable[str]) -> list[Partition]:
    return list(iter_partitions(k, group))


def partition_sum(delta: Partition, subgroup: Iterable[str]) -> int:
    return sum(delta[i] for i in subgroup)


# -- text / JSON form --------------------------------------------------------

def grade_to_json(g: Grade) -> Union[int, str]:
    return "w" if g == OMEGA else int(g)


def grade_from_json(raw: object) -> Grade:
    if isinstance(raw, str):
        s = raw.strip()
        if s in ("w", "omega", "ω"):
            return OMEGA
        if s.isdigit():
            return int(s)
        raise GradeError(f"not a grade: {raw!r}")
    return check_grade(raw)


def format_grade(g: Grade) -> str:
    return str(grade_to_json(g))


def binomial_count(k: int, group_size: int) -> int:
    """Number of partitions of ``k`` among ``group_size`` agents (stars and bars)."""
    return math.comb(k + group_size - 1, group_size - 1)


def ordered_group(group: Iterable[str]) -> Sequence[str]:
    return tuple(sort_agents(group))
