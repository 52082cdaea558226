"""The evaluation-committee scenario: four agents, one biconditional, split opinions."""
from __future__ import annotations

from itertools import product

from .formula import And, Atom, Box, Formula, Not, Tri, conj_all, disagree, iff
from .semantics import MAGBM, State

AGENTS = ("Ann", "Bob", "Cath", "John")
IN, ID, HI = Atom("in"), Atom("id"), Atom("hi")
RULE = iff(IN, And(ID, HI))


def shared_rule(k0: int = 1) -> Formula:
    return conj_all(Tri(a, k0, RULE) for a in AGENTS)


def opinions(k1: int = 1, k2: int = 1, k3: int = 1, k4: int = 1) -> Formula:
    return conj_all([
        Tri("Ann", k1, ID),
        Tri("Bob", k2, HI),
        Tri("Cath", k3, Not(ID)),
        Tri("John", k4, Not(HI)),
    ])


def premises(k0=1, k1=1, k2=1, k3=1, k4=1) -> Formula:
    return And(shared_rule(k0), opinions(k1, k2, k3, k4))


def claims(k0=1, k1=1, k2=1, k3=1, k4=1) -> dict:
    """The scenario's validity claims as ``name -> (formula, expected_valid)``."""
    pre = premises(k0, k1, k2, k3, k4)
    ab, cj = frozenset({"Ann", "Bob"}), frozenset({"Cath", "John"})
    everyone = frozenset(AGENTS)
    ab_grade = min(2 * k0, k1, k2) - 1
    cj_grade = min(2 * k0, k3 + k4) - 1
    strength = min(k1, k3) + min(k2, k4)

    def imp(b: Formula) -> Formula:
        return Not(And(pre, Not(b)))

    return {
        "ann_bob_include": (imp(Box(ab, ab_grade, IN)), True),
        "cath_john_exclude": (imp(Box(cj, cj_grade, Not(IN))), True),
        "ann_bob_disagree": (imp(disagree(ab, 1)), False),
        "cath_john_disagree": (imp(disagree(cj, 1)), False),
        "either_pair_disagrees": (
            imp(Not(And(Not(disagree(ab, 1)), Not(disagree(cj, 1))))), False),
        "all_disagree": (imp(disagree(everyone, strength)), True),
    }


def committee_model(k0=1, k1=1, k2=1, k3=1, k4=1, valuation=("in", "id", "hi")) -> MAGBM:
    """Designated state holding the premises' bases; context = all eight valuations, empty bases."""
    bases = {a: {RULE: k0} for a in AGENTS}
    bases["Ann"][ID] = k1
    bases["Bob"][HI] = k2
    bases["Cath"][Not(ID)] = k3
    bases["John"][Not(HI)] = k4
    designated = State(bases, frozenset(valuation))
    context = [
        State({}, frozenset(p for p, on in zip(("in", "id", "hi"), bits) if on))
        for bits in product((False, True), repeat=3)
    ]
    return MAGBM(AGENTS, designated, context)
