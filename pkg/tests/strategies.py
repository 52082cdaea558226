"""Hypothesis strategies for formulas, belief bases and models."""
from hypothesis import strategies as st

from lgdda.formula import And, Atom, Box, Not, Tri
from lgdda.grades import OMEGA, nonempty_subgroups
from lgdda.kripke import DoxModel, derived_rho
from lgdda.semantics import MAGBM, BeliefBase, State

AGENTS = ("1", "2")
ATOMS = ("p", "q")
GROUPS = nonempty_subgroups(AGENTS)

grades = st.one_of(st.integers(0, 4), st.just(OMEGA))
positive_grades = st.one_of(st.integers(1, 3), st.just(OMEGA))


def inner_formulas(max_leaves: int = 6):
    atoms = st.sampled_from(ATOMS).map(Atom)
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            sub.map(Not),
            st.builds(And, sub, sub),
            st.builds(Tri, st.sampled_from(AGENTS), st.integers(1, 3), sub),
        ),
        max_leaves=max_leaves,
    )


def outer_formulas(max_leaves: int = 8):
    return st.recursive(
        inner_formulas(3),
        lambda sub: st.one_of(
            sub.map(Not),
            st.builds(And, sub, sub),
            st.builds(Box, st.sampled_from(GROUPS), st.integers(0, 3), sub),
        ),
        max_leaves=max_leaves,
    )


def belief_bases(max_size: int = 3):
    return st.dictionaries(inner_formulas(3), positive_grades, max_size=max_size).map(BeliefBase)


def valuations():
    return st.frozensets(st.sampled_from(ATOMS))


@st.composite
def states(draw):
    return State({a: draw(belief_bases()) for a in AGENTS}, draw(valuations()))


@st.composite
def magbms(draw, max_context: int = 4):
    context = draw(st.lists(states(), max_size=max_context))
    if context and draw(st.booleans()):
        designated = draw(st.sampled_from(context))
    else:
        designated = draw(states())
    return MAGBM(AGENTS, designated, context)


@st.composite
def ngdm_models(draw, max_worlds: int = 3):
    """Models with distances derived from beliefs (``rho=None``)."""
    n = draw(st.integers(1, max_worlds))
    worlds = tuple(f"w{i}" for i in range(n))
    dox = {(a, w): draw(belief_bases(2)) for a in AGENTS for w in worlds}
    valuation = {p: draw(st.frozensets(st.sampled_from(worlds))) for p in ATOMS}
    return DoxModel(AGENTS, worlds, worlds[0], dox, valuation, None)


@st.composite
def qngdm_models(draw, max_worlds: int = 3):
    """Explicit distance tables satisfying both quasi-notional conditions.

    Each agent's distance is its derived distance plus slack (or omega); a
    group's distance is the sum over members, with extra slack (or omega) on
    the whole agent set only, which keeps a partition witness available.
    """
    base = draw(ngdm_models(max_worlds))
    everyone = frozenset(AGENTS)
    rho = {}
    for w in base.worlds:
        for u in base.worlds:
            single = {}
            for a in AGENTS:
                if draw(st.integers(0, 4)) == 0:
                    single[a] = OMEGA
                else:
                    single[a] = derived_rho(base, {a}, w, u) + draw(st.integers(0, 2))
            for j in GROUPS:
                d = sum(single[a] for a in j)
                if j == everyone and d != OMEGA:
                    d = OMEGA if draw(st.integers(0, 5)) == 0 else d + draw(st.integers(0, 2))
                rho[(j, w, u)] = d
    return DoxModel(base.agents, base.worlds, base.designated, base.dox, base.valuation, rho)
