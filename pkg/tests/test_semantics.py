from hypothesis import given, strategies as st

from lgdda.committee import AGENTS, committee_model
from lgdda.formula import BOTTOM, Atom, Box, Not, Tri, implies, parse
from lgdda.grades import OMEGA, grade_sum
from lgdda.semantics import (
    MAGBM,
    BeliefBase,
    State,
    accessible,
    check,
    disagreement_degree,
    eval_state,
    implausibility,
    merged_base,
)

from strategies import AGENTS as AB, GROUPS, magbms, outer_formulas, states

p, q = Atom("p"), Atom("q")
ID = Atom("id")


def test_belief_base_stores_positive_grades_only():
    base = BeliefBase({p: 2, q: 0})
    assert base[p] == 2 and base[q] == 0
    assert base.support == frozenset({p})
    assert BeliefBase({p: 1}) == BeliefBase([(p, 1)])


def test_eval_state_examples():
    s = State({"1": {p: 2}}, frozenset())
    assert eval_state(s, Tri("1", 2, p))
    assert not eval_state(s, Tri("1", 3, p))
    assert not eval_state(State({}, frozenset({"p"})), parse("~p & q"))


def test_merged_base_examples():
    s = State({"Ann": {ID: 1}, "Cath": {Not(ID): 1}}, frozenset())
    assert merged_base(s, {"Ann", "Cath"}) == BeliefBase({ID: 1, Not(ID): 1})
    s = State({"1": {p: 2}, "2": {p: 3}}, frozenset())
    assert merged_base(s, {"1", "2"}) == BeliefBase({p: 5})
    s = State({"1": {p: OMEGA}, "2": {p: 1}}, frozenset())
    assert merged_base(s, {"1", "2"})[p] == OMEGA


def test_implausibility_examples():
    s = State({"Ann": {ID: 1}, "Cath": {Not(ID): 1}}, frozenset())
    assert implausibility(s, State({}, frozenset({"id"})), {"Ann", "Cath"}) == 1
    empty = State({}, frozenset())
    assert implausibility(empty, State({}, frozenset({"p"})), {"1"}) == 0
    s = State({"1": {p: OMEGA}}, frozenset())
    assert implausibility(s, empty, {"1"}) == OMEGA


def test_check_on_committee_model():
    m = committee_model()
    assert check(m, parse("D{Ann Bob,0} in"))
    assert check(m, parse("D{Cath John,0} ~in"))
    assert check(MAGBM(AB, State({}, frozenset()), []), Box(frozenset(AB), 3, BOTTOM))


def test_disagreement_degree_examples():
    m = committee_model()
    assert disagreement_degree(m, AGENTS) == 2
    assert disagreement_degree(m, {"Ann", "Bob"}) == 0
    assert disagreement_degree(MAGBM(AB, State({}, frozenset()), []), {"1"}) == OMEGA


def test_disagreement_degree_asymmetric_committee():
    # strength min(k1, k3) + min(k2, k4)
    assert disagreement_degree(committee_model(1, 2, 1, 1, 2), AGENTS) == 2
    assert disagreement_degree(committee_model(2, 3, 1, 2, 2), AGENTS) == 3


def test_designated_state_is_not_added_to_context():
    s = State({}, frozenset({"p"}))
    m = MAGBM(AB, s, [State({}, frozenset())])
    assert not check(m, Box(frozenset({"1"}), 0, p))


@given(states(), states(), st.sampled_from(GROUPS), st.integers(0, 4), st.integers(0, 4))
def test_accessibility_is_monotone_in_grade(s, t, j, k, extra):
    if accessible(s, t, j, k):
        assert accessible(s, t, j, k + extra)


@given(states(), states(), st.sampled_from(GROUPS))
def test_implausibility_is_additive_over_agents(s, t, j):
    assert implausibility(s, t, j) == grade_sum(implausibility(s, t, {a}) for a in j)


@given(magbms(), outer_formulas(5), st.integers(0, 3))
def test_box_is_monotone_in_group(m, phi, k):
    small, big = frozenset({"1"}), frozenset(AB)
    assert check(m, implies(Box(small, k, phi), Box(big, k, phi)))


@given(magbms(), outer_formulas(5), st.integers(0, 3), st.integers(0, 3))
def test_box_is_monotone_in_grade(m, phi, k, low):
    j = frozenset(AB)
    if k >= low:
        assert check(m, implies(Box(j, k, phi), Box(j, low, phi)))


@given(magbms(), st.sampled_from(GROUPS))
def test_disagreement_degree_contract(m, j):
    degree = disagreement_degree(m, j)
    weight = grade_sum(g for g in merged_base(m.designated, j).values() if g != OMEGA)
    for k in range(1, weight + 3):
        holds = check(m, Box(j, k - 1, BOTTOM))
        assert holds == (degree >= k)
