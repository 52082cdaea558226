import pytest
from hypothesis import given, strategies as st

from lgdda.formula import BOTTOM, Atom, Box, Not, Tri, modal_depth, parse, size
from lgdda.grades import OMEGA
from lgdda.kripke import eval_world, validate_qngdm
from lgdda.semantics import check
from lgdda.tableau import (
    ResourceLimitError,
    TableauConfig,
    TraceError,
    box_elim,
    decide_formula,
    decide_node,
    extract_model,
    is_satisfiable,
    is_valid,
    residual,
)

from strategies import magbms, outer_formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")
ONE, BOTH = frozenset({"1"}), frozenset({"1", "2"})


def dens(node, negbox):
    return {(tuple(sorted(d.witness.items())), frozenset(d.formulas)) for d in box_elim(node, negbox)}


# -- the elimination rule --------------------------------------------------------

def test_box_elim_with_nothing_else():
    negbox = Not(Box(ONE, 0, p))
    assert dens({negbox}, negbox) == {((("1", 0),), frozenset({Not(p)}))}


def test_box_elim_keeps_triangles_that_do_not_fit():
    negbox = Not(Box(ONE, 0, q))
    node = {Tri("1", 1, p), negbox}
    assert [d.formulas for d in box_elim(node, negbox)] == [frozenset({Not(q), p})]


def test_box_elim_two_agents():
    negbox = Not(Box(BOTH, 1, q))
    node = {Box(ONE, 1, r), Tri("1", 1, p), negbox}
    found = {d.formulas for d in box_elim(node, negbox)}
    assert found == {frozenset({Not(q), r}), frozenset({Not(q), r, p})}
    witnesses = {tuple(sorted(d.witness.items())) for d in box_elim(node, negbox)}
    assert (("1", 1), ("2", 0)) in witnesses


def test_box_elim_ignores_boxes_of_wider_groups_and_other_agents():
    negbox = Not(Box(ONE, 2, q))
    node = {Box(BOTH, 5, r), Tri("2", 1, p), negbox}
    assert [d.formulas for d in box_elim(node, negbox)] == [frozenset({Not(q)})]


def test_box_elim_always_keeps_omega_triangles():
    negbox = Not(Box(ONE, 3, q))
    node = {Tri("1", OMEGA, p), negbox}
    assert all(p in d.formulas for d in box_elim(node, negbox))


def test_box_elim_requires_a_negated_box_in_the_node():
    with pytest.raises(ValueError):
        box_elim({p}, Not(Box(ONE, 0, p)))


# -- decisions -------------------------------------------------------------------

@pytest.mark.parametrize(
    "formulas, expected",
    [
        ([Tri("1", 2, p), Not(Tri("1", 1, p))], False),
        ([Tri("1", 1, p), Tri("1", 1, Not(p))], True),
        ([Not(Box(ONE, 0, p)), Tri("1", 1, p)], False),
        ([Not(Tri("1", 2, p)), Tri("1", 1, p)], True),
        ([Not(parse("true"))], False),
        ([p, Not(p)], False),
        ([], True),
    ],
)
def test_decide_node_examples(formulas, expected):
    sat, _, _ = decide_node(formulas)
    assert sat == expected


def test_decide_formula_examples():
    assert decide_formula(parse("B{1,3} p -> B{1,1} p"), "valid").result == "valid"
    assert decide_formula(parse("B{1,1} p -> B{1,3} p"), "valid").result == "invalid"
    assert decide_formula(parse("p & ~p"), "sat").result == "unsat"
    with pytest.raises(ValueError):
        decide_formula(p, "prove")


def test_countermodels_refute_the_formula():
    phi = parse("D{1,1} p -> D{1,0} (p & q)")
    verdict = decide_formula(phi, "valid", extract=True)
    assert verdict.result == "invalid"
    assert not eval_world(verdict.model, verdict.model.designated, phi)


# -- model extraction --------------------------------------------------------------

def test_extract_without_boxes():
    _, trace, _ = decide_node([p, Tri("1", 1, q)])
    m = extract_model(trace)
    assert m.worlds == ("w0",)
    assert m.valuation == {"p": frozenset({"w0"})}
    assert m.base("1", "w0")[q] == 1
    assert m.rho == {}


def test_extract_one_successor():
    _, trace, _ = decide_node([Not(Box(ONE, 1, p))])
    m = extract_model(trace)
    assert m.worlds == ("w0", "w0_1")
    assert m.rho == {(ONE, "w0", "w0_1"): 1}
    assert not eval_world(m, "w0_1", p)


def test_extract_with_dropped_triangle():
    _, trace, _ = decide_node([Tri("1", 1, p), Not(Box(ONE, 1, BOTTOM))])
    m = extract_model(trace)
    assert m.distance(ONE, "w0", "w0_1") == 1
    assert validate_qngdm(m).ok


def test_extract_needs_an_open_trace():
    with pytest.raises(TraceError):
        extract_model(None)


# -- budgets and ordering ----------------------------------------------------------

def test_depth_budget_is_an_error_not_a_verdict():
    phi = parse("~D{1,0} ~(p & ~D{1,0} q)")
    with pytest.raises(ResourceLimitError):
        decide_formula(phi, config=TableauConfig(max_depth=1))
    assert decide_formula(phi, config=TableauConfig(max_depth=2)).result == "sat"


def test_denominator_budget():
    phi = parse("~D{1 2,3} p & ~D{1 2,3} q & D{1,0} (p & q) & D{2,0} p & D{2,0} q")
    with pytest.raises(ResourceLimitError):
        decide_formula(phi, config=TableauConfig(max_denominators=1))


@given(outer_formulas(8), st.integers(0, 1000))
def test_negated_box_order_does_not_change_verdicts(phi, seed):
    plain = decide_formula(phi).result
    shuffled = decide_formula(phi, config=TableauConfig(order_seed=seed)).result
    assert plain == shuffled


# -- properties --------------------------------------------------------------------

@given(outer_formulas(10))
def test_sat_verdicts_come_with_checked_models(phi):
    verdict = decide_formula(phi, extract=True)
    assert verdict.stats.max_depth <= modal_depth(phi) + 1
    if verdict.result == "sat":
        m = verdict.model
        assert eval_world(m, m.designated, phi)
        assert validate_qngdm(m).ok


@given(magbms(3), outer_formulas(6))
def test_true_in_a_belief_base_model_means_satisfiable(m, phi):
    if check(m, phi):
        assert is_satisfiable(phi)
    else:
        assert not is_valid(phi)


@given(outer_formulas(8))
def test_denominators_are_smaller_than_their_numerator(phi):
    _, trace, _ = decide_node([phi])
    stack = [trace] if trace is not None else []
    while stack:
        t = stack.pop()
        for negbox, den, child in t.successors:
            numerator = sum(size(f) for f in t.literals)
            assert sum(size(f) for f in den.formulas) < numerator
            stack.append(child)


@given(
    st.lists(st.tuples(st.sampled_from(["1", "2"]), st.integers(1, 3), st.sampled_from("pqr")),
             max_size=5),
    st.sets(st.sampled_from("pqr")),
    st.sets(st.sampled_from("pqr")),
)
def test_enlarging_the_kept_set_never_raises_the_residual(tris, kept, more):
    node = [Tri(i, k, Atom(a)) for i, k, a in tris]
    small = {Atom(a) for a in kept}
    large = small | {Atom(a) for a in more}
    for agent in ("1", "2"):
        assert residual(node, agent, large) <= residual(node, agent, small)


def test_stats_are_recorded():
    verdict = decide_formula(parse("~D{1,1} p & ~D{2,0} q"))
    stats = verdict.stats.as_dict()
    assert stats["nodes"] == 3 and stats["max_depth"] == 1
    assert stats["denominators"] >= 2 and stats["peak_live"] > 0
