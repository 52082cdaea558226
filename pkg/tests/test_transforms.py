import random

import pytest
from hypothesis import given

from lgdda.committee import AGENTS as COMMITTEE, claims, committee_model
from lgdda.formula import Atom, parse, subformula_closure
from lgdda.grades import OMEGA
from lgdda.kripke import DoxModel, eval_world, validate_ngdm, validate_qngdm, with_explicit_rho
from lgdda.semantics import MAGBM, State, check, implausibility
from lgdda.tableau import decide_formula
from lgdda.transforms import (
    TransformError,
    chi_atom,
    filtrate,
    magbm_to_qngdm,
    ngdm_to_magbm,
    qngdm_to_ngdm,
    transform,
)

from strategies import magbms, outer_formulas, qngdm_models

p = Atom("p")
ONE = frozenset({"1"})


def random_notional(rng, worlds, agents=("1", "2"), atoms=("p", "q")):
    names = tuple(f"x{i}" for i in range(worlds))
    candidates = [parse(t) for t in ("p", "q", "~p", "B{2,1} q")]
    dox = {}
    for a in agents:
        for w in names:
            dox[(a, w)] = {f: rng.randint(1, 2) for f in candidates if rng.random() < 0.3}
    valuation = {x: {w for w in names if rng.random() < 0.5} for x in atoms}
    return with_explicit_rho(DoxModel(agents, names, names[0], dox, valuation, None))


# -- filtration ----------------------------------------------------------------

def test_filtration_keeps_a_model_that_separates_everything():
    m = DoxModel(("1",), ("a", "b"), "a", {}, {"p": {"a"}}, {(ONE, "a", "b"): 0})
    out = filtrate(m, p)
    assert out.worlds == ("a", "b")
    assert out.valuation == {"p": frozenset({"a"})}
    assert out.rho == m.rho


def test_filtration_collapses_agreeing_worlds():
    m = DoxModel(("1",), ("a", "b"), "a", {}, {"p": {"a", "b"}}, {})
    assert filtrate(m, p).worlds == ("a",)


def test_filtration_of_five_world_model():
    phi = parse("D{1,1} p")
    assert len(subformula_closure(phi)) == 2
    rng = random.Random(7)
    m = next(m for m in (random_notional(rng, 5) for _ in range(100))
             if eval_world(m, m.designated, phi))
    out = filtrate(m, phi)
    assert len(out.worlds) <= 4
    assert eval_world(out, out.designated, phi)


def test_filtration_rejects_invalid_input():
    m = DoxModel(("1",), ("a",), "a", {("1", "a"): {p: 1}}, {}, {(ONE, "a", "a"): 0})
    with pytest.raises(TransformError):
        filtrate(m, p)


@given(qngdm_models(4), outer_formulas(6))
def test_filtration_preserves_subformulas(m, phi):
    out = filtrate(m, phi)
    assert validate_qngdm(out).ok
    assert len(out.worlds) <= 2 ** len(subformula_closure(phi))
    subs = list(subformula_closure(phi))
    classes = {tuple(eval_world(out, c, s) for s in subs) for c in out.worlds}
    for w in m.worlds:
        assert tuple(eval_world(m, w, s) for s in subs) in classes
    assert eval_world(out, out.designated, phi) == eval_world(m, m.designated, phi)


# -- quasi-notional to notional -------------------------------------------------

def test_isolated_world_copies():
    m = DoxModel(("1", "2"), ("w",), "w", {}, {}, {})
    out = qngdm_to_ngdm(m)
    assert len(out.worlds) == 3
    assert out.rho == {}
    assert validate_ngdm(out).ok
    # every distance stays omega because each copy is ruled out by an omega belief
    for a in ("1", "2"):
        for w in out.worlds:
            assert all(out.base(a, w)[Atom(chi_atom(u))] == OMEGA for u in out.worlds)


def test_agentless_model_is_already_notional():
    m = DoxModel((), ("w",), "w", {}, {"p": {"w"}}, {})
    out = qngdm_to_ngdm(m, p)
    assert out.worlds == ("w",)
    assert validate_ngdm(out).ok and eval_world(out, "w", p)


def test_characterizing_degree_fills_the_gap():
    m = DoxModel(("1",), ("w", "u"), "w", {("1", "w"): {p: 1}}, {}, {(ONE, "w", "u"): 2})
    out = qngdm_to_ngdm(m)
    assert out.base("1", "w@1")[Atom(chi_atom("u@1"))] == 1
    assert validate_ngdm(out).ok


def test_characterizing_atoms_are_distinct_for_lookalike_names():
    assert chi_atom("w0@1+2") != chi_atom("w0_1@2")
    assert chi_atom("a_b") != chi_atom("a-b")


def test_characterizing_atom_collision_is_an_error():
    m = DoxModel(("1",), ("w",), "w", {}, {chi_atom("w@1"): {"w"}}, {})
    with pytest.raises(TransformError, match="collide"):
        qngdm_to_ngdm(m)


@given(qngdm_models(3), outer_formulas(6))
def test_copy_construction_is_notional_and_preserves_truth(m, phi):
    out = qngdm_to_ngdm(m, phi)
    assert len(out.worlds) == len(m.worlds) * 3
    assert validate_ngdm(out).ok
    assert eval_world(out, out.designated, phi) == eval_world(m, m.designated, phi)


def test_extracted_models_become_notional():
    phi = parse("B{1,1} p & ~D{1 2,1} (q & B{2,1} q) & D{2,0} p")
    verdict = decide_formula(phi, extract=True)
    out = qngdm_to_ngdm(verdict.model, phi)
    assert validate_ngdm(out).ok
    assert eval_world(out, out.designated, phi)


# -- belief-base models -----------------------------------------------------------

def test_one_world_notional_model_to_belief_bases():
    m = DoxModel(("1",), ("w",), "w", {}, {"p": {"w"}}, None)
    out = ngdm_to_magbm(m)
    assert out.designated.valuation == frozenset({"p"})
    assert len(out.context) == 1


def test_duplicate_worlds_give_duplicate_context_states():
    m = DoxModel(("1",), ("a", "b"), "a", {("1", "a"): {p: 1}, ("1", "b"): {p: 1}},
                 {"p": {"a", "b"}}, None)
    out = ngdm_to_magbm(m)
    assert out.context[0] == out.context[1]
    for phi in ("D{1,0} p", "B{1,1} p", "~D{1,0} ~p"):
        assert check(out, parse(phi)) == eval_world(m, "a", parse(phi))


def test_ngdm_to_magbm_rejects_non_notional_tables():
    m = DoxModel(("1",), ("w",), "w", {}, {}, {(ONE, "w", "w"): 3})
    with pytest.raises(TransformError):
        ngdm_to_magbm(m)


def test_empty_context_gives_isolated_world():
    out = magbm_to_qngdm(MAGBM(("1",), State({}, frozenset()), []))
    assert out.worlds == ("s_designated",)
    assert out.rho == {}
    assert validate_qngdm(out).ok


def test_designated_state_in_context_keeps_self_distance():
    s = State({"1": {p: 2}}, frozenset())
    m = MAGBM(("1",), s, [s])
    out = magbm_to_qngdm(m)
    assert out.worlds == ("s0",)
    assert out.distance(ONE, "s0", "s0") == implausibility(s, s, ONE) == 2


def test_committee_round_trip_reproduces_verdicts():
    m = committee_model()
    kripke = magbm_to_qngdm(m)
    assert len(kripke.worlds) == 9
    assert validate_qngdm(kripke).ok
    for phi, _ in claims().values():
        assert eval_world(kripke, kripke.designated, phi) == check(m, phi)
    back = transform(kripke, "qngdm", "magbm")
    for phi, _ in claims().values():
        assert check(back, phi) == check(m, phi)
    assert set(back.agents) == set(COMMITTEE)


@given(magbms(3), outer_formulas(6))
def test_belief_base_models_survive_the_cycle(m, phi):
    kripke = magbm_to_qngdm(m)
    assert validate_qngdm(kripke).ok
    expected = check(m, phi)
    assert eval_world(kripke, kripke.designated, phi) == expected
    again = transform(kripke, "qngdm", "magbm", phi)
    assert check(again, phi) == expected


def test_transform_rejects_unknown_kinds():
    with pytest.raises(TransformError):
        transform(None, "qngdm", "kripke")
