"""Game model structure: validation, joint actions, merge, outcome sets."""

import pytest

from constr.corpus import fixture_model, fixture_text
from constr.model import (
    InputError,
    JointAction,
    disjoint_union,
    joint_actions,
    merge,
    outcome_set,
    validate_model,
)
from constr.textio import parse_model
from constr.validity import GeneratorBounds, random_model

from oracles import brute_outcome_set, joint_assignments


def ja(state, **moves):
    return JointAction.of(state, moves)


def test_corpus_models_validate_clean():
    for name in ("ex1", "ex2", "exA", "exB", "exC", "antimono"):
        assert validate_model(fixture_model(name)) == []


def test_empty_action_set_reported():
    m = parse_model("agents: a\nstates: s0\n")
    kinds = {v.kind for v in validate_model(m)}
    assert "empty action set" in kinds


def test_missing_outcome_reported():
    # drop one edge from the first corpus model
    text = fixture_text("ex1.cgm").replace("go s0 (a2,b1) -> s3\n", "")
    m = parse_model(text)
    report = validate_model(m)
    assert any(v.kind == "outcome not total" and v.state == "s0"
               and v.profile == ("a2", "b1") for v in report)


def test_unavailable_profile_reported():
    text = fixture_text("ex1.cgm") + "go s1 (a9,b1) -> s1\n"
    m = parse_model(text)
    assert any(v.kind == "unavailable profile" for v in validate_model(m))


def test_unknown_target_is_parse_error():
    with pytest.raises(InputError):
        parse_model("agents: a\nstates: s0\nactions s0 a: a1\ngo s0 (a1) -> s9\n")


def test_joint_actions_shapes():
    m = fixture_model("ex2")
    singles = joint_actions(m, frozenset("a"), "s0")
    assert {j.assignment["a"] for j in singles} == {"a1", "a2", "a3"}
    assert joint_actions(m, frozenset(), "s0") == {ja("s0")}
    m1 = fixture_model("ex1")
    assert len(joint_actions(m1, frozenset("ab"), "s0")) == 4


def test_joint_actions_rejects_unknowns():
    m = fixture_model("ex1")
    with pytest.raises(InputError):
        joint_actions(m, frozenset("a"), "nowhere")
    with pytest.raises(InputError):
        joint_actions(m, frozenset("z"), "s0")


def test_merge_rules():
    left = ja("s0", a="a1")
    right = ja("s0", b="b2")
    assert merge(left, right) == ja("s0", a="a1", b="b2")
    # second argument contained in the first: the first wins outright
    big = ja("s0", a="a1", b="b1")
    assert merge(big, ja("s0", b="b2")) == big
    # overlap resolves in favour of the first argument
    overlapped = merge(ja("s0", a="a1"), ja("s0", a="a2", b="b1"))
    assert overlapped.assignment == {"a": "a1", "b": "b1"}
    assert merge(left, left) == left
    with pytest.raises(InputError):
        merge(ja("s0", a="a1"), ja("s1", b="b1"))


def test_outcome_set_matches_figures():
    m = fixture_model("ex1")
    assert outcome_set(m, "s0", ja("s0", a="a1")) == {"s1", "s2"}
    assert outcome_set(m, "s0", ja("s0")) == {"s1", "s2", "s3", "s4"}
    assert outcome_set(m, "s0", ja("s0", a="a1", b="b2")) == {"s2"}


def test_outcome_set_input_errors():
    m = fixture_model("ex1")
    with pytest.raises(InputError):
        outcome_set(m, "s1", ja("s0", a="a1"))
    with pytest.raises(InputError):
        outcome_set(m, "s0", ja("s0", a="a7"))


def test_outcome_set_equals_brute_union():
    for i in range(60):
        m = random_model(GeneratorBounds(agents=2, states=1 + i % 4, actions=2), 500 + i)
        for state in m.states:
            for coalition in (frozenset(), frozenset("a"), frozenset("b"), frozenset("ab")):
                for assignment in joint_assignments(m, state, coalition):
                    got = outcome_set(m, state, JointAction.of(state, assignment))
                    assert got == brute_outcome_set(m, state, assignment)


def test_extending_coalition_shrinks_outcomes():
    for i in range(40):
        m = random_model(GeneratorBounds(agents=3, states=3, actions=2), 900 + i)
        for state in m.states:
            for partial in joint_assignments(m, state, frozenset("a")):
                wide = outcome_set(m, state, JointAction.of(state, partial))
                for extended in joint_assignments(m, state, frozenset("ab")):
                    if extended["a"] == partial["a"]:
                        narrow = outcome_set(m, state, JointAction.of(state, extended))
                        assert narrow <= wide


def test_disjoint_union_keeps_structure():
    m1 = fixture_model("ex1")
    u = disjoint_union(m1, m1, "L.", "R.")
    assert validate_model(u) == []
    assert len(u.states) == 2 * len(m1.states)
    assert outcome_set(u, "L.s0", JointAction.of("L.s0", {"a": "a1"})) == {"L.s1", "L.s2"}


def test_disjoint_union_rejects_collisions():
    m1 = fixture_model("ex1")
    with pytest.raises(InputError):
        disjoint_union(m1, m1)
