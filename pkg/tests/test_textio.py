"""Model and relation text formats: parsing, rendering, round-trips."""

import pytest

from constr.corpus import FIXTURES, fixture_text
from constr.model import ParseError
from constr.textio import parse_model, parse_relation, render_model, render_relation
from constr.validity import GeneratorBounds, random_model


def test_fixture_files_round_trip():
    for f in FIXTURES:
        m = parse_model(fixture_text(f.model_file))
        again = parse_model(render_model(m))
        assert again.agents == m.agents
        assert again.states == m.states
        assert again.avail == m.avail
        assert again.outcome == m.outcome
        assert again.valuation == m.valuation


def test_random_models_round_trip():
    for i in range(80):
        m = random_model(GeneratorBounds(agents=1 + i % 3, states=1 + i % 4, actions=2), i)
        assert parse_model(render_model(m)) == m


def test_render_is_idempotent():
    text = fixture_text("exA.cgm")
    once = render_model(parse_model(text))
    assert render_model(parse_model(once)) == once


def test_comments_and_blanks_ignored():
    m = parse_model(
        "# header\n"
        "agents: a\n"
        "\n"
        "states: s0  # trailing comment\n"
        "actions s0 a: a1\n"
        "go s0 (a1) -> s0\n")
    assert m.states == ("s0",)


@pytest.mark.parametrize("line,fragment", [
    ("go s0 (a1,b1) -> s1\ngo s0 (a1,b1) -> s0", "duplicate go"),
    ("labels s9: p", "unknown state"),
    ("actions s0 z: z1", "unknown agent"),
    ("actions s1 a: a1 a1", "repeated action"),
    ("go s0 (a1) -> s1", "one action per agent"),
    ("nonsense here", "unrecognized"),
])
def test_parse_errors(line, fragment):
    base = "agents: a b\nstates: s0 s1\nactions s0 a: a1\nactions s0 b: b1\n"
    with pytest.raises(ParseError) as exc:
        parse_model(base + line + "\n")
    assert fragment in str(exc.value)


def test_declarations_must_come_first():
    with pytest.raises(ParseError):
        parse_model("labels s0: p\nagents: a\nstates: s0\n")


def test_duplicate_declarations_rejected():
    with pytest.raises(ParseError):
        parse_model("agents: a\nagents: b\nstates: s0\n")


def test_relation_round_trip():
    text = "s0 ~ t0\ns1 ~ t1\n"
    rel = parse_relation(text)
    assert rel == frozenset({("s0", "t0"), ("s1", "t1")})
    assert parse_relation(render_relation(rel)) == rel


def test_relation_checks_states_against_model():
    m = parse_model(fixture_text("exA.cgm"))
    with pytest.raises(ParseError):
        parse_relation("s0 ~ zz\n", m)


def test_relation_bad_syntax():
    with pytest.raises(ParseError):
        parse_relation("s0 t0\n")
