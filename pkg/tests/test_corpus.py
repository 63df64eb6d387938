"""The embedded fixtures and their frozen expectations."""

from constr.corpus import (
    CORE_MODEL_NAMES,
    FIXTURES,
    corpus_models,
    core_models,
    fixture_model,
    fixture_relation,
    run_corpus,
)
from constr.model import validate_model


def test_every_fixture_model_validates():
    for name, model in corpus_models().items():
        assert validate_model(model) == [], name


def test_core_model_roster():
    assert CORE_MODEL_NAMES == ("ex1", "ex2", "exA", "exB", "exC", "antimono")
    assert set(core_models()) == set(CORE_MODEL_NAMES)
    assert len(corpus_models()) == len(FIXTURES) == 7


def test_union_fixtures_carry_relations():
    for name in ("exA", "exB", "exC"):
        rel = fixture_relation(name)
        assert ("s0", "t0") in rel


def test_run_corpus_all_pass():
    report = run_corpus()
    assert report.ok, "\n".join(report.lines())
    # every fixture contributes at least a validation line and one check
    names = {r.fixture for r in report.results}
    assert names == {f.name for f in FIXTURES}
    assert len(report.results) >= 25


def test_report_json_shape():
    data = run_corpus().to_json()
    assert data["ok"] is True
    assert all({"fixture", "description", "passed", "detail"} <= set(c) for c in data["checks"])


def test_antimono_model_shape():
    m = fixture_model("antimono")
    assert m.agents == ("a", "b", "c")
    assert m.avail[("s0", "a")] == ("a1",)
    assert len(m.avail[("s0", "b")]) == 2
