import pytest

from failfst import fixtures
from failfst.compose import compose
from failfst.errors import FormatSyntaxError, InvariantViolation
from failfst.failure import FailureTransducer
from failfst.generators import random_failure_transducer, random_spelling_model
from failfst.specialized import compose_specialized
from failfst.star import normalize_for_star, star
from failfst.textformat import dumps, loads
from failfst.transducer import check_stochastic
from failfst.failure import expand


def test_parse_f1():
    m = loads(fixtures.FIXTURE_F1)
    assert isinstance(m, FailureTransducer) and m.num_states == 3
    assert m == fixtures.fixture_f1()
    assert check_stochastic(expand(m)).passed


def test_fixture_v_body():
    text = dumps(fixtures.fixture_v())
    assert len(text.splitlines()) == 9
    assert loads(fixtures.FIXTURE_V) == fixtures.fixture_v()


@pytest.mark.parametrize("name", sorted(fixtures.ALL_FIXTURES))
def test_round_trip_fixtures(name):
    m = fixtures.ALL_FIXTURES[name]()
    text = dumps(m)
    assert dumps(loads(text)) == text


def test_round_trip_derived(v, f1, rng):
    vn = normalize_for_star(v)
    for m in (star(vn), compose(star(vn), f1), compose(star(vn), f1, accessible_only=False),
              compose_specialized(vn, f1), normalize_for_star(random_spelling_model(rng)).base,
              random_failure_transducer(rng)):
        text = dumps(m)
        back = loads(text)
        assert dumps(back) == text
        assert back.arcs == m.arcs and back.finals == m.finals and back.num_states == m.num_states


def test_equal_machines_equal_bytes(f1):
    assert dumps(f1) == dumps(fixtures.fixture_f1())


def test_comments_and_blank_lines():
    m = loads("# model\nT weight-only\n\nA a  # one symbol\nI 0 1\nE 0 0.5\narc 0 a 0 0.5\n")
    assert m.arcs[0][0] == (0, 0.5)


@pytest.mark.parametrize("text, lineno", [
    ("T weight-only\nA a\nI 0 1\narc 0 a 0 0.5\narc 0 a 0 0.25\n", 5),
    ("T weight-only\nA a\nI 0 1\narc 0 b 0 0.5\n", 4),
    ("T tropical\n", 1),
    ("arc 0 a 0 1\n", 1),
    ("T weight-only\nA a\nI 0 1\nbogus 1\n", 4),
    ("T weight-only\nA a\nI zero 1\n", 3),
    ("T pair\nA a\nO x\nI 0 1\n", 4),
])
def test_syntax_errors(text, lineno):
    with pytest.raises(FormatSyntaxError) as info:
        loads(text)
    assert info.value.lineno == lineno
    assert str(info.value).startswith("syntax-error: line")


def test_negative_weight():
    with pytest.raises(InvariantViolation):
        loads("T weight-only\nA a\nI 0 1\narc 0 a 0 -0.1\n")


def test_missing_initial():
    with pytest.raises(FormatSyntaxError):
        loads("T weight-only\nA a\n")


def test_scientific_notation():
    assert loads("T weight-only\nA a\nI 0 1\nE 0 1e-3\n").finals == {0: 0.001}
