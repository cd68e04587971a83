import pytest

from failfst.algebra import PairOutput, SemiringTag
from failfst.errors import EmptyMachine, InvariantViolation
from failfst.transducer import (
    accessible_states,
    check_canonical,
    check_conditional_probabilistic,
    check_probabilistic,
    check_stochastic,
    coaccessible_states,
    enumerate_outputs,
    enumeration,
    make_transducer,
    output_of,
    run,
    trim,
)

from conftest import word


@pytest.fixture
def chain():
    return make_transducer(["a", "b"], [(0, "a", 1, 0.5), (1, "b", 2, 0.4)], {2: 0.5})


def test_run(chain):
    assert run(chain, 1, ()) == (1, 1.0)
    q, w = run(chain, 0, word(chain, "ab"))
    assert q == 2 and w == pytest.approx(0.2)
    assert run(chain, 0, word(chain, "ba")) is None


def test_run_rejects_foreign_symbols(chain):
    with pytest.raises(ValueError):
        run(chain, 0, (7,))


def test_output_of(chain):
    assert output_of(chain, word(chain, "ab")) == pytest.approx(0.1)
    assert output_of(chain, word(chain, "a")) is None
    t = make_transducer(["a"], [], {0: 0.1})
    assert output_of(t, ()) == 0.1


def test_enumerate(chain, v):
    got = enumerate_outputs(chain, 2)
    assert [(e.input, round(e.value, 12)) for e in got] == [((0, 1), 0.1)]
    assert enumerate_outputs(chain, 0) == []
    entries = enumerate_outputs(v, 2)
    assert [e.input for e in entries] == [word(v, "a$"), word(v, "b$"), word(v, "c$")]
    assert [e.value for e in entries] == [PairOutput((0,), 0.7), PairOutput((1,), 1.0), PairOutput((0,), 0.3)]


def test_duplicate_arc_rejected():
    with pytest.raises(InvariantViolation):
        make_transducer(["a"], [(0, "a", 1, 0.5), (0, "a", 0, 0.5)], {1: 1.0})


def test_coaccessible_and_trim(chain):
    t = make_transducer(["a", "b"], [(0, "a", 1, 0.5), (1, "b", 2, 0.4), (0, "b", 3, 1.0), (4, "a", 2, 1.0)],
                        {2: 0.5})
    assert coaccessible_states(t) == {0, 1, 2, 4}
    assert accessible_states(t) == {0, 1, 2, 3}
    tt = trim(t)
    assert tt.num_states == 3
    assert enumerate_outputs(tt, 6) == enumerate_outputs(t, 6)
    assert trim(chain) is chain
    assert coaccessible_states(make_transducer(["a"], [(0, "a", 1, 1.0)], {})) == set()
    with pytest.raises(EmptyMachine):
        trim(make_transducer(["a"], [(0, "a", 1, 1.0)], {}))


def test_check_stochastic():
    ok = make_transducer(["a", "b"], [(0, "a", 1, 0.6), (0, "b", 1, 0.3)], {0: 0.1, 1: 1.0})
    rep = check_stochastic(ok)
    assert rep.passed and rep.residuals[0] == pytest.approx(0.0, abs=1e-15)
    bad = make_transducer(["a"], [(0, "a", 1, 0.5)], {1: 1.0})
    rep = check_stochastic(bad)
    assert not rep.passed and rep.residuals[0] == pytest.approx(0.5) and rep.witnesses == [0]


def test_check_probabilistic():
    single = make_transducer(["a", "b"], [(0, "a", 1, 1.0), (1, "b", 2, 1.0)], {2: 1.0})
    rep = check_probabilistic(single, 4)
    assert rep.passed and rep.total == 1.0
    over = make_transducer(["a", "b"], [(0, "a", 1, 0.6), (0, "b", 1, 0.6)], {1: 1.0})
    rep = check_probabilistic(over, 4)
    assert not rep.passed and rep.total == pytest.approx(1.2)


def test_check_probabilistic_incomplete_is_partial():
    loop = make_transducer(["a"], [(0, "a", 0, 0.5)], {0: 0.5})
    rep = check_probabilistic(loop, 5)
    assert rep.passed and rep.inconclusive and rep.total == pytest.approx(1 - 0.5 ** 6)


def test_check_conditional_probabilistic(v):
    rep = check_conditional_probabilistic(v, 4)
    assert rep.passed
    assert rep.groups[(0,)] == pytest.approx(1.0) and rep.groups[(1,)] == 1.0
    half = make_transducer(["a", "$"], [(0, "a", 1, ("x", 0.5)), (1, "$", 2, ("", 1.0))], {2: ("", 1.0)},
                           output_labels=["x"])
    rep = check_conditional_probabilistic(half, 4)
    assert not rep.passed and rep.witnesses == [(0,)]


def test_check_canonical():
    stoch = make_transducer(["a", "b"], [(0, "a", 1, 0.6), (0, "b", 1, 0.3)], {0: 0.1, 1: 1.0})
    assert check_canonical(stoch, SemiringTag.PLUS, 6)
    heavy = make_transducer(["a"], [(0, "a", 1, 2.0)], {1: 1.0})
    assert not check_canonical(heavy, SemiringTag.PLUS, 6)
    assert not check_canonical(heavy, SemiringTag.MAX, 6)
    unit = make_transducer(["a"], [], {0: 1.0})
    rep = check_canonical(unit, SemiringTag.MAX, 3)
    assert rep.passed and rep.residuals == {0: 0.0}


def test_enumeration_frontier_marks_horizon():
    loop = make_transducer(["a"], [(0, "a", 0, 0.5)], {0: 0.5})
    en = enumeration(loop, 2)
    assert not en.complete and [w for w, _ in en.frontier] == [(0, 0)]
