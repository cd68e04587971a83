"""Small reference machines used in tests, docs and the CLI examples."""
from __future__ import annotations

from .failure import FailureTransducer, with_failures
from .transducer import Transducer, make_transducer

# Spelling model: a, c spell x; b spells y; $ ends a word.
FIXTURE_V = """\
T pair
A $ a b c
O x y
I 0 - 1
E 2 - 1
arc 0 a 1 x 0.7
arc 0 b 1 y 1
arc 0 c 1 x 0.3
arc 1 $ 2 - 1
"""

# Back-off model over {x, y}: states 1 and 2 fall back to 0.
FIXTURE_F1 = """\
T weight-only
A x y
I 0 1
E 0 0.1
E 1 0.15
E 2 0.2
arc 0 x 1 0.6
arc 0 y 2 0.3
arc 1 x 1 0.4
arc 2 y 2 0.2
fail 1 0 1.5
fail 2 0 1
"""

# The same model with final output 0.3 at state 1; the worked evaluation
# examples (O("x") = 0.18, "a$" through the pipeline = 0.126) use it.  Its
# state 1 carries mass 1.15, so it is not stochastic.
FIXTURE_F1_EXAMPLE = FIXTURE_F1.replace("E 1 0.15", "E 1 0.3")


def fixture_v() -> Transducer:
    return make_transducer(
        ["$", "a", "b", "c"],
        [(0, "a", 1, ("x", 0.7)), (0, "b", 1, ("y", 1.0)), (0, "c", 1, ("x", 0.3)),
         (1, "$", 2, ("", 1.0))],
        {2: ("", 1.0)},
        output_labels=["x", "y"],
    )


def fixture_f1() -> FailureTransducer:
    t = make_transducer(
        ["x", "y"],
        [(0, "x", 1, 0.6), (0, "y", 2, 0.3), (1, "x", 1, 0.4), (2, "y", 2, 0.2)],
        {0: 0.1, 1: 0.15, 2: 0.2},
    )
    return with_failures(t, {1: (0, 1.5), 2: (0, 1.0)})


def fixture_f1_example() -> FailureTransducer:
    t = make_transducer(
        ["x", "y"],
        [(0, "x", 1, 0.6), (0, "y", 2, 0.3), (1, "x", 1, 0.4), (2, "y", 2, 0.2)],
        {0: 0.1, 1: 0.3, 2: 0.2},
    )
    return with_failures(t, {1: (0, 1.5), 2: (0, 1.0)})


def fixture_v_x_context() -> Transducer:
    """Star-ready spelling model where ``x`` is spelled ``ab``: the ``a`` arc
    carries no output, so its target only ever precedes an ``x``."""
    return make_transducer(
        ["$", "a", "b", "c"],
        [(0, "a", 1, ("", 1.0)), (1, "b", 2, ("x", 1.0)), (0, "c", 2, ("y", 1.0)),
         (2, "$", 3, ("", 1.0))],
        {3: ("", 1.0)},
        output_labels=["x", "y"],
    )


def fixture_f_y_only() -> FailureTransducer:
    """Stochastic model over {x, y} that never accepts ``x``."""
    t = make_transducer(["x", "y"], [(0, "y", 0, 0.5)], {0: 0.5})
    return with_failures(t, {})


def fixture_v_cyclic() -> Transducer:
    """Star-ready model with a loop: ``a b^n $`` spells ``x`` with weight 0.5^(n+1)."""
    return make_transducer(
        ["$", "a", "b"],
        [(0, "a", 1, ("x", 1.0)), (1, "b", 1, ("", 0.5)), (1, "$", 2, ("", 0.5))],
        {2: ("", 1.0)},
        output_labels=["x"],
    )


def fixture_f_single() -> FailureTransducer:
    """One-symbol back-off model over {x}."""
    t = make_transducer(["x"], [(0, "x", 1, 0.5), (1, "x", 1, 0.5)], {0: 0.5, 1: 0.5})
    return with_failures(t, {})


ALL_FIXTURES = {
    "v": fixture_v,
    "f1": fixture_f1,
    "f1-example": fixture_f1_example,
    "v-x-context": fixture_v_x_context,
    "f-y-only": fixture_f_y_only,
    "v-cyclic": fixture_v_cyclic,
    "f-single": fixture_f_single,
}
