"""Subsequential failure-transducer algebra.

Evaluation and expansion of failure transducers, composition with
word-and-weight transducers, Kleene star, a specialized composition that only
builds co-accessible states, and weight pushing in the plus-times and
max-times semirings.
"""
from .algebra import EPSILON, PAIR, PAIR_ONE, WEIGHT, PairOutput, SemiringTag, monoid_product, semiring_sum
from .compose import compose, verify_composition
from .errors import FstError
from .failure import (
    FailureTransducer,
    as_failure,
    check_monotonic,
    completed_run,
    completed_step,
    enumerate_failure,
    expand,
    has_failure_cycles,
    level,
    output_of_failure,
    remove_failure_cycles,
    signature,
    with_failures,
)
from .push import (
    augment_graph,
    build_cloned_graph,
    push,
    push_weights,
    state_sums,
    state_sums_max,
    state_sums_plus,
    truncate_at_s1,
)
from .specialized import compose_specialized, e_map, partition_states
from .star import StarReadyTransducer, add_end_marker, normalize_for_star, star
from .textformat import dumps, loads
from .transducer import (
    Transducer,
    accessible_states,
    check_canonical,
    check_conditional_probabilistic,
    check_probabilistic,
    check_stochastic,
    coaccessible_states,
    enumerate_outputs,
    make_transducer,
    output_of,
    run,
    trim,
)

__version__ = "0.1.0"
