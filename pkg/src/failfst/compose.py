"""Composition of a word-and-weight transducer with a weighted failure
transducer, plus a brute-force verifier of the result."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .algebra import PAIR, WEIGHT, Word
from .errors import AlphabetMismatch, FailureCycle, InitialUndefined
from .failure import (
    FailureTransducer,
    completed_run,
    enumerate_failure,
    has_failure_cycles,
    output_of_failure,
)
from .symbols import translation
from .transducer import Arc, CheckReport, Transducer, enumerate_outputs


def output_translation(t: Transducer, ft: Transducer) -> Tuple[int, ...]:
    """Ids of ``t``'s output alphabet expressed in ``ft``'s input alphabet."""
    try:
        return translation(t.output_labels, ft.input_labels)
    except KeyError as e:
        raise AlphabetMismatch(f"output label {e.args[0]!r} is not in the right operand's alphabet") from None


def compose(t: Transducer, ft: FailureTransducer, accessible_only: bool = True) -> FailureTransducer:
    """Build ``t o ft``.

    States are pairs ``(p1, p2)``.  An arc of ``t`` with empty output word
    keeps ``p2``; one whose word starts with ``w`` exists only where ``ft`` has
    an explicit ``w`` arc at ``p2`` and the whole word can be read through
    completed steps.  Failure arcs act on the right coordinate only.

    With ``accessible_only`` the pairs reachable from the initial pair through
    transitions and failure arcs are built; otherwise all of ``Q1 x Q2``.
    """
    if t.kind != PAIR.kind or ft.kind != WEIGHT.kind:
        raise ValueError("compose expects a pair transducer and a weight-only failure transducer")
    if has_failure_cycles(ft):
        raise FailureCycle("the right operand has failure cycles")
    tr = output_translation(t, ft)

    def walk(p2: int, word: Word) -> Optional[Arc]:
        return completed_run(ft, p2, tuple(tr[o] for o in word))

    iota_word, iota_w = t.initial_output
    start = walk(ft.initial, iota_word)
    if start is None:
        raise InitialUndefined("the initial output word cannot be read by the right operand")
    s2, init_lam = start
    iota = iota_w * ft.initial_output * init_lam

    ids: Dict[Tuple[int, int], int] = {}
    pairs: List[Tuple[int, int]] = []

    def state(pair: Tuple[int, int]) -> int:
        if pair not in ids:
            ids[pair] = len(pairs)
            pairs.append(pair)
            queue.append(pair)
        return ids[pair]

    queue: deque = deque()
    state((t.initial, s2))
    if not accessible_only:
        for p1 in range(t.num_states):
            for p2 in range(ft.num_states):
                state((p1, p2))

    arcs: Dict[int, Dict[int, Arc]] = {}
    finals: Dict[int, float] = {}
    failures: Dict[int, Arc] = {}
    while queue:
        p1, p2 = pair = queue.popleft()
        q = ids[pair]
        row: Dict[int, Arc] = {}
        for a, (q1, (beta, o1)) in t.arcs[p1].items():
            if not beta:
                row[a] = (state((q1, p2)), o1)
            elif tr[beta[0]] in ft.arcs[p2]:
                res = walk(p2, beta)
                if res is not None:
                    q2, o2 = res
                    row[a] = (state((q1, q2)), o1 * o2)
        arcs[q] = row
        if p1 in t.finals:
            alpha, o1 = t.finals[p1]
            res = walk(p2, alpha)
            if res is not None and res[0] in ft.finals:
                finals[q] = o1 * res[1] * ft.finals[res[0]]
        if p2 in ft.failures:
            r2, phi = ft.failures[p2]
            failures[q] = (state((p1, r2)), phi)

    n = len(pairs)
    return FailureTransducer(
        input_labels=t.input_labels,
        kind=WEIGHT.kind,
        num_states=n,
        initial=0,
        arcs=tuple(arcs[i] for i in range(n)),
        initial_output=iota,
        finals=finals,
        failures=failures,
        pairs=tuple(pairs),
    )


@dataclass
class CompositionWitness:
    input: Word
    reason: str


def verify_composition(
    t: Transducer, ft: FailureTransducer, result: FailureTransducer, max_len: int, tol: float = 1e-9
) -> CheckReport:
    """Check ``result`` against the defining property of the composition.

    For every input up to ``max_len``: it is in the domain of ``result`` iff it
    is in the domain of ``t`` and ``t``'s output word is in the domain of
    ``ft``; and then ``result(alpha) = weight_t(alpha) * ft(word_t(alpha))``.
    """
    tr = output_translation(t, ft)
    expected = {}
    for alpha, (beta, o1) in enumerate_outputs(t, max_len):
        v = output_of_failure(ft, tuple(tr[o] for o in beta))
        if v is not None:
            expected[alpha] = o1 * v
    got = {e.input: e.value for e in enumerate_failure(result, max_len)}
    witnesses = []
    for alpha in sorted(set(expected) | set(got)):
        if alpha not in got:
            witnesses.append(CompositionWitness(alpha, "missing from composition"))
        elif alpha not in expected:
            witnesses.append(CompositionWitness(alpha, "not expected in composition"))
        elif not math.isclose(got[alpha], expected[alpha], rel_tol=0.0, abs_tol=tol):
            witnesses.append(CompositionWitness(alpha, f"value {got[alpha]!r} != {expected[alpha]!r}"))
    return CheckReport("composition", not witnesses, witnesses=witnesses, total=float(len(expected)))
