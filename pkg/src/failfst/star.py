"""Normalization of word-and-weight transducers for iteration, and the
Kleene-star construction on normalized machines."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional, Set

from .algebra import PAIR, PAIR_ONE, Value, monoid_product
from .errors import EpsilonInDomain, InvariantViolation
from .symbols import DOLLAR
from .transducer import Arc, Transducer, accessible_states, coaccessible_states, restrict, trim


@dataclass(frozen=True)
class StarReadyTransducer:
    """A pair transducer satisfying the iteration assumptions: prefix-free
    domain, no arc into the initial state, initial state not final, unit
    initial output and unit final outputs.  ``dollar`` is the id of the end
    marker when one was added."""

    base: Transducer
    dollar: Optional[int] = None

    def __post_init__(self):
        problems = star_ready_problems(self.base)
        if problems:
            raise InvariantViolation("; ".join(problems))


def _final_reaches_final(t: Transducer) -> bool:
    """True when some final state has a non-empty path to a final state."""
    live = coaccessible_states(t)
    for q in t.finals:
        for d, _ in t.arcs[q].values():
            if d in live:
                return True
    return False


def is_prefix_free(t: Transducer) -> bool:
    """Decide prefix-freeness of the domain on the accessible part."""
    acc = accessible_states(t)
    sub, _ = restrict(t, acc)
    return not _final_reaches_final(sub)


def star_ready_problems(t: Transducer) -> List[str]:
    problems = []
    if t.kind != PAIR.kind:
        problems.append("not a pair transducer")
        return problems
    for q, out in t.finals.items():
        if t.arcs[q]:
            problems.append(f"final state {q} has outgoing arcs")
            break
    if any(d == t.initial for q in range(t.num_states) for d, _ in t.arcs[q].values()):
        problems.append("an arc enters the initial state")
    if t.initial in t.finals:
        problems.append("the initial state is final")
    if t.initial_output != PAIR_ONE:
        problems.append("initial output is not the unit")
    if any(v != PAIR_ONE for v in t.finals.values()):
        problems.append("a final output is not the unit")
    return problems


def _with(t: Transducer, **kw) -> Transducer:
    fields = dict(input_labels=t.input_labels, kind=t.kind, num_states=t.num_states, initial=t.initial,
                  arcs=t.arcs, initial_output=t.initial_output, finals=t.finals,
                  output_labels=t.output_labels)
    fields.update(kw)
    return Transducer(**fields)


def add_end_marker(t: Transducer) -> tuple[Transducer, int]:
    """Make the domain prefix-free with a fresh end symbol.

    Every final state ``q`` loses its finality and gains ``q --$/rho(q)--> q$``;
    ``q$`` is the only final state, with unit output.  The marker takes id 0
    and the other symbols shift up by one.
    """
    if DOLLAR in t.input_labels:
        dollar = t.input_labels.index(DOLLAR)
        if any(dollar in t.arcs[q] for q in t.finals):
            raise InvariantViolation("a final state already has an arc on the end marker")
        labels, shift = t.input_labels, (lambda a: a)
    else:
        dollar = 0
        labels = (DOLLAR,) + t.input_labels
        shift = lambda a: a + 1  # noqa: E731
    q_end = t.num_states
    arcs: List[Dict[int, Arc]] = [{shift(a): v for a, v in row.items()} for row in t.arcs]
    for q, rho in t.finals.items():
        arcs[q][dollar] = (q_end, rho)
    arcs.append({})
    return _with(t, input_labels=labels, num_states=t.num_states + 1, arcs=tuple(arcs),
                 finals={q_end: PAIR_ONE}), dollar


def _check_realizable(t: Transducer) -> None:
    """Warn unless every accepted word emits exactly one output symbol and
    every output symbol is emitted somewhere."""
    counts: Dict[int, Set[int]] = {q: set() for q in range(t.num_states)}
    counts[t.initial].add(min(len(t.initial_output.word), 2))
    # bounded propagation of "symbols emitted so far", capped at 2
    changed = True
    while changed:
        changed = False
        for q in range(t.num_states):
            for d, out in t.arcs[q].values():
                for c in list(counts[q]):
                    n = min(c + len(out.word), 2)
                    if n not in counts[d]:
                        counts[d].add(n)
                        changed = True
    for q, rho in t.finals.items():
        if {min(c + len(rho.word), 2) for c in counts[q]} - {1}:
            warnings.warn("some accepted input does not emit exactly one output symbol", stacklevel=3)
            break
    used = {o for q in range(t.num_states) for _, out in t.arcs[q].values() for o in out.word}
    if used != set(range(len(t.output_labels))):
        warnings.warn("not every output symbol is realizable", stacklevel=3)


def normalize_for_star(v: Transducer) -> StarReadyTransducer:
    """Rewrite ``v`` to satisfy the iteration assumptions.

    Steps, each applied only when needed: trim; add the ``$`` end marker when
    the domain is not prefix-free; clone a fresh initial state when arcs enter
    the old one; fold the initial output into the initial arcs; fold final
    outputs into the arcs entering final states.  Idempotent.
    """
    if v.kind != PAIR.kind:
        raise ValueError("normalize_for_star expects a pair transducer")
    if v.initial in v.finals:
        raise EpsilonInDomain("the empty input is accepted")
    t = trim(v)
    dollar = t.input_labels.index(DOLLAR) if DOLLAR in t.input_labels else None
    if _final_reaches_final(t):
        t, dollar = add_end_marker(t)
    else:
        # prefix-free: arcs out of final states lead nowhere useful
        t = _with(t, arcs=tuple({} if q in t.finals else row for q, row in enumerate(t.arcs)))
        t = restrict(t, accessible_states(t))[0]
    if any(d == t.initial for row in t.arcs for d, _ in row.values()):
        arcs = list(t.arcs) + [dict(t.arcs[t.initial])]
        t = _with(t, num_states=t.num_states + 1, arcs=tuple(arcs), initial=t.num_states)
        t = restrict(t, accessible_states(t))[0]
    if t.initial_output != PAIR_ONE:
        iota = t.initial_output
        arcs = list(t.arcs)
        arcs[t.initial] = {a: (d, monoid_product(iota, out)) for a, (d, out) in arcs[t.initial].items()}
        t = _with(t, arcs=tuple(arcs), initial_output=PAIR_ONE)
    if any(rho != PAIR_ONE for rho in t.finals.values()):
        arcs = [
            {a: (d, monoid_product(out, t.finals[d]) if d in t.finals else out) for a, (d, out) in row.items()}
            for row in t.arcs
        ]
        t = _with(t, arcs=tuple(arcs), finals={q: PAIR_ONE for q in t.finals})
    _check_realizable(t)
    return StarReadyTransducer(t, dollar)


def star(v: StarReadyTransducer) -> Transducer:
    """Kleene star: drop the final states, redirect arcs into them to the
    initial state, and make the initial state the only (unit) final state."""
    t = v.base
    keep = [q for q in range(t.num_states) if q not in t.finals]
    new_id = {q: i for i, q in enumerate(keep)}
    s = new_id[t.initial]
    arcs = []
    for q in keep:
        row = {}
        for a, (d, out) in t.arcs[q].items():
            row[a] = (s if d in t.finals else new_id[d], out)
        arcs.append(row)
    return Transducer(t.input_labels, t.kind, len(keep), s, tuple(arcs), PAIR_ONE, {s: PAIR_ONE},
                      t.output_labels)
