"""Direct construction of ``star(V) o F`` that only creates co-accessible
states.

V's states are split per output symbol ``w`` into a left class (states that
can still reach an arc emitting ``w``) and a right class (states reached
after emitting ``w``).  Left-class states are paired with the F state before
reading ``w``, right-class states with the state after it.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Set, Tuple

from .algebra import WEIGHT
from .compose import output_translation
from .errors import InvariantViolation, MultiSymbolOutput, PreconditionViolation
from .failure import FailureTransducer, check_monotonic, expand, has_failure_cycles
from .star import StarReadyTransducer
from .transducer import Arc, Transducer, accessible_states, coaccessible_states

Transition = Tuple[int, int, int]


@dataclass(frozen=True)
class SymbolPartition:
    """Per output symbol id: the arcs emitting it and the two state classes."""

    delta: Dict[int, FrozenSet[Transition]]
    left: Dict[int, FrozenSet[int]]
    right: Dict[int, FrozenSet[int]]

    def check(self, t: Transducer) -> List[str]:
        """Return the class invariants that fail on ``t`` (empty when sound)."""
        problems = []
        covered: Set[int] = set()
        for w in self.delta:
            covered |= self.left[w] | self.right[w]
        if covered != set(range(t.num_states)):
            problems.append("classes do not cover the state set")
        for w in self.delta:
            for w2 in self.delta:
                if self.left[w] & self.right[w2]:
                    problems.append(f"left class of {w} meets right class of {w2}")
        for w in self.delta:
            for cls in (self.left[w], self.right[w]):
                for p in cls:
                    for a, (d, out) in t.arcs[p].items():
                        if not out.word and d not in cls:
                            problems.append(f"empty-output arc {p}-{a} leaves its class")
                        if d in cls and out.word:
                            problems.append(f"arc {p}-{a} inside a class emits output")
        return problems


def _require_short_outputs(t: Transducer) -> None:
    for q, a, d, out in t.transitions():
        if len(out.word) > 1:
            raise MultiSymbolOutput(f"arc {q}-{a}->{d} emits {len(out.word)} symbols")


def partition_states(v: StarReadyTransducer | Transducer) -> SymbolPartition:
    t = v.base if isinstance(v, StarReadyTransducer) else v
    _require_short_outputs(t)
    preds: Dict[int, List[int]] = defaultdict(list)
    for q, _, d, _ in t.transitions():
        preds[d].append(q)
    delta: Dict[int, Set[Transition]] = {w: set() for w in range(len(t.output_labels))}
    for q, a, d, out in t.transitions():
        if out.word:
            delta[out.word[0]].add((q, a, d))

    def reach(seeds, nexts) -> FrozenSet[int]:
        seen = set(seeds)
        queue = deque(seen)
        while queue:
            q = queue.popleft()
            for d in nexts(q):
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
        return frozenset(seen)

    fwd = lambda q: [d for d, _ in t.arcs[q].values()]  # noqa: E731
    left = {w: reach({p for p, _, _ in arcs}, lambda q: preds[q]) for w, arcs in delta.items()}
    right = {w: reach({d for _, _, d in arcs}, fwd) for w, arcs in delta.items()}
    return SymbolPartition({w: frozenset(s) for w, s in delta.items()}, left, right)


def e_map(v: StarReadyTransducer | Transducer, p: int) -> int:
    t = v.base if isinstance(v, StarReadyTransducer) else v
    return t.initial if p in t.finals else p


def check_preconditions(v: StarReadyTransducer, ft: FailureTransducer) -> None:
    """Raise ``PreconditionViolation`` naming the first failed structural
    assumption of the specialized construction."""
    t = v.base
    if ft.kind != WEIGHT.kind:
        raise PreconditionViolation("the right operand must be weight-only")
    live = accessible_states(t) & coaccessible_states(t)
    if len(live) != t.num_states:
        raise PreconditionViolation("V is not trim")
    if has_failure_cycles(ft):
        raise PreconditionViolation("F has failure cycles")
    mono = check_monotonic(ft)
    if not mono.passed:
        raise PreconditionViolation(f"F is not monotonic: {mono.witnesses[:3]}")
    coacc = coaccessible_states(expand(ft))
    if len(coacc) != ft.num_states:
        raise PreconditionViolation(f"F has states that are not co-accessible: "
                                    f"{sorted(set(range(ft.num_states)) - coacc)[:5]}")


def compose_specialized(v: StarReadyTransducer, ft: FailureTransducer, verify: bool = True) -> FailureTransducer:
    """Build W, equivalent to ``compose(star(V), F)``, without useless states.

    For every arc ``p2 --w--> q2`` of F, the state set gets ``left(w) x {p2}``
    and ``E(right(w)) x {q2}`` where ``E`` sends V's final states to its
    initial state.  Arcs inside a class keep the F coordinate, arcs emitting
    ``w`` cross from ``p2`` to ``q2`` and pick up ``F``'s arc weight.  Failure
    arcs are kept on left-class states only.

    With ``verify`` the result is re-scanned for co-accessibility.
    """
    check_preconditions(v, ft)
    t = v.base
    part = partition_states(v)
    tr = output_translation(t, ft)
    s1 = t.initial
    E = lambda p: s1 if p in t.finals else p  # noqa: E731

    ids: Dict[Tuple[int, int], int] = {}
    pairs: List[Tuple[int, int]] = []

    def state(pair: Tuple[int, int]) -> int:
        if pair not in ids:
            ids[pair] = len(pairs)
            pairs.append(pair)
        return ids[pair]

    state((s1, ft.initial))
    arcs: Dict[int, Dict[int, Arc]] = defaultdict(dict)

    def add_arc(src: int, a: int, dst: int, w: float) -> None:
        row = arcs[src]
        if a in row and row[a] != (dst, w):
            raise InvariantViolation(f"conflicting arcs from {pairs[src]} on {a}")
        row[a] = (dst, w)

    # F arcs grouped by output symbol of V
    f_arcs: Dict[int, List[Tuple[int, int, float]]] = defaultdict(list)
    for p2, w2, q2, o2 in ft.transitions():
        f_arcs[w2].append((p2, q2, o2))

    for w in range(len(t.output_labels)):
        fw = tr[w]
        left, right, crossing = part.left[w], part.right[w], part.delta[w]
        for p2, q2, o2 in f_arcs.get(fw, ()):
            for p1 in sorted(left):
                src = state((p1, p2))
                for a, (d1, out) in t.arcs[p1].items():
                    if d1 in left:
                        add_arc(src, a, state((d1, p2)), out.weight)
            for p1, a, d1 in sorted(crossing):
                out = t.arcs[p1][a][1]
                add_arc(state((p1, p2)), a, state((E(d1), q2)), out.weight * o2)
            for p1 in sorted(right):
                if p1 in t.finals:
                    state((s1, q2))
                    continue
                src = state((p1, q2))
                for a, (d1, out) in t.arcs[p1].items():
                    if d1 in right:
                        add_arc(src, a, state((E(d1), q2)), out.weight)

    # failure arcs: only on left-class states.  By monotonicity the target
    # pair exists whenever r2 has explicit arcs; an F state without arcs of
    # its own may have no pair, and is then skipped by multiplying through.
    failures: Dict[int, Arc] = {}
    left_any: Set[int] = set().union(*part.left.values())
    for (p1, p2), q in list(ids.items()):
        if p1 not in left_any or p2 not in ft.failures:
            continue
        r2, phi = ft.failures[p2]
        while (p1, r2) not in ids and r2 in ft.failures:
            phi *= ft.failures[r2][1]
            r2 = ft.failures[r2][0]
        if (p1, r2) in ids:
            failures[q] = (ids[(p1, r2)], phi)

    finals = {ids[(s1, p2)]: rho for p2, rho in ft.finals.items() if (s1, p2) in ids}
    n = len(pairs)
    w_machine = FailureTransducer(
        input_labels=t.input_labels,
        kind=WEIGHT.kind,
        num_states=n,
        initial=0,
        arcs=tuple(arcs.get(i, {}) for i in range(n)),
        initial_output=ft.initial_output,
        finals=finals,
        failures=failures,
        pairs=tuple(pairs),
    )
    if verify:
        bad = set(range(n)) - coaccessible_states(expand(w_machine))
        if bad:
            raise InvariantViolation(f"non-co-accessible states built: {sorted(pairs[q] for q in bad)[:5]}")
    return w_machine
