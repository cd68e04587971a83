"""Failure transducers: completed transition/output functions, expansion,
levels, monotonicity and failure-cycle removal."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from .algebra import Value, Word
from .errors import FailureCycle, InvariantViolation, NotMonotonic
from .transducer import (
    Arc,
    CheckReport,
    Enumeration,
    EnumerationEntry,
    Transducer,
    coaccessible_states,
    run_with,
    walk,
)


@dataclass(frozen=True)
class FailureTransducer(Transducer):
    """A transducer with a partial failure function.

    ``failures[q] = (f(q), phi(q))``.  ``pairs``, when set, records the state
    pair each state was built from by a composition.
    """

    failures: Dict[int, Arc] = field(default_factory=dict)
    pairs: Optional[Tuple[Tuple[int, int], ...]] = None
    _table: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        super().__post_init__()
        for q, (r, phi) in self.failures.items():
            if not (0 <= q < self.num_states and 0 <= r < self.num_states):
                raise InvariantViolation(f"failure arc {q} -> {r} references a missing state")
            self._check_value(phi)
        if self.pairs is not None and len(self.pairs) != self.num_states:
            raise InvariantViolation("pair provenance table size differs from the state count")

    @property
    def base(self) -> Transducer:
        return Transducer(self.input_labels, self.kind, self.num_states, self.initial, self.arcs,
                          self.initial_output, self.finals, self.output_labels)

    def completed_step(self, q: int, a: int) -> Optional[Arc]:
        return completed_step(self, q, a)

    def table_step(self, q: int, a: int) -> Optional[Arc]:
        """Completed step read from the memoized dense table."""
        return completed_table(self)[q].get(a)


def as_failure(t: Transducer) -> FailureTransducer:
    if isinstance(t, FailureTransducer):
        return t
    return FailureTransducer(t.input_labels, t.kind, t.num_states, t.initial, t.arcs,
                             t.initial_output, t.finals, t.output_labels)


def with_failures(t: Transducer, failures: Dict[int, Arc], pairs=None) -> FailureTransducer:
    return FailureTransducer(t.input_labels, t.kind, t.num_states, t.initial, t.arcs,
                             t.initial_output, t.finals, t.output_labels, failures=failures, pairs=pairs)


# ------------------------------------------------------------ failure graph


def failure_cycle_states(ft: FailureTransducer) -> set:
    """States lying on a cycle of the failure function (three-colour walk)."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = [WHITE] * ft.num_states
    on_cycle = set()
    for start in range(ft.num_states):
        if colour[start] != WHITE:
            continue
        path = []
        q = start
        while q is not None and colour[q] == WHITE:
            colour[q] = GREY
            path.append(q)
            q = ft.failures[q][0] if q in ft.failures else None
        if q is not None and colour[q] == GREY:
            on_cycle.update(path[path.index(q):])
        for p in path:
            colour[p] = BLACK
    return on_cycle


def has_failure_cycles(ft: FailureTransducer) -> bool:
    return bool(failure_cycle_states(ft))


def levels(ft: FailureTransducer) -> List[int]:
    if has_failure_cycles(ft):
        raise FailureCycle("level is undefined on a failure cycle")
    memo: List[Optional[int]] = [None] * ft.num_states
    for start in range(ft.num_states):
        chain = []
        q = start
        while memo[q] is None and q in ft.failures:
            chain.append(q)
            q = ft.failures[q][0]
        base = memo[q] if memo[q] is not None else 0
        memo[q] = base
        for p in reversed(chain):
            base += 1
            memo[p] = base
    return memo  # type: ignore[return-value]


def level(ft: FailureTransducer, q: int) -> int:
    n = 0
    seen = set()
    while q in ft.failures:
        if q in seen:
            raise FailureCycle(f"state {q} lies on a failure cycle")
        seen.add(q)
        q = ft.failures[q][0]
        n += 1
    return n


# ------------------------------------------------------ completed functions


def completed_step(ft: FailureTransducer, q: int, a: int) -> Optional[Arc]:
    """``(delta_f(q, a), lambda_f(q, a))`` by walking the failure chain.

    Failure outputs are multiplied in from the right, ``phi(q) (x) (phi(f(q))
    (x) ... (x) lambda(r, a))``, matching the recursive definition.
    """
    phis = []
    steps = 0
    while True:
        hit = ft.arcs[q].get(a)
        if hit is not None:
            break
        fail = ft.failures.get(q)
        if fail is None:
            return None
        steps += 1
        if steps > ft.num_states:
            raise FailureCycle(f"failure chain from state {q} does not terminate")
        q, phi = fail
        phis.append(phi)
    dst, value = hit
    times = ft.monoid.times
    for phi in reversed(phis):
        value = times(phi, value)
    return dst, value


def completed_table(ft: FailureTransducer) -> List[Dict[int, Arc]]:
    """Dense table of all completed steps, built once per machine by level order."""
    if ft._table:
        return ft._table
    lv = levels(ft)
    times = ft.monoid.times
    table: List[Dict[int, Arc]] = [dict() for _ in range(ft.num_states)]
    for q in sorted(range(ft.num_states), key=lambda s: lv[s]):
        row = dict(ft.arcs[q])
        if q in ft.failures:
            r, phi = ft.failures[q]
            for a, (d, out) in table[r].items():
                if a not in row:
                    row[a] = (d, times(phi, out))
        table[q] = row
    ft._table.extend(table)
    return ft._table


def completed_run(ft: FailureTransducer, q: int, alpha: Word) -> Optional[Arc]:
    ft = as_failure(ft)
    return run_with(ft.completed_step, ft.monoid, q, alpha)


def output_of_failure(ft: FailureTransducer, alpha: Word) -> Optional[Value]:
    res = completed_run(ft, ft.initial, alpha)
    if res is None or res[0] not in ft.finals:
        return None
    q, v = res
    m = ft.monoid
    return m.times(m.times(ft.initial_output, v), ft.finals[q])


def expand(ft: Transducer) -> Transducer:
    """The expanded transducer: all completed transitions made explicit."""
    if not isinstance(ft, FailureTransducer) or not ft.failures:
        return Transducer(ft.input_labels, ft.kind, ft.num_states, ft.initial, ft.arcs,
                          ft.initial_output, ft.finals, ft.output_labels)
    table = completed_table(ft)
    return Transducer(ft.input_labels, ft.kind, ft.num_states, ft.initial,
                      tuple(dict(row) for row in table), ft.initial_output, ft.finals, ft.output_labels)


def enumeration_failure(ft: FailureTransducer, max_len: int, state: int | None = None) -> Enumeration:
    """Bounded enumeration of ``O_F`` (or ``O_F^state``) through completed steps."""
    ft = as_failure(ft)
    start, pre = (ft.initial, ft.initial_output) if state is None else (state, ft.monoid.one)
    alive = coaccessible_states(expand(ft))
    return walk(ft.completed_step, ft.monoid, ft.num_symbols, ft.finals, start, pre, max_len, alive=alive)


def enumerate_failure(ft: FailureTransducer, max_len: int, state: int | None = None) -> List[EnumerationEntry]:
    return enumeration_failure(ft, max_len, state).entries


# --------------------------------------------------------------- structure


def signature(t: Transducer, q: int) -> frozenset:
    """Symbols with an explicit arc at ``q`` (failure arcs are not followed)."""
    return frozenset(t.arcs[q])


def check_monotonic(ft: FailureTransducer) -> CheckReport:
    """For every ``q`` with a failure arc: finality and explicit arcs must be
    inherited by ``f(q)``.  Witnesses are ``(q, None)`` for a finality breach
    and ``(q, a)`` for a missing arc."""
    witnesses = []
    for q in sorted(ft.failures):
        r = ft.failures[q][0]
        if q in ft.finals and r not in ft.finals:
            witnesses.append((q, None))
        for a in sorted(ft.arcs[q]):
            if a not in ft.arcs[r]:
                witnesses.append((q, a))
    return CheckReport("monotonic", not witnesses, witnesses=witnesses)


def remove_failure_cycles(ft: FailureTransducer) -> FailureTransducer:
    """Drop the failure arc of every state on a failure cycle.

    Only sound for monotonic machines, so anything else is refused.
    """
    report = check_monotonic(ft)
    if not report.passed:
        raise NotMonotonic(f"violations at {report.witnesses[:5]}")
    cyc = failure_cycle_states(ft)
    if not cyc:
        return ft
    kept = {q: v for q, v in ft.failures.items() if q not in cyc}
    return replace(ft, failures=kept, _table=[])
