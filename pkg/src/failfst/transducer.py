"""Subsequential transducers: representation, evaluation, brute-force
enumeration, trimming and the probability-property checkers."""
from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .algebra import PAIR, WEIGHT, Monoid, PairOutput, SemiringTag, Value, Word, check_weight, monoid_for
from .errors import EmptyMachine, InvariantViolation
from . import symbols as sym

Arc = Tuple[int, Value]
Step = Callable[[int, int], Optional[Arc]]


@dataclass(frozen=True)
class Transducer:
    """A subsequential transducer with states ``0 .. num_states-1``.

    ``arcs[q]`` maps an input symbol to ``(target, output)``, which keeps the
    domains of the transition and output functions equal by construction.
    ``finals`` maps each final state to its final output.
    """

    input_labels: Tuple[str, ...]
    kind: str
    num_states: int
    initial: int
    arcs: Tuple[Dict[int, Arc], ...]
    initial_output: Value
    finals: Dict[int, Value]
    output_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        monoid_for(self.kind)
        if len(self.arcs) != self.num_states:
            raise InvariantViolation("arc table size differs from the state count")
        if not 0 <= self.initial < self.num_states:
            raise InvariantViolation(f"initial state {self.initial} is not a state")
        self._check_value(self.initial_output)
        for q, table in enumerate(self.arcs):
            for a, (d, out) in table.items():
                if not 0 <= a < len(self.input_labels):
                    raise InvariantViolation(f"arc from {q}: symbol id {a} outside the input alphabet")
                if not 0 <= d < self.num_states:
                    raise InvariantViolation(f"arc from {q}: target {d} is not a state")
                self._check_value(out)
        for q, out in self.finals.items():
            if not 0 <= q < self.num_states:
                raise InvariantViolation(f"final state {q} is not a state")
            self._check_value(out)

    def _check_value(self, v: Value) -> None:
        if self.kind == PAIR.kind:
            if not isinstance(v, PairOutput):
                raise InvariantViolation(f"pair machine carries non-pair output {v!r}")
            check_weight(v.weight)
            for o in v.word:
                if not 0 <= o < len(self.output_labels):
                    raise InvariantViolation(f"output symbol id {o} outside the output alphabet")
        else:
            if isinstance(v, tuple):
                raise InvariantViolation(f"weight-only machine carries pair output {v!r}")
            check_weight(v)

    @property
    def monoid(self) -> Monoid:
        return monoid_for(self.kind)

    @property
    def num_symbols(self) -> int:
        return len(self.input_labels)

    def step(self, q: int, a: int) -> Optional[Arc]:
        return self.arcs[q].get(a)

    def num_arcs(self) -> int:
        return sum(len(t) for t in self.arcs)

    def transitions(self) -> Iterator[Tuple[int, int, int, Value]]:
        for q, table in enumerate(self.arcs):
            for a in sorted(table):
                d, out = table[a]
                yield q, a, d, out

    def encode(self, text) -> Word:
        return sym.encode(self.input_labels, text)


def make_transducer(
    input_labels: Sequence[str],
    arcs: Sequence[Tuple[int, str, int, object]],
    finals: Mapping[int, object],
    *,
    initial: int = 0,
    initial_output: object = None,
    output_labels: Sequence[str] | None = None,
    num_states: int | None = None,
) -> Transducer:
    """Build a transducer from label-level arc tuples ``(src, symbol, dst, out)``.

    For pair machines (``output_labels`` given) an output is ``(word, weight)``
    where ``word`` is a string of output labels.
    """
    kind = PAIR.kind if output_labels is not None else WEIGHT.kind
    out_labels = tuple(output_labels or ())
    in_labels = tuple(input_labels)

    def conv(v):
        if kind == WEIGHT.kind:
            return float(v)
        word, w = v
        return PairOutput(sym.encode(out_labels, word), float(w))

    if num_states is None:
        used = [initial, *finals] + [s for s, _, d, _ in arcs] + [d for s, _, d, _ in arcs]
        num_states = max(used) + 1
    table: List[Dict[int, Arc]] = [dict() for _ in range(num_states)]
    index = {lab: i for i, lab in enumerate(in_labels)}
    for src, label, dst, out in arcs:
        a = index[label]
        if a in table[src]:
            raise InvariantViolation(f"duplicate arc ({src}, {label})")
        table[src][a] = (dst, conv(out))
    if initial_output is None:
        iota = monoid_for(kind).one
    else:
        iota = conv(initial_output)
    return Transducer(
        input_labels=in_labels,
        kind=kind,
        num_states=num_states,
        initial=initial,
        arcs=tuple(table),
        initial_output=iota,
        finals={q: conv(v) for q, v in finals.items()},
        output_labels=out_labels,
    )


# ---------------------------------------------------------------- evaluation


def _check_symbols(t: Transducer, alpha: Word) -> None:
    for a in alpha:
        if not 0 <= a < t.num_symbols:
            raise ValueError(f"symbol id {a!r} is not in the input alphabet")


def run_with(step: Step, monoid: Monoid, q: int, alpha: Word) -> Optional[Arc]:
    value = monoid.one
    for a in alpha:
        nxt = step(q, a)
        if nxt is None:
            return None
        q, out = nxt
        value = monoid.times(value, out)
    return q, value


def run(t: Transducer, q: int, alpha: Word) -> Optional[Arc]:
    """Generalized transition and output: ``(delta*(q, alpha), lambda*(q, alpha))``.

    Returns ``None`` when the path leaves the transition domain.  Symbols
    outside the alphabet are a usage error (``ValueError``).
    """
    if not 0 <= q < t.num_states:
        raise ValueError(f"{q} is not a state")
    _check_symbols(t, alpha)
    return run_with(t.step, t.monoid, q, alpha)


def output_of(t: Transducer, alpha: Word) -> Optional[Value]:
    res = run(t, t.initial, alpha)
    if res is None or res[0] not in t.finals:
        return None
    q, v = res
    m = t.monoid
    return m.times(m.times(t.initial_output, v), t.finals[q])


class EnumerationEntry(NamedTuple):
    input: Word
    value: Value


@dataclass
class Enumeration:
    """Result of a bounded walk: entries plus the words at the horizon whose
    state can still reach a final state (the walk may be missing mass there)."""

    entries: List[EnumerationEntry]
    frontier: List[Tuple[Word, Value]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.frontier


def walk(
    step: Step,
    monoid: Monoid,
    num_symbols: int,
    finals: Mapping[int, Value],
    start: int,
    prefix_value: Value,
    max_len: int,
    alive: Optional[set] = None,
) -> Enumeration:
    """Depth-first enumeration in lexicographic order of symbol ids.

    ``alive`` is the co-accessible state set; when given, paths through dead
    states are pruned and horizon words on live states are reported.
    """
    entries: List[EnumerationEntry] = []
    frontier: List[Tuple[Word, Value]] = []
    stack: List[Tuple[int, Word, Value]] = [(start, (), prefix_value)]
    while stack:
        q, word, value = stack.pop()
        if q in finals:
            entries.append(EnumerationEntry(word, monoid.times(value, finals[q])))
        if len(word) == max_len:
            if _continues(step, q, num_symbols, alive):
                frontier.append((word, value))
            continue
        for a in range(num_symbols - 1, -1, -1):
            nxt = step(q, a)
            if nxt is None:
                continue
            d, out = nxt
            if alive is not None and d not in alive:
                continue
            stack.append((d, word + (a,), monoid.times(value, out)))
    return Enumeration(entries, frontier)


def _continues(step: Step, q: int, n: int, alive: Optional[set]) -> bool:
    for a in range(n):
        nxt = step(q, a)
        if nxt is not None and (alive is None or nxt[0] in alive):
            return True
    return False


def enumerate_outputs(t: Transducer, max_len: int, state: int | None = None) -> List[EnumerationEntry]:
    """All ``(alpha, O_T(alpha))`` with ``|alpha| <= max_len``, lexicographic by
    symbol id.  With ``state`` given, enumerate ``O_T^state`` instead (no
    initial output)."""
    return enumeration(t, max_len, state).entries


def enumeration(t: Transducer, max_len: int, state: int | None = None) -> Enumeration:
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if state is None:
        start, pre = t.initial, t.initial_output
    else:
        start, pre = state, t.monoid.one
    return walk(t.step, t.monoid, t.num_symbols, t.finals, start, pre, max_len,
                alive=coaccessible_states(t))


# ------------------------------------------------------------- graph helpers


def successors(t: Transducer, q: int) -> Iterator[int]:
    for d, _ in t.arcs[q].values():
        yield d


def accessible_states(t: Transducer, extra: Mapping[int, Tuple[int, Value]] | None = None) -> set:
    seen = {t.initial}
    queue = deque([t.initial])
    while queue:
        q = queue.popleft()
        nexts = list(successors(t, q))
        if extra and q in extra:
            nexts.append(extra[q][0])
        for d in nexts:
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return seen


def coaccessible_states(t: Transducer, extra: Mapping[int, Tuple[int, Value]] | None = None) -> set:
    """States from which some input reaches a final state (reverse BFS from F).

    ``extra`` adds edges (used for failure arcs when scanning graph structure)."""
    preds: Dict[int, List[int]] = defaultdict(list)
    for q, table in enumerate(t.arcs):
        for d, _ in table.values():
            preds[d].append(q)
    if extra:
        for q, (d, _) in extra.items():
            preds[d].append(q)
    seen = set(t.finals)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p in preds[q]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def restrict(t: Transducer, keep: set) -> Tuple[Transducer, Dict[int, int]]:
    """Sub-machine on ``keep`` (must contain the initial state), renumbered in
    ascending order.  Returns the new machine and the old->new state map."""
    order = sorted(keep)
    new_id = {q: i for i, q in enumerate(order)}
    table = []
    for q in order:
        table.append({a: (new_id[d], out) for a, (d, out) in t.arcs[q].items() if d in new_id})
    finals = {new_id[q]: v for q, v in t.finals.items() if q in new_id}
    return (
        Transducer(t.input_labels, t.kind, len(order), new_id[t.initial], tuple(table),
                   t.initial_output, finals, t.output_labels),
        new_id,
    )


def trim(t: Transducer) -> Transducer:
    """Keep only states that are both accessible and co-accessible."""
    keep = accessible_states(t) & coaccessible_states(t)
    if t.initial not in keep:
        raise EmptyMachine("the initial state is not co-accessible")
    if len(keep) == t.num_states:
        return t
    return restrict(t, keep)[0]


def topological_order(num_vertices: int, edges: Mapping[int, Sequence[int]]) -> Optional[List[int]]:
    """Kahn's algorithm with deterministic (smallest-id-first) tie breaking;
    ``None`` on a cycle."""
    import heapq

    indeg = [0] * num_vertices
    for u in range(num_vertices):
        for v in edges.get(u, ()):
            indeg[v] += 1
    ready = [u for u in range(num_vertices) if indeg[u] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in edges.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    return order if len(order) == num_vertices else None


def is_acyclic(t: Transducer) -> bool:
    edges = {q: list(successors(t, q)) for q in range(t.num_states)}
    return topological_order(t.num_states, edges) is not None


# ------------------------------------------------------------------ checkers


@dataclass
class CheckReport:
    """Outcome of a property check.

    ``residuals`` holds per-state deviations where the property is local;
    ``witnesses`` lists offending states, symbols or words; ``inconclusive``
    lists items the bounded enumeration could not settle.
    """

    property: str
    passed: bool
    residuals: Dict[int, float] = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)
    total: Optional[float] = None
    groups: Dict[Word, float] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        parts = [f"{self.property}: {status}"]
        if self.total is not None:
            parts.append(f"total={self.total!r}")
        if self.residuals:
            parts.append(f"max_residual={max(self.residuals.values())!r}")
        if self.witnesses:
            parts.append(f"witnesses={self.witnesses[:5]!r}")
        if self.inconclusive:
            parts.append(f"inconclusive={len(self.inconclusive)}")
        return " ".join(parts)


def _require_weight_only(t: Transducer, what: str) -> None:
    if t.kind != WEIGHT.kind:
        raise ValueError(f"{what} needs a weight-only machine")


def local_residuals(t: Transducer, tag: SemiringTag = SemiringTag.PLUS) -> Dict[int, float]:
    """``|e(q) (+) sum_a lambda(q, a) - 1|`` for every state (explicit arcs only)."""
    res = {}
    for q in range(t.num_states):
        vals = [out for _, out in t.arcs[q].values()]
        vals.append(t.finals.get(q, 0.0))
        res[q] = abs(tag.sum(vals) - 1.0)
    return res


def check_stochastic(t: Transducer, tol: float = 1e-9) -> CheckReport:
    _require_weight_only(t, "check_stochastic")
    res = local_residuals(t, SemiringTag.PLUS)
    bad = [q for q, r in res.items() if r > tol]
    return CheckReport("stochastic", not bad, residuals=res, witnesses=bad)


def longest_path(t: Transducer) -> Optional[int]:
    """Length of the longest path from the initial state through co-accessible
    states, or ``None`` when such a path can loop."""
    live = accessible_states(t) & coaccessible_states(t)
    edges = {q: [d for d in successors(t, q) if d in live] for q in live}
    ids = sorted(live)
    idx = {q: i for i, q in enumerate(ids)}
    order = topological_order(len(ids), {idx[q]: [idx[d] for d in ds] for q, ds in edges.items()})
    if order is None:
        return None
    depth = {q: -1 for q in ids}
    if t.initial in live:
        depth[t.initial] = 0
    for i in order:
        q = ids[i]
        if depth[q] < 0:
            continue
        for d in edges[q]:
            depth[d] = max(depth[d], depth[q] + 1)
    return max(depth.values(), default=0)


def check_probabilistic(t: Transducer, max_len: int, tol: float = 1e-9) -> CheckReport:
    """Bounded check that ``O_T`` is a probability distribution.

    Every enumerated value must lie in ``[0, 1 + tol]`` and the partial sum must
    not exceed ``1 + tol``.  When the enumeration is complete (acyclic machine
    within the horizon) the sum must also reach ``1 - tol``.
    """
    _require_weight_only(t, "check_probabilistic")
    en = enumeration(t, max_len)
    total = math.fsum(e.value for e in en.entries)
    witnesses = [e.input for e in en.entries if e.value > 1.0 + tol]
    ok = not witnesses and total <= 1.0 + tol
    inconclusive = [w for w, _ in en.frontier]
    if en.complete:
        ok = ok and total >= 1.0 - tol
    return CheckReport("probabilistic", ok, witnesses=witnesses, inconclusive=inconclusive, total=total)


def check_conditional_probabilistic(t: Transducer, max_len: int, tol: float = 1e-9) -> CheckReport:
    """Group enumerated entries by output word and check each group sums to 1.

    A group is inconclusive when some horizon word, whose output so far is a
    prefix of the group's word, could still extend into it.
    """
    if t.kind != PAIR.kind:
        raise ValueError("check_conditional_probabilistic needs a pair machine")
    en = enumeration(t, max_len)
    groups: Dict[Word, List[float]] = defaultdict(list)
    for e in en.entries:
        groups[e.value.word].append(e.value.weight)
    open_prefixes = [v.word for _, v in en.frontier]
    sums = {}
    witnesses, inconclusive = [], []
    for beta in sorted(groups):
        s = math.fsum(groups[beta])
        sums[beta] = s
        if s > 1.0 + tol:
            witnesses.append(beta)
        elif any(beta[: len(p)] == p for p in open_prefixes):
            inconclusive.append(beta)
        elif abs(s - 1.0) > tol:
            witnesses.append(beta)
    return CheckReport("conditional-probabilistic", not witnesses, witnesses=witnesses,
                       inconclusive=inconclusive, groups=sums)


def check_canonical(t: Transducer, tag: SemiringTag, max_len: int, tol: float = 1e-9) -> CheckReport:
    """Per-state bounded check of ``(+)_alpha O_T^q(alpha) = 1``.

    The partial aggregate may never exceed ``1 + tol``.  It must reach
    ``1 - tol`` whenever the state's enumeration is complete; under max-times
    reaching it early also settles the state.  Other states are inconclusive.
    """
    _require_weight_only(t, "check_canonical")
    residuals, witnesses, inconclusive = {}, [], []
    for q in range(t.num_states):
        en = enumeration(t, max_len, state=q)
        agg = tag.sum(e.value for e in en.entries)
        residuals[q] = abs(agg - 1.0)
        if agg > 1.0 + tol:
            witnesses.append(q)
        elif agg < 1.0 - tol:
            if en.complete:
                witnesses.append(q)
            else:
                inconclusive.append(q)
    return CheckReport(f"canonical[{tag.value}]", not witnesses, residuals=residuals,
                       witnesses=witnesses, inconclusive=inconclusive)
