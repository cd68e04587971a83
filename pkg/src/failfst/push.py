"""Weight pushing for composed failure transducers.

Per-state completion sums are read off a graph in which failure arcs are
unrolled through clone vertices ``(p, f(p))``: every completed step of the
machine corresponds to exactly one path ending at a real state.  Reversing the
graph and adding a super-source ``x`` joined to the final states turns the
sum at ``q`` into an aggregate over ``x -> q`` paths.  Plus-times uses
dynamic programming in topological order; max-times runs Dijkstra on ``-log``
weights.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .algebra import SemiringTag
from .errors import CyclicGraph, NegativeLogWeight, PreconditionViolation, ZeroSumState
from .failure import FailureTransducer, has_failure_cycles
from .transducer import Arc, topological_order

Edge = Tuple[int, int, Optional[int], float]  # src, dst, symbol (None for epsilon), weight


@dataclass(frozen=True)
class SumTable:
    semiring: SemiringTag
    sums: Tuple[float, ...]
    vertex_sums: Tuple[float, ...] = field(default=(), repr=False)

    def __getitem__(self, q: int) -> float:
        return self.sums[q]

    def __len__(self) -> int:
        return len(self.sums)


@dataclass(frozen=True)
class ClonedGraph:
    """Vertices ``0..num_states-1`` are machine states; vertex
    ``num_states + i`` is the clone ``clones[i] = (p, f(p))``."""

    num_states: int
    clones: Tuple[Tuple[int, int], ...]
    edges: Tuple[Edge, ...]

    @property
    def num_vertices(self) -> int:
        return self.num_states + len(self.clones)

    def vertex_name(self, v: int) -> str:
        if v < self.num_states:
            return str(v)
        p, q = self.clones[v - self.num_states]
        return f"{p}~{q}"


@dataclass(frozen=True)
class AugmentedGraph:
    graph: ClonedGraph
    source: int
    edges: Tuple[Edge, ...]

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices + 1

    def adjacency(self) -> Dict[int, List[Tuple[int, float]]]:
        adj: Dict[int, List[Tuple[int, float]]] = {}
        for u, v, _, w in self.edges:
            adj.setdefault(u, []).append((v, w))
        return adj

    def vertex_name(self, v: int) -> str:
        return "x" if v == self.source else self.graph.vertex_name(v)


def left_initial(w: FailureTransducer) -> int:
    if w.pairs is None:
        raise PreconditionViolation("machine carries no state-pair provenance")
    return w.pairs[w.initial][0]


def truncate_at_s1(w: FailureTransducer) -> FailureTransducer:
    """Cut the machine at states whose left coordinate is V's initial state:
    those become final with output 1 and lose all outgoing arcs."""
    s1 = left_initial(w)
    cut = {q for q, (p1, _) in enumerate(w.pairs) if p1 == s1}
    arcs = tuple({} if q in cut else dict(row) for q, row in enumerate(w.arcs))
    failures = {q: v for q, v in w.failures.items() if q not in cut}
    return FailureTransducer(w.input_labels, w.kind, w.num_states, w.initial, arcs, w.initial_output,
                             {q: 1.0 for q in sorted(cut)}, w.output_labels, failures=failures, pairs=w.pairs)


def build_cloned_graph(wt: FailureTransducer) -> ClonedGraph:
    if has_failure_cycles(wt):
        raise PreconditionViolation("the machine has failure cycles")
    n = wt.num_states
    dom = sorted(wt.failures)
    clone_id = {p: n + i for i, p in enumerate(dom)}
    edges: List[Edge] = []
    for p in range(n):
        for a in sorted(wt.arcs[p]):
            d, lam = wt.arcs[p][a]
            edges.append((p, d, a, lam))
    for p in dom:
        q, phi = wt.failures[p]
        edges.append((p, clone_id[p], None, phi))
        for a in sorted(wt.arcs[q]):
            if a not in wt.arcs[p]:
                d, lam = wt.arcs[q][a]
                edges.append((clone_id[p], d, a, lam))
        if q in wt.failures:
            edges.append((clone_id[p], clone_id[q], None, wt.failures[q][1]))
    return ClonedGraph(n, tuple((p, wt.failures[p][0]) for p in dom), tuple(edges))


def augment_graph(g: ClonedGraph, wt: FailureTransducer) -> AugmentedGraph:
    """Reverse every edge and join a new source to each final state with
    weight equal to its final output."""
    x = g.num_vertices
    edges = [(v, u, lab, w) for u, v, lab, w in g.edges]
    edges += [(x, q, None, wt.finals[q]) for q in sorted(wt.finals)]
    return AugmentedGraph(g, x, tuple(edges))


def state_sums_plus(ag: AugmentedGraph) -> SumTable:
    adj = ag.adjacency()
    order = topological_order(ag.num_vertices, {u: [v for v, _ in vs] for u, vs in adj.items()})
    if order is None:
        raise CyclicGraph("the augmented graph has a cycle; plus-times path sums need a DAG")
    s = [0.0] * ag.num_vertices
    s[ag.source] = 1.0
    for u in order:
        su = s[u]
        if su == 0.0:
            continue
        for v, w in adj.get(u, ()):
            s[v] += su * w
    return SumTable(SemiringTag.PLUS, tuple(s[: ag.graph.num_states]), tuple(s))


def state_sums_max(ag: AugmentedGraph) -> SumTable:
    """Best-path weights from the source via Dijkstra over ``-log`` weights."""
    for u, v, _, w in ag.edges:
        if w > 1.0:
            raise NegativeLogWeight(
                f"edge {ag.vertex_name(u)}->{ag.vertex_name(v)} has weight {w!r} > 1")
    adj = ag.adjacency()
    dist = [math.inf] * ag.num_vertices
    dist[ag.source] = 0.0
    heap = [(0.0, ag.source)]
    done = [False] * ag.num_vertices
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj.get(u, ()):
            if w <= 0.0:
                continue
            nd = d - math.log(w)
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    s = tuple(math.exp(-d) if d < math.inf else 0.0 for d in dist)
    return SumTable(SemiringTag.MAX, s[: ag.graph.num_states], s)


def push_weights(w: FailureTransducer, sums: SumTable) -> FailureTransducer:
    """Re-weight by the sums: arcs by ``S(dst)/S(src)``, failure arcs by
    ``S(f(p))/S(p)``, final outputs by ``1/S(p)`` and the initial output by
    ``S(initial)``.  The represented function is unchanged."""
    S = sums.sums
    if len(S) != w.num_states:
        raise ValueError("sum table does not match the machine")
    bad = [q for q in range(w.num_states) if not S[q] > 0.0]
    if bad:
        raise ZeroSumState(f"states with non-positive sum: {bad[:5]}")
    arcs = tuple({a: (d, lam * S[d] / S[p]) for a, (d, lam) in row.items()} for p, row in enumerate(w.arcs))
    failures: Dict[int, Arc] = {p: (r, phi * S[r] / S[p]) for p, (r, phi) in w.failures.items()}
    finals = {p: rho / S[p] for p, rho in w.finals.items()}
    return FailureTransducer(w.input_labels, w.kind, w.num_states, w.initial, arcs,
                             w.initial_output * S[w.initial], finals, w.output_labels,
                             failures=failures, pairs=w.pairs)


def sum_graph(w: FailureTransducer, tag: SemiringTag) -> AugmentedGraph:
    """The augmented graph the shipped pipeline uses for ``tag``.

    Plus-times works on the machine cut at the left-initial states, whose
    sums are 1 for valid pipelines.  Max-times keeps the whole machine, with
    source edges carrying the real final outputs: the cut does not preserve
    best-path values, and Dijkstra copes with the cycles through those states.
    """
    wt = truncate_at_s1(w) if tag is SemiringTag.PLUS else w
    return augment_graph(build_cloned_graph(wt), wt)


def state_sums(w: FailureTransducer, tag: SemiringTag) -> SumTable:
    ag = sum_graph(w, tag)
    return state_sums_plus(ag) if tag is SemiringTag.PLUS else state_sums_max(ag)


def push(w: FailureTransducer, tag: SemiringTag) -> FailureTransducer:
    return push_weights(w, state_sums(w, tag))


def dump_graph(ag: AugmentedGraph, labels: Sequence[str]) -> Iterator[str]:
    """One ``src dst label weight`` line per edge; ``-`` marks epsilon."""
    for u, v, lab, w in ag.edges:
        yield f"{ag.vertex_name(u)} {ag.vertex_name(v)} {'-' if lab is None else labels[lab]} {w:.17g}"
