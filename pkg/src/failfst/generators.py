"""Seeded random machines for property tests and the acceptance suite.

Every generator takes a ``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import random
import string
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .algebra import PAIR_ONE, PairOutput
from .failure import FailureTransducer, completed_table
from .transducer import Arc, Transducer


def labels(n: int, alphabet: str = string.ascii_lowercase) -> Tuple[str, ...]:
    return tuple(alphabet[:n])


def _weight(rng: random.Random, lo: float = 0.05, hi: float = 1.5) -> float:
    return round(rng.uniform(lo, hi), 3)


def random_failure_transducer(
    rng: random.Random,
    max_states: int = 12,
    max_symbols: int = 4,
    arc_prob: float = 0.5,
    fail_prob: float = 0.6,
    final_prob: float = 0.5,
) -> FailureTransducer:
    """Arbitrary weight-only failure transducer whose failure arcs point to
    lower-numbered states, so the failure graph has no cycles."""
    n = rng.randint(1, max_states)
    k = rng.randint(1, max_symbols)
    arcs: List[Dict[int, Arc]] = [{} for _ in range(n)]
    for q in range(n):
        for a in range(k):
            if rng.random() < arc_prob:
                arcs[q][a] = (rng.randrange(n), _weight(rng))
    failures = {q: (rng.randrange(q), _weight(rng)) for q in range(1, n) if rng.random() < fail_prob}
    finals = {q: _weight(rng) for q in range(n) if rng.random() < final_prob}
    return FailureTransducer(labels(k), "weight-only", n, 0, tuple(arcs), 1.0, finals, failures=failures)


def inject_failure_cycles(rng: random.Random, num_states: int = 8, num_symbols: int = 3) -> FailureTransducer:
    """Monotonic machine with failure cycles.

    State 0 is final and has arcs on every symbol.  A group of states sharing
    one signature and finality fail to each other in a ring; the remaining
    states fail to 0.  Every failure target has a superset signature, so the
    machine is monotonic.
    """
    n, k = max(num_states, 3), num_symbols
    syms = list(range(k))
    arcs: List[Dict[int, Arc]] = [{} for _ in range(n)]
    finals: Dict[int, float] = {0: _weight(rng)}
    for a in syms:
        arcs[0][a] = (rng.randrange(n), _weight(rng))
    ring = list(range(1, rng.randint(2, n - 1) + 1))
    ring_sig = [a for a in syms if rng.random() < 0.6]
    ring_final = rng.random() < 0.5
    failures: Dict[int, Arc] = {}
    for i, q in enumerate(ring):
        for a in ring_sig:
            arcs[q][a] = (rng.randrange(n), _weight(rng))
        if ring_final:
            finals[q] = _weight(rng)
        failures[q] = (ring[(i + 1) % len(ring)], _weight(rng))
    for q in range(len(ring) + 1, n):
        for a in syms:
            if rng.random() < 0.5:
                arcs[q][a] = (rng.randrange(n), _weight(rng))
        if rng.random() < 0.5:
            finals[q] = _weight(rng)
        failures[q] = (0, _weight(rng))
    if rng.random() < 0.5:
        q = rng.randrange(1, n)
        failures[q] = (q, _weight(rng))  # self-loop; still monotonic
    return FailureTransducer(labels(k), "weight-only", n, 0, tuple(arcs), 1.0, finals, failures=failures)


# ------------------------------------------------------------ back-off models


def _stochastic_weights(
    rng: random.Random,
    sigs: List[Set[int]],
    parents: List[Optional[int]],
    targets: List[Dict[int, int]],
    k: int,
    final: List[bool],
    cap_phi: bool,
) -> FailureTransducer:
    """Fill in weights so that every state of the expansion sums to 1.

    States must be numbered so that a failure parent precedes its children;
    the parent's completed outputs are then known when a child's failure
    weight is set.  A state without a parent simply lacks its missing symbols.
    """
    n = len(sigs)
    arcs: List[Dict[int, Arc]] = [{} for _ in range(n)]
    finals: Dict[int, float] = {}
    failures: Dict[int, Arc] = {}
    completed: List[Dict[int, float]] = []
    for q in range(n):
        parent = parents[q]
        missing = [a for a in range(k) if a not in sigs[q]] if parent is not None else []
        parts = [rng.uniform(0.2, 1.0) for _ in range(len(sigs[q]) + (1 if final[q] else 0) + (1 if missing else 0))]
        total = sum(parts)
        parts = [p / total for p in parts]
        it = iter(parts)
        mine = {a: next(it) for a in sorted(sigs[q])}
        rho = next(it) if final[q] else None
        comp = dict(mine)
        if missing:
            backoff = next(it)
            missing_mass = sum(completed[parent][a] for a in missing)
            phi = backoff / missing_mass
            if cap_phi and phi > 1.0:
                phi = 1.0
                scale = (1.0 - missing_mass) / (1.0 - backoff)
                mine = {a: w * scale for a, w in mine.items()}
                rho = None if rho is None else rho * scale
            failures[q] = (parent, phi)
            comp = dict(mine)
            for a in missing:
                comp[a] = phi * completed[parent][a]
        completed.append(comp)
        for a, w in mine.items():
            arcs[q][a] = (targets[q][a], w)
        if rho is not None:
            finals[q] = rho
    return FailureTransducer(labels(k, "xyzwuv"), "weight-only", n, 0, tuple(arcs), 1.0, finals, failures=failures)


def random_backoff_model(
    rng: random.Random, num_symbols: int = 2, num_states: int = 4, cap_phi: bool = False
) -> FailureTransducer:
    """Stochastic monotonic back-off model over ``x, y, ...``.

    State 0 has every symbol; each other state has a subset of its failure
    parent's symbols.  All states are final, so all are co-accessible.  With
    ``cap_phi`` every failure weight is at most 1.
    """
    k, n = num_symbols, num_states
    sigs: List[Set[int]] = [set(range(k))]
    parents: List[Optional[int]] = [None]
    for q in range(1, n):
        p = rng.randrange(q)
        sub = {a for a in sigs[p] if rng.random() < 0.6}
        sigs.append(sub)
        parents.append(p if len(sub) < k else None)
    targets = [{a: rng.randrange(n) for a in sigs[q]} for q in range(n)]
    return _stochastic_weights(rng, sigs, parents, targets, k, [True] * n, cap_phi)


def random_acyclic_backoff_model(
    rng: random.Random, num_symbols: int = 2, depth: int = 2, width: int = 2, cap_phi: bool = False
) -> FailureTransducer:
    """Stochastic monotonic back-off model with a finite domain.

    States come in layers ``0..depth``; arcs go from one layer to the next and
    failure arcs stay inside a layer, pointing at a lower-numbered state with
    a superset signature.  Each non-final layer starts with a state that has
    every symbol.  The last layer only stops (final output 1).
    """
    k = num_symbols
    layers: List[List[int]] = []
    n = 0
    for d in range(depth + 1):
        size = 1 if d == 0 or d == depth else rng.randint(1, width)
        layers.append(list(range(n, n + size)))
        n += size
    sigs: List[Set[int]] = []
    parents: List[Optional[int]] = []
    for d, layer in enumerate(layers):
        for i, q in enumerate(layer):
            if d == depth:
                sigs.append(set())
                parents.append(None)
            elif i == 0:
                sigs.append(set(range(k)))
                parents.append(None)
            else:
                p = layer[rng.randrange(i)]
                sub = {a for a in sigs[p] if rng.random() < 0.6}
                sigs.append(sub)
                parents.append(p if len(sub) < k else None)
    targets: List[Dict[int, int]] = []
    for d, layer in enumerate(layers):
        for q in layer:
            targets.append({a: rng.choice(layers[d + 1]) for a in sigs[q]} if d < depth else {})
    return _stochastic_weights(rng, sigs, parents, targets, k, [True] * n, cap_phi)


# -------------------------------------------------------- spelling models


def random_spelling_model(
    rng: random.Random,
    out_labels: Sequence[str] = ("x", "y"),
    in_labels: Sequence[str] = ("a", "b", "c"),
    max_spellings: int = 3,
    max_spelling_len: int = 3,
) -> Transducer:
    """Conditional probabilistic pair transducer: each output symbol has a few
    distinct spellings over the input alphabet with probabilities summing to 1.

    The machine is the trie of all spellings.  A symbol is emitted on the
    first arc whose subtree holds only that symbol's spellings (or by the
    final output when a spelling ends above such an arc); weights below that
    arc are ratios of subtree masses.  The domain need not be prefix-free.
    """
    if len(out_labels) < 2:
        raise ValueError("need at least two output symbols")
    spellings: Dict[Tuple[int, ...], Tuple[int, float]] = {}
    for w in range(len(out_labels)):
        count = rng.randint(1, max_spellings)
        mine: List[Tuple[int, ...]] = []
        for _ in range(50 * count):
            if len(mine) == count:
                break
            s = tuple(rng.randrange(len(in_labels)) for _ in range(rng.randint(1, max_spelling_len)))
            if s not in spellings and s not in mine:
                mine.append(s)
        probs = [rng.uniform(0.2, 1.0) for _ in mine]
        total = sum(probs)
        for s, p in zip(mine, probs):
            spellings[s] = (w, p / total)

    nodes: Dict[Tuple[int, ...], int] = {(): 0}
    for s in sorted(spellings):
        for i in range(1, len(s) + 1):
            nodes.setdefault(s[:i], len(nodes))
    below: Dict[Tuple[int, ...], Set[int]] = {pre: set() for pre in nodes}
    mass: Dict[Tuple[int, ...], float] = {pre: 0.0 for pre in nodes}
    for s, (w, p) in spellings.items():
        for i in range(len(s) + 1):
            below[s[:i]].add(w)
            mass[s[:i]] += p

    n = len(nodes)
    arcs: List[Dict[int, Arc]] = [{} for _ in range(n)]
    finals: Dict[int, PairOutput] = {}
    for pre, q in nodes.items():
        exclusive = len(below[pre]) == 1
        if pre in spellings:
            w, p = spellings[pre]
            finals[q] = PairOutput((), p / mass[pre]) if exclusive else PairOutput((w,), p)
        if not pre:
            continue
        parent = pre[:-1]
        if not exclusive:
            out = PAIR_ONE
        elif len(below[parent]) > 1:
            out = PairOutput((next(iter(below[pre])),), mass[pre])
        else:
            out = PairOutput((), mass[pre] / mass[parent])
        arcs[nodes[parent]][pre[-1]] = (q, out)
    return Transducer(tuple(in_labels), "pair", n, 0, tuple(arcs), PAIR_ONE, finals, tuple(out_labels))


def random_pair_transducer(
    rng: random.Random,
    out_labels: Sequence[str],
    num_states: int = 5,
    num_symbols: int = 3,
    max_word: int = 2,
) -> Transducer:
    """Arbitrary pair transducer with output words of length up to ``max_word``."""
    n, k = num_states, num_symbols
    m = len(out_labels)

    def word() -> Tuple[int, ...]:
        return tuple(rng.randrange(m) for _ in range(rng.randint(0, max_word)))

    arcs: List[Dict[int, Arc]] = [{} for _ in range(n)]
    for q in range(n):
        for a in range(k):
            if rng.random() < 0.6:
                arcs[q][a] = (rng.randrange(n), PairOutput(word(), _weight(rng)))
    finals = {q: PairOutput(word(), _weight(rng)) for q in range(n) if rng.random() < 0.5}
    iota = PairOutput((), _weight(rng, 0.5, 1.0))
    return Transducer(labels(k), "pair", n, 0, tuple(arcs), iota, finals, tuple(out_labels))


def completed_masses(ft: FailureTransducer) -> List[float]:
    """Per-state mass of the expansion (final output plus completed arcs)."""
    table = completed_table(ft)
    return [ft.finals.get(q, 0.0) + sum(out for _, out in table[q].values()) for q in range(ft.num_states)]
