"""Line-oriented text format for transducers and failure transducers.

One record per line, fields separated by whitespace::

    T weight-only|pair          machine kind (first record)
    A <labels...>               input alphabet
    O <labels...>               output alphabet (pair machines)
    S <count>                   state count, only needed for trailing isolated states
    I <state> [<word>] <weight> initial state and output
    E <state> [<word>] <weight> final state and output
    arc <src> <sym> <dst> [<word>] <weight>
    fail <src> <dst> [<word>] <weight>
    P <state> <left> <right>    state-pair provenance of a composed machine

Words appear on pair machines only: ``-`` is the empty word, otherwise output
labels joined by commas.  ``#`` starts a comment.  Printing is canonical
(records in the order above, states and symbols ascending, weights with 17
significant digits), so ``parse(print(m)) == m``.
"""
from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from .algebra import PAIR, WEIGHT, PairOutput, Value
from .errors import FormatSyntaxError, InvariantViolation
from .failure import FailureTransducer
from .transducer import Arc, Transducer

KINDS = (WEIGHT.kind, PAIR.kind)


def _fmt_weight(w: float) -> str:
    return format(w, ".17g")


def _fmt_value(kind: str, v: Value, out_labels) -> str:
    if kind == WEIGHT.kind:
        return _fmt_weight(v)
    word = ",".join(out_labels[o] for o in v.word) or "-"
    return f"{word} {_fmt_weight(v.weight)}"


def dumps(m: Transducer) -> str:
    """Canonical text of ``m``."""
    lines = [f"T {m.kind}", " ".join(["A", *m.input_labels])]
    if m.kind == PAIR.kind:
        lines.append(" ".join(["O", *m.output_labels]))
    failures = m.failures if isinstance(m, FailureTransducer) else {}
    pairs = m.pairs if isinstance(m, FailureTransducer) else None
    if m.num_states != _referenced_states(m, failures, pairs):
        lines.append(f"S {m.num_states}")
    val = lambda v: _fmt_value(m.kind, v, m.output_labels)  # noqa: E731
    lines.append(f"I {m.initial} {val(m.initial_output)}")
    lines += [f"E {q} {val(m.finals[q])}" for q in sorted(m.finals)]
    for q in range(m.num_states):
        for a in sorted(m.arcs[q]):
            d, out = m.arcs[q][a]
            lines.append(f"arc {q} {m.input_labels[a]} {d} {val(out)}")
    lines += [f"fail {q} {failures[q][0]} {val(failures[q][1])}" for q in sorted(failures)]
    if pairs is not None:
        lines += [f"P {q} {l} {r}" for q, (l, r) in enumerate(pairs)]
    return "\n".join(lines) + "\n"


def _referenced_states(m: Transducer, failures, pairs) -> int:
    used = [m.initial, *m.finals, *failures, *(r for r, _ in failures.values())]
    for q, row in enumerate(m.arcs):
        if row:
            used.append(q)
            used.extend(d for d, _ in row.values())
    if pairs:
        used.append(len(pairs) - 1)
    return max(used) + 1


class _Parser:
    def __init__(self) -> None:
        self.kind: Optional[str] = None
        self.inputs: Optional[Tuple[str, ...]] = None
        self.outputs: Tuple[str, ...] = ()
        self.declared_states: Optional[int] = None
        self.initial: Optional[Tuple[int, Value]] = None
        self.finals: Dict[int, Value] = {}
        self.arcs: Dict[Tuple[int, int], Arc] = {}
        self.failures: Dict[int, Arc] = {}
        self.pairs: Dict[int, Tuple[int, int]] = {}
        self.lineno = 0

    def error(self, msg: str) -> FormatSyntaxError:
        return FormatSyntaxError(msg, self.lineno)

    def state(self, tok: str) -> int:
        try:
            q = int(tok)
        except ValueError:
            raise self.error(f"bad state id {tok!r}") from None
        if q < 0:
            raise self.error(f"negative state id {q}")
        return q

    def weight(self, tok: str) -> float:
        try:
            w = float(tok)
        except ValueError:
            raise self.error(f"bad weight {tok!r}") from None
        if not (w >= 0.0 and math.isfinite(w)):
            raise InvariantViolation(f"line {self.lineno}: weight {tok} is outside the non-negative reals")
        return w

    def value(self, toks: List[str]) -> Value:
        assert self.kind is not None
        if self.kind == WEIGHT.kind:
            if len(toks) != 1:
                raise self.error("expected a single weight")
            return self.weight(toks[0])
        if len(toks) != 2:
            raise self.error("expected a word and a weight")
        word_tok, w = toks
        if word_tok == "-":
            word: Tuple[int, ...] = ()
        else:
            index = {lab: i for i, lab in enumerate(self.outputs)}
            try:
                word = tuple(index[p] for p in word_tok.split(","))
            except KeyError as e:
                raise self.error(f"unknown output label {e.args[0]!r}") from None
        return PairOutput(word, self.weight(w))

    def need_header(self) -> None:
        if self.kind is None or self.inputs is None:
            raise self.error("T and A records must come before the machine body")

    def feed(self, fields: List[str]) -> None:
        rec, rest = fields[0], fields[1:]
        if rec == "T":
            if self.kind is not None or len(rest) != 1 or rest[0] not in KINDS:
                raise self.error("expected one 'T weight-only|pair' record")
            self.kind = rest[0]
        elif rec in ("A", "O"):
            if len(set(rest)) != len(rest):
                raise self.error(f"repeated label in {rec} record")
            if rec == "A":
                if self.inputs is not None:
                    raise self.error("repeated A record")
                self.inputs = tuple(rest)
            else:
                if self.kind != PAIR.kind:
                    raise self.error("O records belong to pair machines")
                if any(lab == "-" or "," in lab for lab in rest):
                    raise self.error("output labels may not be '-' or contain ','")
                self.outputs = tuple(rest)
        elif rec == "S":
            if len(rest) != 1:
                raise self.error("expected 'S <count>'")
            self.declared_states = self.state(rest[0])
        elif rec in ("I", "E"):
            self.need_header()
            if len(rest) < 2:
                raise self.error(f"{rec} record is too short")
            q, v = self.state(rest[0]), self.value(rest[1:])
            if rec == "I":
                if self.initial is not None:
                    raise self.error("repeated I record")
                self.initial = (q, v)
            else:
                if q in self.finals:
                    raise self.error(f"state {q} is final twice")
                self.finals[q] = v
        elif rec == "arc":
            self.need_header()
            if len(rest) < 4:
                raise self.error("arc record is too short")
            src, lab, dst = self.state(rest[0]), rest[1], self.state(rest[2])
            try:
                a = self.inputs.index(lab)
            except ValueError:
                raise self.error(f"unknown input label {lab!r}") from None
            if (src, a) in self.arcs:
                raise self.error(f"duplicate arc from state {src} on {lab!r}")
            self.arcs[(src, a)] = (dst, self.value(rest[3:]))
        elif rec == "fail":
            self.need_header()
            if len(rest) < 3:
                raise self.error("fail record is too short")
            src, dst = self.state(rest[0]), self.state(rest[1])
            if src in self.failures:
                raise self.error(f"state {src} has two failure arcs")
            self.failures[src] = (dst, self.value(rest[2:]))
        elif rec == "P":
            if len(rest) != 3:
                raise self.error("expected 'P <state> <left> <right>'")
            q, l, r = (self.state(t) for t in rest)
            if q in self.pairs:
                raise self.error(f"repeated P record for state {q}")
            self.pairs[q] = (l, r)
        else:
            raise self.error(f"unknown record {rec!r}")

    def build(self) -> Transducer:
        if self.kind is None or self.inputs is None:
            raise FormatSyntaxError("missing T or A record")
        if self.initial is None:
            raise FormatSyntaxError("missing I record")
        used = [self.initial[0], *self.finals, *self.failures, *(r for r, _ in self.failures.values()),
                *self.pairs]
        for (s, _), (d, _) in self.arcs.items():
            used += [s, d]
        n = max(used) + 1
        if self.declared_states is not None:
            if self.declared_states < n:
                raise InvariantViolation(f"S declares {self.declared_states} states but state {n - 1} is used")
            n = self.declared_states
        table: List[Dict[int, Arc]] = [{} for _ in range(n)]
        for (s, a), arc in sorted(self.arcs.items()):
            table[s][a] = arc
        q0, iota = self.initial
        args = (self.inputs, self.kind, n, q0, tuple(table), iota, dict(sorted(self.finals.items())),
                self.outputs)
        if not self.failures and not self.pairs:
            return Transducer(*args)
        pairs = None
        if self.pairs:
            if set(self.pairs) != set(range(n)):
                raise InvariantViolation("P records must cover every state")
            pairs = tuple(self.pairs[q] for q in range(n))
        return FailureTransducer(*args, failures=dict(sorted(self.failures.items())), pairs=pairs)


def loads(text: str) -> Transducer:
    """Parse a machine; returns a ``FailureTransducer`` when the text has
    ``fail`` or ``P`` records."""
    p = _Parser()
    for lineno, line in enumerate(text.splitlines(), 1):
        p.lineno = lineno
        fields = line.split("#", 1)[0].split()
        if fields:
            p.feed(fields)
    return p.build()


def load(path: str) -> Transducer:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(m: Transducer, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(m))
