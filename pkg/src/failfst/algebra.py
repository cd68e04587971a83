"""Output monoids and the two weight semirings.

Weights live in the non-negative reals under multiplication.  Pair outputs
combine an output word (a tuple of output-symbol ids) with a weight; their
product is componentwise.
"""
from __future__ import annotations

import enum
import math
from typing import Iterable, NamedTuple, Tuple, Union

from .errors import InvariantViolation

Word = Tuple[int, ...]
EPSILON: Word = ()


class PairOutput(NamedTuple):
    word: Word
    weight: float

    def __str__(self) -> str:
        return f"<{''.join(map(str, self.word)) or 'eps'}, {self.weight!r}>"


Value = Union[float, PairOutput]

PAIR_ONE = PairOutput(EPSILON, 1.0)


def check_weight(w: float) -> float:
    if not (w >= 0.0) or math.isinf(w):
        raise InvariantViolation(f"weight {w!r} is not a finite non-negative real")
    return float(w)


def monoid_product(a: PairOutput, b: PairOutput) -> PairOutput:
    return PairOutput(a.word + b.word, a.weight * b.weight)


class Monoid:
    """A multiplicative output monoid: ``one`` and ``times``."""

    kind: str = ""
    one: Value

    def times(self, a, b):
        raise NotImplementedError

    def weight(self, v) -> float:
        raise NotImplementedError

    def word(self, v) -> Word:
        raise NotImplementedError

    def with_weight(self, v, w: float):
        raise NotImplementedError


class _WeightMonoid(Monoid):
    kind = "weight-only"
    one = 1.0

    def times(self, a: float, b: float) -> float:
        return a * b

    def weight(self, v: float) -> float:
        return v

    def word(self, v: float) -> Word:
        return EPSILON

    def with_weight(self, v: float, w: float) -> float:
        return w


class _PairMonoid(Monoid):
    kind = "pair"
    one = PAIR_ONE

    def times(self, a: PairOutput, b: PairOutput) -> PairOutput:
        return monoid_product(a, b)

    def weight(self, v: PairOutput) -> float:
        return v.weight

    def word(self, v: PairOutput) -> Word:
        return v.word

    def with_weight(self, v: PairOutput, w: float) -> PairOutput:
        return PairOutput(v.word, w)


WEIGHT = _WeightMonoid()
PAIR = _PairMonoid()


def monoid_for(kind: str) -> Monoid:
    if kind == WEIGHT.kind:
        return WEIGHT
    if kind == PAIR.kind:
        return PAIR
    raise ValueError(f"unknown output kind {kind!r}")


class SemiringTag(enum.Enum):
    PLUS = "plus"
    MAX = "max"

    def plus(self, a: float, b: float) -> float:
        return a + b if self is SemiringTag.PLUS else max(a, b)

    def sum(self, values: Iterable[float]) -> float:
        if self is SemiringTag.PLUS:
            return math.fsum(values)
        return max(values, default=0.0)

    @classmethod
    def parse(cls, text: str) -> "SemiringTag":
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown semiring {text!r} (expected 'plus' or 'max')") from None


def semiring_sum(tag: SemiringTag, values: Iterable[float]) -> float:
    return tag.sum(values)
