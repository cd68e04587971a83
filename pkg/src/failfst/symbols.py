"""Symbol tables: alphabets are tuples of printable labels, symbols are their
indices."""
from __future__ import annotations

from typing import Sequence, Tuple

from .algebra import Word

DOLLAR = "$"


def encode(labels: Sequence[str], text: str | Sequence[str]) -> Word:
    """Turn a word into symbol ids.

    A string containing whitespace is split on it; any other string is read
    one character per symbol.  Sequences of labels are taken as they are.
    Raises ``KeyError`` for a label outside ``labels``.
    """
    index = {lab: i for i, lab in enumerate(labels)}
    if isinstance(text, str):
        parts = text.split() if any(c.isspace() for c in text) else list(text)
    else:
        parts = list(text)
    return tuple(index[p] for p in parts)


def decode(labels: Sequence[str], word: Word, sep: str = "") -> str:
    return sep.join(labels[i] for i in word)


def remap(word: Word, table: Sequence[int]) -> Word:
    return tuple(table[i] for i in word)


def translation(src: Sequence[str], dst: Sequence[str]) -> Tuple[int, ...]:
    """Map ids of ``src`` onto ids of ``dst`` by label; every label must exist."""
    index = {lab: i for i, lab in enumerate(dst)}
    return tuple(index[lab] for lab in src)
