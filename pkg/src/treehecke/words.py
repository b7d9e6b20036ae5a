"""Coset words: the address space of the double cosets ``K g K``.

A word is a tuple over ``1..k`` of odd length ``2t - 1`` (or empty, for ``K``
itself). Odd positions carry suborbit classes, even positions refinement
classes. The degree of a word is ``len + 1`` (0 for the empty word).
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .errors import InvalidWord

Word = tuple[int, ...]
EMPTY: Word = ()


def degree(w: Sequence[int]) -> int:
    return len(w) + 1 if w else 0


def validate_word(w: Iterable[int], k: int) -> Word:
    w = tuple(int(a) for a in w)
    if w and len(w) % 2 == 0:
        raise InvalidWord(f"word {list(w)} has even length {len(w)}")
    bad = [a for a in w if not 1 <= a <= k]
    if bad:
        raise InvalidWord(f"letters {bad} of {list(w)} outside 1..{k}")
    return w


def words_of_degree(k: int, n: int) -> list[Word]:
    """All words of degree ``n``, lexicographic; there are ``k^(n-1)`` for ``n >= 2``."""
    if n == 0:
        return [EMPTY]
    if n < 0 or n % 2:
        return []
    return list(product(range(1, k + 1), repeat=n - 1))


def words_up_to(k: int, max_degree: int) -> list[Word]:
    out: list[Word] = []
    for n in range(0, max_degree + 1, 2):
        out.extend(words_of_degree(k, n))
    return out


def shortlex(w: Word) -> tuple[int, Word]:
    return (len(w), w)


def skeleton(w: Word) -> Word:
    """Odd-position letters."""
    return w[0::2]


def refinement(w: Word) -> Word:
    """Even-position letters."""
    return w[1::2]


def interleave(skel: Sequence[int], evens: Sequence[int]) -> Word:
    if len(evens) != max(len(skel) - 1, 0):
        raise InvalidWord("refinement letters must number one fewer than skeleton letters")
    out = [skel[0]] if skel else []
    for a, b in zip(evens, skel[1:]):
        out += [a, b]
    return tuple(out)


def format_word(w: Word) -> str:
    return ",".join(map(str, w))


def parse_word(text: str) -> Word:
    text = text.strip().strip("()[]")
    if not text or text in ("e", "eps", "ε"):
        return EMPTY
    try:
        return tuple(int(tok) for tok in text.replace(" ", ",").split(",") if tok)
    except ValueError:
        raise InvalidWord(f"cannot parse word {text!r}") from None
