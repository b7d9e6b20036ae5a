"""Elements of the Hecke algebra and their products.

The leading-term product needs nothing but the words: the top-degree part of
``1_{KuK} * 1_{KvK}`` is ``sum_b 1_{K(u b v)K}``, each term with coefficient
one. Full products are read from a precomputed structure-constant table.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import InvalidWord, MissingStructureConstants
from .tree import StructureConstantTable
from .words import EMPTY, Word, degree, format_word, parse_word, shortlex, words_up_to


def leading_product(u: Word, v: Word, k: int) -> Counter:
    """Top-degree terms of ``1_{KuK} * 1_{KvK}`` as a multiset of words."""
    if not u or not v:
        return Counter({u + v: 1})
    return Counter({u + (b,) + v: 1 for b in range(1, k + 1)})


def leading_product_multi(ws: Sequence[Word], k: int) -> Counter:
    """Top-degree terms of ``1_{Kw_1K} * ... * 1_{Kw_mK}``: ``k^(m-1)`` words.

    Empty factors are units and are skipped.
    """
    factors = [w for w in ws if w]
    if not factors:
        return Counter({EMPTY: 1})
    out: Counter = Counter()
    for joins in product(range(1, k + 1), repeat=len(factors) - 1):
        word = list(factors[0])
        for b, w in zip(joins, factors[1:]):
            word.append(b)
            word.extend(w)
        out[tuple(word)] += 1
    return out


class HeckeElement:
    """Finite combination ``sum a_w 1_{KwK}`` with exact rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Rational | int] | Iterable[tuple[Word, Rational | int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Fraction] = {}
        for w, a in items:
            acc[tuple(w)] = acc.get(tuple(w), Fraction(0)) + Fraction(a)
        self._terms = {w: a for w, a in sorted(acc.items(), key=lambda kv: shortlex(kv[0])) if a != 0}

    @classmethod
    def basis(cls, w: Word, coefficient: Rational | int = 1) -> HeckeElement:
        return cls({tuple(w): coefficient})

    @classmethod
    def unit(cls) -> HeckeElement:
        return cls.basis(EMPTY)

    @property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def __getitem__(self, w: Word) -> Fraction:
        return self._terms.get(tuple(w), Fraction(0))

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Largest degree in the support; -1 for the zero element."""
        return max((degree(w) for w in self._terms), default=-1)

    def leading(self) -> HeckeElement:
        n = self.degree
        return HeckeElement({w: a for w, a in self._terms.items() if degree(w) == n})

    def __add__(self, other: HeckeElement) -> HeckeElement:
        return HeckeElement(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> HeckeElement:
        return HeckeElement({w: -a for w, a in self._terms.items()})

    def __sub__(self, other: HeckeElement) -> HeckeElement:
        return self + (-other)

    def scale(self, c: Rational | int) -> HeckeElement:
        return HeckeElement({w: c * a for w, a in self._terms.items()})

    def __mul__(self, c):
        if isinstance(c, HeckeElement):
            raise TypeError("use mul(a, b, table) for the convolution product")
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "HeckeElement(0)"
        parts = [f"{a}*d[{format_word(w) or 'e'}]" for w, a in self._terms.items()]
        return "HeckeElement(" + " + ".join(parts) + ")"

    def to_json(self) -> list[dict]:
        return [
            {"word": format_word(w), "numerator": a.numerator, "denominator": a.denominator}
            for w, a in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> HeckeElement:
        return cls({parse_word(t["word"]): Fraction(t["numerator"], t["denominator"]) for t in data})


def mul(a: HeckeElement, b: HeckeElement, table: StructureConstantTable) -> HeckeElement:
    """Convolution product, extended bilinearly from the table rows."""
    acc: dict[Word, Fraction] = {}
    for u, x in a:
        for v, y in b:
            for w, c in table.row(u, v).items():
                acc[w] = acc.get(w, Fraction(0)) + x * y * c
    return HeckeElement(acc)


def mul_words(ws: Sequence[Word], table: StructureConstantTable) -> HeckeElement:
    """``1_{Kw_1K} * ... * 1_{Kw_mK}``, multiplied left to right."""
    out = HeckeElement.unit()
    for w in ws:
        out = mul(out, HeckeElement.basis(w), table)
    return out


@dataclass(frozen=True)
class CommutativityReport:
    k: int
    degree_cap: int
    commutative: bool
    pairs_checked: int
    witness: tuple[Word, Word] | None = None
    leading_uv: tuple[Word, ...] = ()
    leading_vu: tuple[Word, ...] = ()
    full_products_differ: bool | None = None

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "degree_cap": self.degree_cap,
            "commutative": self.commutative,
            "pairs_checked": self.pairs_checked,
        }
        if self.witness is not None:
            out["witness"] = {
                "u": format_word(self.witness[0]),
                "v": format_word(self.witness[1]),
                "leading_uv": [format_word(w) for w in self.leading_uv],
                "leading_vu": [format_word(w) for w in self.leading_vu],
                "full_products_differ": self.full_products_differ,
            }
        return out


def commutativity_probe(k: int, degree_cap: int, table: StructureConstantTable | None = None) -> CommutativityReport:
    """Decide commutativity up to ``degree_cap``.

    For ``k == 1`` every pair of basis elements is multiplied both ways using
    the table, which is then required. For ``k >= 2`` the pair ``(1), (2)`` is a
    witness: its two leading multisets are disjoint. When a table is supplied
    the full products of the witness are compared as well.
    """
    if k == 1:
        if table is None:
            raise MissingStructureConstants((1,), (1,))
        checked = 0
        for u in words_up_to(1, degree_cap):
            for v in words_up_to(1, degree_cap - degree(u)):
                if shortlex(u) > shortlex(v):
                    continue
                a, b = HeckeElement.basis(u), HeckeElement.basis(v)
                checked += 1
                if mul(a, b, table) != mul(b, a, table):
                    return CommutativityReport(k, degree_cap, False, checked, (u, v), full_products_differ=True)
        return CommutativityReport(k, degree_cap, True, checked)
    if k < 1:
        raise InvalidWord(f"k must be positive, got {k}")
    u, v = (1,), (2,)
    uv = tuple(sorted(leading_product(u, v, k)))
    vu = tuple(sorted(leading_product(v, u, k)))
    if set(uv) & set(vu):
        raise AssertionError("leading terms of the witness pair overlap")
    differ = None
    if table is not None:
        a, b = HeckeElement.basis(u), HeckeElement.basis(v)
        differ = mul(a, b, table) != mul(b, a, table)
    return CommutativityReport(k, degree_cap, False, 1, (u, v), uv, vu, differ)

