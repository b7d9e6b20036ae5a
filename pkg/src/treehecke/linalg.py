"""Exact linear algebra over the rationals on sparse vectors.

Vectors are mappings ``column -> number`` (columns are any sortable keys) or
dense sequences. Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping, Sequence

Vector = Mapping[Hashable, Fraction | int]


def _sparse(vec: Vector | Sequence) -> dict:
    items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
    return {c: Fraction(a) for c, a in items if a != 0}


class Echelon:
    """Row-echelon basis grown one vector at a time.

    Each stored row remembers which combination of the inserted vectors it
    equals, so membership queries can return explicit coefficients.
    """

    def __init__(self):
        # pivot column -> (row with pivot entry 1, combination of inserted tags)
        self._rows: dict = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: dict, combo: dict) -> tuple[dict, dict]:
        vec = dict(vec)
        combo = dict(combo)
        done: set = set()
        while True:
            pending = [c for c in vec if c not in done]
            if not pending:
                return vec, combo
            c = min(pending)
            if c not in self._rows:
                done.add(c)
                continue
            a = vec[c]
            row, row_combo = self._rows[c]
            for col, x in row.items():
                y = vec.get(col, 0) - a * x
                if y:
                    vec[col] = y
                else:
                    vec.pop(col, None)
            for tag, x in row_combo.items():
                y = combo.get(tag, 0) - a * x
                if y:
                    combo[tag] = y
                else:
                    combo.pop(tag, None)

    def add(self, vec: Vector | Sequence, tag: Hashable = None) -> bool:
        """Insert a vector; returns False if it was already in the span."""
        reduced, combo = self._reduce(_sparse(vec), {} if tag is None else {tag: Fraction(1)})
        if not reduced:
            return False
        pivot = min(reduced)
        a = reduced[pivot]
        self._rows[pivot] = (
            {c: x / a for c, x in reduced.items()},
            {t: x / a for t, x in combo.items()},
        )
        return True

    def contains(self, vec: Vector | Sequence) -> bool:
        reduced, _ = self._reduce(_sparse(vec), {})
        return not reduced

    def express(self, vec: Vector | Sequence) -> dict | None:
        """Coefficients ``{tag: c}`` with ``vec == sum c * inserted[tag]``, or None."""
        reduced, combo = self._reduce(_sparse(vec), {})
        if reduced:
            return None
        return {t: -x for t, x in combo.items()}


def rank(rows: Sequence[Vector | Sequence]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def solve(vectors: Sequence[Vector | Sequence], target: Vector | Sequence) -> list[Fraction] | None:
    """Some ``x`` with ``sum x_i * vectors[i] == target``, or None if none exists."""
    ech = Echelon()
    for i, v in enumerate(vectors):
        ech.add(v, tag=i)
    coeffs = ech.express(target)
    if coeffs is None:
        return None
    return [coeffs.get(i, Fraction(0)) for i in range(len(vectors))]
