"""Degree-by-degree generation analysis.

Leading terms of products never change the odd-position letters (the
skeleton), so the equations of each degree split into independent systems,
one per skeleton. A system's columns are the ``k^(t-1)`` words on its skeleton;
each equation is a product of sub-base words whose concatenation, with the
junction letters left free, covers that skeleton.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .combinatorics import f, f_prime, master_sum
from .errors import NotExpressible, RangeError, SkeletonTooShort, VerificationFailure
from .hecke import HeckeElement, leading_product_multi, mul_words
from .linalg import Echelon
from .tree import StructureConstantTable
from .words import Word, degree, format_word, interleave, refinement, shortlex, skeleton, validate_word, words_of_degree

ONE_GENERATOR = "finitely_generated_one_generator"
STRICTLY_GROWING = "strictly_growing"


@dataclass(frozen=True)
class SubBase:
    """Canonical sub-base of degree at most ``2r``: every refinement letter differs from 1."""

    k: int
    r: int
    words: tuple[Word, ...]

    def __contains__(self, w: Word) -> bool:
        return tuple(w) in self._set

    @property
    def _set(self) -> frozenset[Word]:
        return frozenset(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def of_degree(self, n: int) -> list[Word]:
        return [w for w in self.words if degree(w) == n]


def subbase(k: int, r: int) -> SubBase:
    if k < 1 or r < 1:
        raise RangeError(f"subbase needs k, r >= 1, got k={k}, r={r}")
    words = []
    for t in range(1, r + 1):
        for skel in product(range(1, k + 1), repeat=t):
            for evens in product(range(2, k + 1), repeat=t - 1):
                words.append(interleave(skel, evens))
    return SubBase(k, r, tuple(sorted(words, key=shortlex)))


def compositions(t: int, min_parts: int = 1) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of ``t``, grouped by number of parts."""
    for m in range(min_parts, t + 1):
        for cuts in combinations(range(1, t), m - 1):
            bounds = (0,) + cuts + (t,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


@dataclass(frozen=True)
class Equation:
    """A convolution product of sub-base words."""

    factors: tuple[Word, ...]
    k: int

    @property
    def degree(self) -> int:
        return sum(degree(w) for w in self.factors)

    def leading(self) -> Counter:
        return leading_product_multi(self.factors, self.k)

    def __str__(self) -> str:
        return " * ".join(f"d[{format_word(w)}]" for w in self.factors)


@dataclass(frozen=True)
class EquationSystem:
    skeleton: Word
    k: int
    equations: tuple[Equation, ...]
    columns: tuple[Word, ...]

    @property
    def degree(self) -> int:
        return 2 * len(self.skeleton)

    def matrix(self) -> list[list[int]]:
        index = {w: i for i, w in enumerate(self.columns)}
        rows = []
        for eq in self.equations:
            row = [0] * len(self.columns)
            for w, mult in eq.leading().items():
                row[index[w]] += mult
            rows.append(row)
        return rows

    def appearances(self) -> dict[Word, int]:
        """How many equations have each column among their leading terms."""
        counts = Counter()
        for eq in self.equations:
            counts.update(set(eq.leading()))
        return {w: counts.get(w, 0) for w in self.columns}


def expected_equation_count(k: int, t: int) -> int:
    return k ** (t - 1) - f_prime(t, k)


def equation_system(skel: Sequence[int], sub: SubBase) -> EquationSystem:
    """All equations of degree ``2t`` on this skeleton built from the sub-base."""
    k = sub.k
    skel = tuple(int(a) for a in skel)
    t = len(skel)
    if t < 2:
        raise SkeletonTooShort(f"skeleton needs at least 2 letters, got {list(skel)}")
    if any(not 1 <= a <= k for a in skel):
        raise RangeError(f"skeleton letters must lie in 1..{k}")
    if sub.r < t - 1:
        raise RangeError(f"sub-base of degree <= {2 * sub.r} cannot build equations of degree {2 * t}")
    equations = []
    for comp in compositions(t, min_parts=2):
        choices = []
        pos = 0
        for s in comp:
            part = skel[pos : pos + s]
            pos += s
            choices.append([interleave(part, ev) for ev in product(range(2, k + 1), repeat=s - 1)])
        for factors in product(*choices):
            for w in factors:
                if w not in sub:
                    raise AssertionError(f"factor {w} missing from the sub-base")
            equations.append(Equation(tuple(factors), k))
    expected = expected_equation_count(k, t)
    if len(equations) != expected:
        raise VerificationFailure(
            f"{len(equations)} equations on skeleton {list(skel)}, expected {expected}"
        )
    columns = tuple(interleave(skel, ev) for ev in product(range(1, k + 1), repeat=t - 1))
    return EquationSystem(tuple(skel), k, tuple(equations), columns)


@dataclass(frozen=True)
class RankReport:
    rank: int
    rows: int
    columns: int
    weakly_independent: bool

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rows": self.rows,
            "columns": self.columns,
            "weakly_independent": self.weakly_independent,
        }


def _matrix_rank(rows: tuple[tuple[int, ...], ...]) -> int:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def rank_of(rows: Sequence[Sequence[int]]) -> int:
    return _matrix_rank(tuple(tuple(r) for r in rows))


def rank_check(system: EquationSystem | Sequence[Sequence[int]]) -> RankReport:
    """Exact rank of the leading-term matrix; independent iff rank equals the row count."""
    rows = system.matrix() if isinstance(system, EquationSystem) else [list(r) for r in system]
    r = rank_of(rows)
    ncols = len(rows[0]) if rows else (len(system.columns) if isinstance(system, EquationSystem) else 0)
    return RankReport(r, len(rows), ncols, r == len(rows))


def chosen_words(skel: Sequence[int], k: int) -> list[Word]:
    """Words on the skeleton whose refinement letters all differ from 1."""
    return [interleave(skel, ev) for ev in product(range(2, k + 1), repeat=len(skel) - 1)]


@dataclass(frozen=True)
class SkeletonCompletion:
    skeleton: Word
    equations: int
    rank: int
    complement_dim: int
    direct_sum: bool
    unique: bool
    ambiguous: bool
    new_elements: tuple[Word, ...]


@dataclass(frozen=True)
class CompletionReport:
    k: int
    t: int
    skeletons: tuple[SkeletonCompletion, ...] = field(repr=False)

    @property
    def degree(self) -> int:
        return 2 * self.t

    @property
    def complement_dim(self) -> int:
        dims = {s.complement_dim for s in self.skeletons}
        if len(dims) != 1:
            raise VerificationFailure(f"complement dimension varies across skeletons: {sorted(dims)}")
        return dims.pop()

    @property
    def unique(self) -> bool:
        return all(s.unique for s in self.skeletons)

    @property
    def ambiguous(self) -> bool:
        return any(s.ambiguous for s in self.skeletons)

    @property
    def weakly_independent(self) -> bool:
        return all(s.rank == s.equations for s in self.skeletons)

    @property
    def equations(self) -> int:
        return sum(s.equations for s in self.skeletons)

    @property
    def rank(self) -> int:
        return sum(s.rank for s in self.skeletons)

    @property
    def new_elements(self) -> dict[Word, tuple[Word, ...]]:
        return {s.skeleton: s.new_elements for s in self.skeletons}

    def to_json(self, with_elements: bool = False) -> dict:
        out = {
            "k": self.k,
            "t": self.t,
            "degree": self.degree,
            "skeletons": len(self.skeletons),
            "equations": self.equations,
            "rank": self.rank,
            "weakly_independent": self.weakly_independent,
            "complement_dim": self.complement_dim,
            "unique": self.unique,
            "ambiguous": self.ambiguous,
        }
        if with_elements:
            out["new_elements"] = {
                format_word(s.skeleton): [format_word(w) for w in s.new_elements] for s in self.skeletons
            }
        return out


@lru_cache(maxsize=None)
def _complete(rows: tuple[tuple[int, ...], ...], chosen: tuple[int, ...], ncols: int) -> tuple[int, bool, bool]:
    # rank of the rows, whether rows + chosen unit vectors span everything,
    # and whether the chosen unit vectors stay independent modulo the rows
    ech = Echelon()
    for row in rows:
        ech.add(row)
    row_rank = ech.rank
    independent = all(ech.add({c: 1}) for c in chosen)
    spans = all(ech.contains({c: 1}) for c in range(ncols))
    return row_rank, spans, independent


def complete_skeleton(system: EquationSystem) -> SkeletonCompletion:
    k = system.k
    columns = system.columns
    rows = tuple(tuple(r) for r in system.matrix())
    chosen = chosen_words(system.skeleton, k)
    index = {w: i for i, w in enumerate(columns)}
    chosen_idx = tuple(index[w] for w in chosen)
    row_rank, spans, independent = _complete(rows, chosen_idx, len(columns))
    # a choice is forced when the chosen words strictly out-count every other
    # column in the number of equations they appear in
    counts = system.appearances()
    chosen_set = set(chosen)
    others = [counts[w] for w in columns if w not in chosen_set]
    mine = [counts[w] for w in chosen]
    ambiguous = bool(mine and others) and min(mine) <= max(others)
    return SkeletonCompletion(
        skeleton=system.skeleton,
        equations=len(rows),
        rank=row_rank,
        complement_dim=len(columns) - row_rank,
        direct_sum=spans and independent and row_rank + len(chosen) == len(columns),
        unique=spans and independent,
        ambiguous=ambiguous,
        new_elements=tuple(chosen),
    )


def completion_check(k: int, t: int) -> CompletionReport:
    """Complete the sub-base of degree ``<= 2(t-1)`` to degree ``2t``, skeleton by skeleton."""
    if t < 2:
        raise SkeletonTooShort(f"completion needs t >= 2, got {t}")
    sub = subbase(k, t - 1)
    results = []
    for skel in product(range(1, k + 1), repeat=t):
        results.append(complete_skeleton(equation_system(skel, sub)))
    return CompletionReport(k, t, tuple(results))


@dataclass(frozen=True)
class DegreeRecord:
    degree: int
    subbase_size: int
    equations: int
    rank: int
    unique_completion: bool

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "subbase_size": self.subbase_size,
            "equations": self.equations,
            "rank": self.rank,
            "unique_completion": self.unique_completion,
        }


@dataclass(frozen=True)
class GenerationVerdict:
    k: int
    max_degree: int
    degrees: tuple[DegreeRecord, ...]
    verdict: str
    strictly_nested: bool

    @property
    def cardinalities(self) -> list[int]:
        return [rec.subbase_size for rec in self.degrees]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "degrees": [rec.to_json() for rec in self.degrees],
            "verdict": self.verdict,
        }


def generation_verdict(k: int, max_degree: int) -> GenerationVerdict:
    if max_degree < 2 or max_degree % 2:
        raise RangeError(f"maximal degree must be even and >= 2, got {max_degree}")
    records = []
    previous: SubBase | None = None
    nested = True
    for t in range(1, max_degree // 2 + 1):
        sub = subbase(k, t)
        expected = sum(f(s, k) for s in range(1, t + 1))
        if len(sub) != expected:
            raise VerificationFailure(f"sub-base size {len(sub)} at degree {2 * t}, expected {expected}")
        if previous is not None:
            grew = set(previous.words) < set(sub.words)
            nested = nested and grew
        if t == 1:
            records.append(DegreeRecord(2, len(sub), 0, 0, True))
        else:
            report = completion_check(k, t)
            if not report.weakly_independent:
                raise VerificationFailure(f"degree {2 * t} equations are weakly dependent")
            records.append(DegreeRecord(2 * t, len(sub), report.equations, report.rank, report.unique and not report.ambiguous))
        previous = sub
    sizes = [rec.subbase_size for rec in records]
    if k == 1:
        if any(s != 1 for s in sizes):
            raise VerificationFailure(f"k=1 sub-base sizes {sizes} are not all 1")
        verdict = ONE_GENERATOR
    else:
        if not nested or any(a >= b for a, b in zip(sizes, sizes[1:])):
            raise VerificationFailure(f"sub-bases {sizes} do not grow strictly")
        verdict = STRICTLY_GROWING
    return GenerationVerdict(k, max_degree, tuple(records), verdict, nested)


def equation_count_from_compositions(k: int, t: int) -> int:
    """The same count through the weighted-composition sum with ``f'`` weights."""
    return master_sum(t, k, weight=f_prime)


@dataclass(frozen=True)
class LeadingExpression:
    """``1_{KwK} = sum c * product(factors) + (terms of lower degree)``."""

    word: Word
    k: int
    terms: tuple[tuple[Fraction, tuple[Word, ...]], ...]

    def leading(self) -> dict[Word, Fraction]:
        acc: dict[Word, Fraction] = {}
        for c, factors in self.terms:
            for w, mult in leading_product_multi(factors, self.k).items():
                acc[w] = acc.get(w, Fraction(0)) + c * mult
        return {w: a for w, a in acc.items() if a}

    def to_json(self) -> dict:
        return {
            "word": format_word(self.word),
            "terms": [
                {
                    "factors": [format_word(w) for w in factors],
                    "numerator": c.numerator,
                    "denominator": c.denominator,
                }
                for c, factors in self.terms
            ],
        }


def express_leading(w: Sequence[int], sub: SubBase, k: int | None = None) -> LeadingExpression:
    """Write ``1_{KwK}`` through sub-base words and products, modulo lower degree."""
    k = sub.k if k is None else k
    w = validate_word(w, k)
    if not w:
        raise NotExpressible("the empty word is the unit, not a degree-positive basis element")
    if w in sub:
        raise NotExpressible(f"{list(w)} is itself a sub-base element")
    t = len(skeleton(w))
    if degree(w) > 2 * sub.r:
        raise RangeError(f"word of degree {degree(w)} is beyond the sub-base bound {2 * sub.r}")
    if 1 not in refinement(w):
        raise NotExpressible(f"{list(w)} has no refinement letter 1")
    system = equation_system(skeleton(w), subbase(k, t - 1))
    index = {c: i for i, c in enumerate(system.columns)}
    ech = Echelon()
    for i, row in enumerate(system.matrix()):
        ech.add(row, tag=("equation", i))
    for c in chosen_words(system.skeleton, k):
        ech.add({index[c]: 1}, tag=("word", c))
    coeffs = ech.express({index[w]: 1})
    if coeffs is None:
        raise NotExpressible(f"{list(w)} is outside the span of its system")
    terms = []
    for tag, c in sorted(coeffs.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        if tag[0] == "equation":
            terms.append((c, system.equations[tag[1]].factors))
        else:
            terms.append((c, (tag[1],)))
    expr = LeadingExpression(w, k, tuple(terms))
    if expr.leading() != {w: Fraction(1)}:
        raise VerificationFailure(f"leading-term expression of {list(w)} does not reproduce it")
    return expr


Polynomial = dict[tuple[Word, ...], Fraction]


def evaluate(poly: Polynomial, table: StructureConstantTable) -> HeckeElement:
    out = HeckeElement()
    for factors, c in poly.items():
        out = out + mul_words(factors, table).scale(c)
    return out


def express_full(w: Sequence[int], sub: SubBase, table: StructureConstantTable) -> Polynomial:
    """Exact polynomial in sub-base elements equal to ``1_{KwK}``.

    Lower-degree remainders are chased recursively through the table. Keys are
    factor tuples: ``()`` is the unit, a 1-tuple a sub-base element.
    """
    k = sub.k
    memo: dict[Word, Polynomial] = {}

    def add_into(acc: Polynomial, poly: Polynomial, scale: Fraction) -> None:
        for key, c in poly.items():
            acc[key] = acc.get(key, Fraction(0)) + scale * c
            if not acc[key]:
                del acc[key]

    def rec(word: Word) -> Polynomial:
        if word in memo:
            return memo[word]
        if not word:
            result = {(): Fraction(1)}
        elif word in sub:
            result = {(word,): Fraction(1)}
        else:
            lead = express_leading(word, sub, k)
            result = {}
            approx = HeckeElement()
            for c, factors in lead.terms:
                add_into(result, {factors: Fraction(1)}, c)
                approx = approx + mul_words(factors, table).scale(c)
            remainder = HeckeElement.basis(word) - approx
            if remainder.degree >= degree(word):
                raise VerificationFailure(f"remainder of {list(word)} did not drop in degree")
            for u, a in remainder:
                add_into(result, rec(u), a)
        memo[word] = result
        return result

    w = validate_word(w, k)
    if degree(w) > table.degree_cap:
        raise RangeError(f"degree {degree(w)} exceeds the table cap {table.degree_cap}")
    return rec(w)
