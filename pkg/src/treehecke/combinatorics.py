"""Exact integer combinatorics: multinomials, weighted compositions, the
auxiliary polynomials ``P(i, r)`` and checks of the identities relating them.

Everything here works on Python integers, so no value ever overflows or rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Sequence

from .errors import NonExactDivision, RangeError


def multinomial(parts: Sequence[int]) -> int:
    """Return ``(sum parts)! / prod(part!)``; the empty product gives 1."""
    if any(p < 0 for p in parts):
        raise RangeError(f"multinomial parts must be nonnegative, got {list(parts)}")
    result = 1
    total = 0
    # product of binomials avoids the large intermediate factorials
    for p in parts:
        total += p
        result *= comb(total, p)
    return result


def _weighted_tuples(n: int, max_index: int) -> Iterator[tuple[int, ...]]:
    # tuples (k_1..k_max_index) with sum i*k_i == n, lexicographic order
    def rec(i: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if i > max_index:
            if remaining == 0:
                yield ()
            return
        for ki in range(remaining // i + 1):
            for rest in rec(i + 1, remaining - i * ki):
                yield (ki,) + rest

    yield from rec(1, n)


def sum_set(n: int) -> list[tuple[int, ...]]:
    """All ``(k_1, ..., k_{n-1})`` of nonnegative integers with ``sum i*k_i == n``.

    The tuples have length exactly ``n - 1``, so ``sum_set(1)`` is empty and the
    single-part decomposition ``k_n = 1`` never occurs. Sorted lexicographically.
    """
    if n < 1:
        raise RangeError(f"sum_set needs n >= 1, got {n}")
    if n == 1:
        return []
    return list(_weighted_tuples(n, n - 1))


def f_values(r: int, k: int) -> tuple[int, int]:
    """Return ``(f(r, k), f'(r, k)) = (k^r (k-1)^(r-1), (k-1)^(r-1))`` with ``0^0 = 1``."""
    if r < 1 or k < 1:
        raise RangeError(f"f needs r, k >= 1, got r={r}, k={k}")
    # Python already evaluates 0 ** 0 as 1
    fp = (k - 1) ** (r - 1)
    return k**r * fp, fp


def f(r: int, k: int) -> int:
    return f_values(r, k)[0]


def f_prime(r: int, k: int) -> int:
    return f_values(r, k)[1]


class IntPolynomial:
    """Dense polynomial with integer coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def constant(cls, a: int) -> IntPolynomial:
        return cls([a])

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __add__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-a for a in self.coeffs])

    def __sub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other: int) -> IntPolynomial:
        return _as_poly(other) - self

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def divmod_linear(self, root: int) -> tuple[IntPolynomial, int]:
        """Synthetic division by ``X - root``: returns ``(quotient, remainder)``."""
        if self.is_zero():
            return IntPolynomial(), 0
        q = [0] * (len(self.coeffs) - 1)
        acc = 0
        for idx in range(len(self.coeffs) - 1, -1, -1):
            acc = acc * root + self.coeffs[idx]
            if idx > 0:
                q[idx - 1] = acc
        return IntPolynomial(q), acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "IntPolynomial(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono:
                terms.append(f"{a}*{mono}")
            else:
                terms.append(str(a))
        return "IntPolynomial(" + " + ".join(terms) + ")"


def _as_poly(p: IntPolynomial | int) -> IntPolynomial:
    return p if isinstance(p, IntPolynomial) else IntPolynomial.constant(p)


@lru_cache(maxsize=None)
def poly_P(i: int, r: int) -> IntPolynomial:
    """``P(1, r) = X^(r-2) + ... + 1`` and ``P(i, r) = (P(i-1, r) - P(i-1, r)(1)) / (X - 1)``.

    Every division is checked to be remainder-free.
    """
    if i < 1 or r < i + 1:
        raise RangeError(f"poly_P needs 1 <= i <= r-1, got i={i}, r={r}")
    if i == 1:
        return IntPolynomial([1] * (r - 1))
    prev = poly_P(i - 1, r)
    quotient, remainder = (prev - prev(1)).divmod_linear(1)
    if remainder != 0:
        raise NonExactDivision(f"P({i - 1},{r}) - P({i - 1},{r})(1) not divisible by X-1")
    return quotient


@dataclass(frozen=True)
class IdentityReport:
    which: str
    params: tuple[int, ...]
    holds: bool
    lhs: object
    rhs: object

    def to_json(self) -> dict:
        def enc(side):
            return list(side.coeffs) if isinstance(side, IntPolynomial) else side

        return {
            "identity": self.which,
            "params": list(self.params),
            "holds": self.holds,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
        }


IDENTITIES = {
    "recurrence": "P(i,r) = sum of P(i-1,j) for j in i..r-1",
    "binomial": "P(i,j)(1) = (j-1)!/(i!(j-i-1)!)",
    "multinomial": "C(r-1,i) = sum of multinomials over Sum(r) with total r-i",
    "master": "k^(2r-1) - sum over Sum(r) = f(r,k)",
}


def _check_recurrence(r: int, i: int) -> IdentityReport:
    if r < 3 or not 2 <= i <= r - 1:
        raise RangeError(f"recurrence identity needs r >= 3 and 2 <= i <= r-1, got r={r}, i={i}")
    lhs = poly_P(i, r)
    rhs = IntPolynomial()
    for j in range(i, r):
        rhs = rhs + poly_P(i - 1, j)
    return IdentityReport("recurrence", (r, i), lhs == rhs, lhs, rhs)


def _check_binomial(j: int, i: int) -> IdentityReport:
    if j < 2 or not 1 <= i <= j - 1:
        raise RangeError(f"binomial identity needs j >= 2 and 1 <= i <= j-1, got j={j}, i={i}")
    lhs = poly_P(i, j)(1)
    rhs = factorial(j - 1) // (factorial(i) * factorial(j - i - 1))
    return IdentityReport("binomial", (j, i), lhs == rhs, lhs, rhs)


def _check_multinomial(r: int, i: int) -> IdentityReport:
    if r < 2 or not 1 <= i <= r - 1:
        raise RangeError(f"multinomial identity needs r >= 2 and 1 <= i <= r-1, got r={r}, i={i}")
    lhs = comb(r - 1, i)
    rhs = sum(multinomial(t) for t in sum_set(r) if sum(t) == r - i)
    # P(i, r)(1) must agree with the binomial side as well
    holds = lhs == rhs and poly_P(i, r)(1) == lhs
    return IdentityReport("multinomial", (r, i), holds, lhs, rhs)


def master_sum(r: int, k: int, weight=f) -> int:
    """``sum over Sum(r)`` of ``multinomial(t) * prod weight(i, k)^t_i``."""
    total = 0
    for t in sum_set(r):
        term = multinomial(t)
        for idx, ki in enumerate(t, start=1):
            if ki:
                term *= weight(idx, k) ** ki
        total += term
    return total


def _check_master(r: int, k: int) -> IdentityReport:
    if r < 1 or k < 1:
        raise RangeError(f"master identity needs r, k >= 1, got r={r}, k={k}")
    lhs = k ** (2 * r - 1) - master_sum(r, k)
    rhs = f(r, k)
    return IdentityReport("master", (r, k), lhs == rhs, lhs, rhs)


_CHECKS = {
    "recurrence": _check_recurrence,
    "binomial": _check_binomial,
    "multinomial": _check_multinomial,
    "master": _check_master,
}


def verify_identity(which: str, *params: int) -> IdentityReport:
    """Evaluate both sides of one identity exactly.

    ``which`` is one of ``recurrence`` (params ``r, i``), ``binomial``
    (``j, i``), ``multinomial`` (``r, i``) or ``master`` (``r, k``).
    """
    try:
        check = _CHECKS[which]
    except KeyError:
        raise RangeError(f"unknown identity {which!r}; choose from {sorted(_CHECKS)}") from None
    return check(*params)


def identity_sweep(which: str, rmax: int = 12, kmax: int = 8) -> list[IdentityReport]:
    """Run one identity over its whole parameter range up to the given bounds."""
    if which == "master":
        return [verify_identity("master", r, k) for r in range(1, rmax + 1) for k in range(1, kmax + 1)]
    if which == "recurrence":
        return [verify_identity(which, r, i) for r in range(3, rmax + 1) for i in range(2, r)]
    if which in ("binomial", "multinomial"):
        return [verify_identity(which, r, i) for r in range(2, rmax + 1) for i in range(1, r)]
    raise RangeError(f"unknown identity {which!r}")
