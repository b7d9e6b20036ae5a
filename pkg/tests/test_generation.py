from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
import sympy

from treehecke.combinatorics import f, f_prime
from treehecke.errors import NotExpressible, RangeError, SkeletonTooShort
from treehecke.generation import (
    ONE_GENERATOR,
    STRICTLY_GROWING,
    Equation,
    EquationSystem,
    completion_check,
    equation_count_from_compositions,
    equation_system,
    evaluate,
    express_full,
    express_leading,
    generation_verdict,
    rank_check,
    subbase,
)
from treehecke.hecke import HeckeElement
from treehecke.linalg import Echelon
from treehecke.words import degree, skeleton, words_up_to


def brute_factorizations(skel, sub):
    # sequences of sub-base words whose skeletons concatenate to ``skel``
    if not skel:
        return [[]]
    out = []
    for w in sub.words:
        s = skeleton(w)
        if tuple(skel[: len(s)]) == s:
            out += [[w] + rest for rest in brute_factorizations(skel[len(s) :], sub)]
    return out


def test_subbase_examples():
    assert subbase(1, 5).words == ((1,),)
    assert set(subbase(2, 2).words) == {(1,), (2,), (1, 2, 1), (1, 2, 2), (2, 2, 1), (2, 2, 2)}
    assert len(subbase(2, 3)) == 14
    with pytest.raises(RangeError):
        subbase(0, 2)


@pytest.mark.parametrize("k,r", [(k, r) for k in range(1, 4) for r in range(1, 6)])
def test_subbase_size_and_structure(k, r):
    sub = subbase(k, r)
    assert len(sub) == sum(f(t, k) for t in range(1, r + 1))
    expected = [w for w in words_up_to(k, 2 * r) if w and all(b != 1 for b in w[1::2])]
    assert set(sub.words) == set(expected)
    assert set(sub.of_degree(2)) == {(a,) for a in range(1, k + 1)}
    if r > 1:
        assert set(subbase(k, r - 1).words) == {w for w in sub.words if degree(w) <= 2 * (r - 1)}


def test_equation_system_examples():
    sys12 = equation_system((1, 2), subbase(2, 1))
    assert [e.factors for e in sys12.equations] == [((1,), (2,))]
    sys111 = equation_system((1, 1, 1), subbase(2, 2))
    assert sorted(e.factors for e in sys111.equations) == sorted(
        [((1,), (1,), (1,)), ((1,), (1, 2, 1)), ((1, 2, 1), (1,))]
    )
    assert len(equation_system((1, 1, 1), subbase(1, 2)).equations) == 1
    with pytest.raises(SkeletonTooShort):
        equation_system((1,), subbase(2, 1))
    with pytest.raises(RangeError):
        equation_system((1, 1, 1), subbase(2, 1))


@pytest.mark.parametrize("k,t", [(k, t) for k in range(1, 5) for t in range(2, 6)])
def test_equation_counts(k, t):
    expected = k ** (t - 1) - f_prime(t, k)
    assert equation_count_from_compositions(k, t) == expected
    sub = subbase(k, t - 1)
    skel = tuple((i % k) + 1 for i in range(t))
    system = equation_system(skel, sub)
    assert len(system.equations) == expected
    if k <= 3 and t <= 4:
        brute = [tuple(x) for x in brute_factorizations(skel, sub) if len(x) >= 2]
        assert sorted(brute) == sorted(e.factors for e in system.equations)
    for eq in system.equations:
        assert eq.degree == 2 * t and len(eq.factors) >= 2


def test_rank_examples():
    rep = rank_check(equation_system((1, 2), subbase(2, 1)))
    assert (rep.rank, rep.rows, rep.weakly_independent) == (1, 1, True)
    rep = rank_check(equation_system((1, 1, 1), subbase(2, 2)))
    assert (rep.rank, rep.rows, rep.weakly_independent) == (3, 3, True)
    system = equation_system((1, 1, 1), subbase(2, 2))
    doubled = EquationSystem(system.skeleton, 2, system.equations + system.equations[:1], system.columns)
    assert not rank_check(doubled).weakly_independent


@pytest.mark.parametrize("k,t", [(k, t) for k in range(1, 4) for t in range(2, 5)])
def test_rank_matches_sympy(k, t):
    sub = subbase(k, t - 1)
    for skel in list(product(range(1, k + 1), repeat=t))[:6]:
        system = equation_system(skel, sub)
        rows = system.matrix()
        assert rank_check(system).rank == sympy.Matrix(rows).rank() == len(rows)


def test_completion_examples():
    rep = completion_check(2, 2)
    assert rep.complement_dim == 1
    assert rep.unique
    assert rep.ambiguous
    assert rep.new_elements[(1, 2)] == ((1, 2, 2),)
    rep = completion_check(2, 3)
    assert (rep.complement_dim, rep.unique, rep.ambiguous) == (1, True, False)
    rep = completion_check(1, 4)
    assert rep.complement_dim == 0 and rep.unique and not rep.ambiguous
    with pytest.raises(SkeletonTooShort):
        completion_check(2, 1)


@pytest.mark.parametrize("k,t", [(k, t) for k in (2, 3) for t in (2, 3, 4)])
def test_completion_dimension_and_ambiguity(k, t):
    rep = completion_check(k, t)
    assert rep.complement_dim == f_prime(t, k)
    assert rep.unique
    assert rep.ambiguous == (t == 2)


def test_chosen_words_are_not_the_only_linear_complement():
    # for k=2, t=3 the all-ones word also completes the row space of (1,1,1)
    system = equation_system((1, 1, 1), subbase(2, 2))
    ech = Echelon()
    for row in system.matrix():
        ech.add(row)
    index = {w: i for i, w in enumerate(system.columns)}
    assert ech.add({index[(1, 1, 1, 1, 1)]: 1})
    assert ech.rank == len(system.columns)


def test_express_leading_examples():
    expr = express_leading((1, 1, 2), subbase(2, 2))
    assert dict((factors, c) for c, factors in expr.terms) == {((1,), (2,)): 1, ((1, 2, 2),): -1}
    assert expr.leading() == {(1, 1, 2): Fraction(1)}
    expr = express_leading((1, 1, 1), subbase(1, 2))
    assert [(c, factors) for c, factors in expr.terms] == [(1, ((1,), (1,)))]
    with pytest.raises(NotExpressible):
        express_leading((1, 2, 2), subbase(2, 2))
    with pytest.raises(RangeError):
        express_leading((1, 1, 2, 1, 1), subbase(2, 2))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_express_leading_all_words(k):
    sub = subbase(k, 3)
    for w in words_up_to(k, 6):
        if w and w not in sub:
            assert express_leading(w, sub).leading() == {w: 1}


def test_express_full_d5(d5_table8):
    sub = subbase(2, 4)
    for w in words_up_to(2, 8):
        poly = express_full(w, sub, d5_table8)
        assert all(x in sub for key in poly for x in key)
        assert evaluate(poly, d5_table8) == HeckeElement.basis(w)


def test_express_full_sym3_single_generator(sym3_table8):
    sub = subbase(1, 4)
    for w in words_up_to(1, 8):
        poly = express_full(w, sub, sym3_table8)
        assert all(set(key) <= {(1,)} for key in poly)
        assert evaluate(poly, sym3_table8) == HeckeElement.basis(w)


def test_verdict_examples():
    v = generation_verdict(1, 10)
    assert v.verdict == ONE_GENERATOR and v.cardinalities == [1] * 5
    v = generation_verdict(2, 8)
    assert v.verdict == STRICTLY_GROWING and v.cardinalities == [2, 6, 14, 30]
    assert v.strictly_nested
    v = generation_verdict(3, 6)
    assert v.cardinalities == [3, 21, 129]
    data = v.to_json()
    assert set(data) == {"k", "degrees", "verdict"}
    assert set(data["degrees"][0]) == {"degree", "subbase_size", "equations", "rank", "unique_completion"}
    with pytest.raises(RangeError):
        generation_verdict(2, 5)


def test_equation_str():
    assert str(Equation(((1,), (1, 2, 1)), 2)) == "d[1] * d[1,2,1]"
