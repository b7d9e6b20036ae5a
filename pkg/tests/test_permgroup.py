from __future__ import annotations

import pytest

from treehecke.errors import GroupTooLarge, InvalidPermutation, NotTransitive
from treehecke.permgroup import (
    alternating_generators,
    analyze,
    closure,
    compose,
    cycle_string,
    cyclic_generators,
    dihedral_generators,
    from_cycles,
    identity,
    inverse,
    label_consistency_check,
    minimal_block,
    orbits_of,
    parse_generators,
    parse_perm,
    suborbit_table,
    symmetric_generators,
)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def brute_primitive(group):
    # no nontrivial partition of the points is preserved by every element
    d = group.degree
    if not group.is_transitive():
        return False
    for part in set_partitions(list(range(1, d + 1))):
        if len(part) in (1, d):
            continue
        blocks = {frozenset(b) for b in part}
        if all(frozenset(g[x - 1] for x in b) in blocks for g in group.generators for b in blocks):
            return False
    return True


def brute_two_transitive(group):
    d = group.degree
    pairs = {(g[0], g[1]) for g in group.elements}
    return d >= 2 and len(pairs) == d * (d - 1)


def brute_order(d, gens):
    # closure by repeated multiplication of a set, no BFS queue
    elems = {identity(d)}
    while True:
        new = {compose(g, h) for g in elems for h in gens} | elems
        if new == elems:
            return len(elems)
        elems = new


CORPUS = {
    "S3": (3, symmetric_generators(3)),
    "S4": (4, symmetric_generators(4)),
    "S5": (5, symmetric_generators(5)),
    "S6": (6, symmetric_generators(6)),
    "A4": (4, alternating_generators(4)),
    "A5": (5, alternating_generators(5)),
    "A6": (6, alternating_generators(6)),
    "C5": (5, cyclic_generators(5)),
    "C7": (7, cyclic_generators(7)),
    "D5": (5, dihedral_generators(5)),
    "D7": (7, dihedral_generators(7)),
    "D4": (4, dihedral_generators(4)),
    "C6": (6, cyclic_generators(6)),
    "AGL1_5": (5, [parse_perm("(1 2 3 4 5)", 5), parse_perm("(2 3 5 4)", 5)]),
}


def test_parse_perm_forms():
    assert parse_perm("2,3,4,5,1", 5) == (2, 3, 4, 5, 1)
    assert parse_perm("(1 2 3 4 5)", 5) == (2, 3, 4, 5, 1)
    assert parse_perm("(2 5)(3 4)", 5) == (1, 5, 4, 3, 2)
    assert parse_perm("()", 4) == identity(4)


@pytest.mark.parametrize("text", ["2,2,1", "1,2", "(1 4)", "(1 1)", "(1 2", "x", ""])
def test_parse_perm_rejects(text):
    with pytest.raises(InvalidPermutation):
        parse_perm(text, 3)


def test_parse_generators_both_separators():
    a = parse_generators("(1 2 3 4 5),(2 5)(3 4)", 5)
    b = parse_generators("2,3,4,5,1;1,5,4,3,2", 5)
    assert a == b == [(2, 3, 4, 5, 1), (1, 5, 4, 3, 2)]
    with pytest.raises(InvalidPermutation):
        parse_generators("(1 2,(3 4)", 5)


def test_compose_inverse_cycles():
    p = from_cycles([[1, 2, 3]], 4)
    q = from_cycles([[3, 4]], 4)
    # p after q: 3 -> 4 -> 4, 4 -> 3 -> 1
    assert compose(p, q)[2] == 4 and compose(p, q)[3] == 1
    assert compose(p, inverse(p)) == identity(4)
    assert parse_perm(cycle_string(compose(p, q)), 4) == compose(p, q)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_closure_order_matches_naive(name):
    d, gens = CORPUS[name]
    group = closure(d, gens)
    assert group.order == brute_order(d, gens)
    assert group.elements[0] == identity(d)
    assert all(inverse(g) in group for g in group.elements)


def test_known_orders():
    assert closure(5, cyclic_generators(5)).order == 5
    assert closure(5, dihedral_generators(5)).order == 10
    assert closure(3, parse_generators("(1 2),(1 2 3)", 3)).order == 6
    assert closure(6, symmetric_generators(6)).order == 720
    assert closure(6, alternating_generators(6)).order == 360


def test_group_bound():
    with pytest.raises(GroupTooLarge):
        closure(6, symmetric_generators(6), bound=100)


def test_analyze_examples():
    s3 = analyze(closure(3, symmetric_generators(3)))
    assert (s3.transitive, s3.primitive, s3.two_transitive) == (True, True, True)
    d5 = analyze(closure(5, dihedral_generators(5)))
    assert (d5.order, d5.transitive, d5.primitive, d5.two_transitive) == (10, True, True, False)
    c5 = analyze(closure(5, cyclic_generators(5)))
    assert (c5.transitive, c5.primitive, c5.two_transitive) == (True, True, False)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_analysis_against_brute_force(name):
    d, gens = CORPUS[name]
    group = closure(d, gens)
    info = analyze(group)
    assert info.primitive == brute_primitive(group)
    assert info.two_transitive == brute_two_transitive(group)
    assert info.two_transitive == (suborbit_table(group).k == 1)


def test_imprimitive_example():
    group = closure(4, dihedral_generators(4))
    assert not analyze(group).primitive
    assert sorted(minimal_block(group, 1, 3)) == [1, 3]


def test_intransitive_rejected():
    group = closure(4, [from_cycles([[1, 2]], 4)])
    assert not analyze(group).transitive
    with pytest.raises(NotTransitive):
        suborbit_table(group)


def test_suborbit_examples():
    t = suborbit_table(closure(3, symmetric_generators(3)))
    assert (t.k, t.sizes) == (1, (2,))
    t = suborbit_table(closure(5, dihedral_generators(5)))
    assert (t.k, t.sizes) == (2, (2, 2))
    assert t.suborbits == ((2, 5), (3, 4))
    t = suborbit_table(closure(5, cyclic_generators(5)))
    assert (t.k, t.sizes) == (4, (1, 1, 1, 1))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_suborbit_table_invariants(name):
    d, gens = CORPUS[name]
    group = closure(d, gens)
    t = suborbit_table(group)
    assert sum(t.sizes) == d - 1
    assert label_consistency_check(t)
    keys = [(len(o), o[0]) for o in t.suborbits]
    assert keys == sorted(keys)
    for c in range(1, d + 1):
        assert t.transversals[c - 1][0] == c
        # fibers of the label map at c are exactly the orbits of the stabilizer of c
        stab = [g for g in group.elements if g[c - 1] == c]
        orbits = {frozenset(o) for o in orbits_of(stab, [x for x in range(1, d + 1) if x != c])}
        fibers = {frozenset(t.exits(c, j)) for j in range(1, t.k + 1)}
        assert fibers == orbits
        assert [len(t.exits(c, j)) for j in range(1, t.k + 1)] == list(t.sizes)


def test_label_consistency_detects_tampering():
    t = suborbit_table(closure(5, dihedral_generators(5)))
    rows = list(t.labels)
    rows[2] = tuple(3 - x if x else 0 for x in rows[2])
    bad = type(t)(t.group, t.k, t.sizes, t.suborbits, tuple(rows), t.transversals)
    assert not label_consistency_check(bad)
