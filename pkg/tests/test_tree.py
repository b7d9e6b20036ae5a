from __future__ import annotations

import json
from collections import Counter
from itertools import product

import pytest

from treehecke.errors import EnumerationTooLarge, IllegalPath, InvalidWord
from treehecke.tree import (
    StructureConstantTable,
    build_structure_table,
    cache_path,
    class_size,
    convolve_oracle,
    geodesic,
    load_or_build,
    orbit_count,
    profile_of_path,
    realization,
    table_diagnostics,
)
from treehecke.words import degree, words_of_degree, words_up_to


def all_vertices(d, m):
    return [p for p in product(range(1, d + 1), repeat=m) if all(a != b for a, b in zip(p, p[1:]))]


def brute_coefficient(u, v, z, table):
    # scan the whole sphere of radius deg(u) around the base vertex
    d = table.degree
    return sum(
        1
        for y in all_vertices(d, degree(u))
        if profile_of_path(y, table) == u and profile_of_path(geodesic(y, z), table) == v
    )


def test_profile_examples(d5, sym3):
    assert profile_of_path((1, 2), d5) == (1,)
    assert profile_of_path((1, 3, 1), d5)[0] == 2
    for path in all_vertices(3, 5):
        assert profile_of_path(path, sym3) == (1, 1, 1, 1)
    with pytest.raises(IllegalPath):
        profile_of_path((1, 1, 2), d5)


def test_geodesic():
    assert geodesic((1, 2, 3), (1, 2, 4, 5)) == (3, 4, 5)
    assert geodesic((), (2, 1)) == (2, 1)
    assert geodesic((2, 1), ()) == (1, 2)


@pytest.mark.parametrize("r,expected", [(1, 2), (2, 8), (3, 32)])
def test_orbit_count_d5(d5, r, expected):
    assert orbit_count(d5, r, method="profile") == expected
    assert orbit_count(d5, r, method="bfs") == expected


@pytest.mark.parametrize("r", range(1, 6))
def test_orbit_count_sym3(sym3, r):
    assert orbit_count(sym3, r, method="profile") == 1
    if r <= 4:
        assert orbit_count(sym3, r, method="bfs") == 1


def test_orbit_count_c5_and_bounds(c5):
    assert orbit_count(c5, 1, method="bfs") == 4
    assert orbit_count(c5, 2, method="bfs") == orbit_count(c5, 2) == 64
    with pytest.raises(EnumerationTooLarge):
        orbit_count(c5, 3, bound=100)


def test_c5_labels_are_not_symmetric(c5):
    # the inverse suborbit of a suborbit of C5 is a different suborbit
    pairs = {(c5.label(a, b), c5.label(b, a)) for a in range(1, 6) for b in range(1, 6) if a != b}
    assert any(x != y for x, y in pairs)


def test_class_size_examples(sym3, d5):
    assert class_size((1,), sym3) == 6
    assert class_size((1,), d5) == class_size((2,), d5) == 10
    assert class_size((), d5) == 1


@pytest.mark.parametrize("fixture", ["d5", "sym3", "c5", "sym4"])
def test_class_sizes_match_sphere_scan(fixture, request):
    table = request.getfixturevalue(fixture)
    d = table.degree
    for n in (2, 4):
        counts = Counter(profile_of_path(p, table) for p in all_vertices(d, n))
        for w in words_of_degree(table.k, n):
            assert counts[w] == class_size(w, table)
        assert sum(counts.values()) == d * (d - 1) ** (n - 1)


def test_realization_has_profile(d5, c5):
    for table in (d5, c5):
        for w in words_up_to(table.k, 6):
            for largest in (False, True):
                z = realization(w, table, largest=largest)
                assert profile_of_path(z, table) == w
    assert realization((1, 2, 1), d5) == min(p for p in all_vertices(5, 4) if profile_of_path(p, d5) == (1, 2, 1))


def test_convolve_examples(sym3, d5):
    assert convolve_oracle((1,), (1,), sym3) == {(): 6, (1,): 1, (1, 1, 1): 1}
    row = convolve_oracle((1,), (2,), d5, check_realization=True)
    assert {w: c for w, c in row.items() if degree(w) == 4} == {(1, 1, 2): 1, (1, 2, 2): 1}
    assert convolve_oracle((), (2, 1, 1), d5) == {(2, 1, 1): 1}
    assert convolve_oracle((2, 1, 1), (), d5) == {(2, 1, 1): 1}
    with pytest.raises(InvalidWord):
        convolve_oracle((3,), (1,), d5)


@pytest.mark.parametrize("fixture", ["d5", "c5", "sym3"])
def test_convolve_matches_sphere_scan(fixture, request):
    table = request.getfixturevalue(fixture)
    k = table.k
    for u in words_up_to(k, 4):
        for v in words_up_to(k, 4 - degree(u)):
            row = convolve_oracle(u, v, table)
            du, dv = degree(u), degree(v)
            for n in range(abs(du - dv), du + dv + 1, 2):
                for w in words_of_degree(k, n):
                    for z in (realization(w, table), realization(w, table, largest=True)):
                        assert brute_coefficient(u, v, z, table) == row.get(w, 0)


@pytest.mark.parametrize("fixture", ["d5", "c5", "sym3", "sym4"])
def test_table_diagnostics_clean(fixture, request):
    table = request.getfixturevalue(fixture)
    cap = 6 if table.degree <= 4 else 4
    sct = build_structure_table(table, cap)
    assert table_diagnostics(sct, table) == []


def test_table_shapes(d5, sym3):
    assert build_structure_table(d5, 0).rows == {((), ()): {(): 1}}
    sct = build_structure_table(d5, 4)
    assert len([1 for u, v in sct.rows if len(u) == len(v) == 1]) == 4
    sct3 = build_structure_table(sym3, 4)
    assert sct3.row((1,), (1,)) == {(): 6, (1,): 1, (1, 1, 1): 1}
    with pytest.raises(InvalidWord):
        build_structure_table(d5, 3)


def test_table_rows_agree_with_direct_oracle(d5):
    sct = build_structure_table(d5, 6)
    for (u, v), row in sct.rows.items():
        assert row == convolve_oracle(u, v, d5)


def test_table_threads_deterministic(d5):
    one = build_structure_table(d5, 6, threads=1)
    two = build_structure_table(d5, 6, threads=3)
    assert one.dumps() == two.dumps()


def test_table_bound(d5):
    with pytest.raises(EnumerationTooLarge):
        build_structure_table(d5, 8, bound=1000)


def test_cache_round_trip(d5, tmp_path):
    sct = load_or_build(d5, 4, cache_dir=tmp_path)
    path = cache_path(d5, 4, tmp_path)
    assert path.exists()
    data = json.loads(path.read_text())
    assert data["header"] == {
        "format_version": 1,
        "d": 5,
        "generators": [[2, 3, 4, 5, 1], [1, 5, 4, 3, 2]],
        "k": 2,
        "n_j": [2, 2],
        "degree_cap": 4,
    }
    entry = next(e for e in data["entries"] if e["u"] == "" and e["v"] == "1")
    assert entry["terms"] == [["1", 1]]
    again = load_or_build(d5, 4, cache_dir=tmp_path)
    assert again.rows == sct.rows
    assert StructureConstantTable.from_json(data).dumps() == sct.dumps()


def test_cache_header_mismatch_rebuilds(d5, tmp_path):
    path = cache_path(d5, 4, tmp_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    bogus = build_structure_table(d5, 4).to_json()
    bogus["header"]["k"] = 7
    bogus["entries"] = []
    path.write_text(json.dumps(bogus))
    sct = load_or_build(d5, 4, cache_dir=tmp_path)
    assert len(sct.rows) > 0
    assert json.loads(path.read_text())["header"]["k"] == 2


def test_cache_env_var(d5, tmp_path, monkeypatch):
    monkeypatch.setenv("TREEHECKE_CACHE_DIR", str(tmp_path / "env"))
    load_or_build(d5, 2)
    assert list((tmp_path / "env").iterdir())
