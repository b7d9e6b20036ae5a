"""Brute-force oracle on finite truncations of the legally coloured tree.

A vertex at distance ``m`` from the base vertex ``x`` is named by the colours
``(c_1, ..., c_m)`` of the edges on the geodesic from ``x``; legality means
consecutive colours differ. The invariant of a vertex pair under the universal
group is the profile of the geodesic joining them: the suborbit label, seen
from the entry colour, of each exit colour along the way.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .errors import EnumerationTooLarge, IllegalPath, InvalidWord, MissingStructureConstants
from .permgroup import SuborbitTable
from .unionfind import UnionFind
from .words import EMPTY, Word, degree, format_word, parse_word, shortlex, validate_word, words_of_degree, words_up_to

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_BOUND = 10**7
CACHE_FORMAT_VERSION = 1
CACHE_ENV = "TREEHECKE_CACHE_DIR"

ColorPath = tuple[int, ...]


def profile_of_path(path: Sequence[int], table: SuborbitTable) -> Word:
    for a, b in zip(path, path[1:]):
        if a == b:
            raise IllegalPath(f"colour {a} repeats in path {list(path)}")
    labels = table.labels
    return tuple(labels[a - 1][b - 1] for a, b in zip(path, path[1:]))


def _profile(path: Sequence[int], labels) -> Word:
    # unchecked variant for the hot loops
    return tuple(labels[a - 1][b - 1] for a, b in zip(path, path[1:]))


def legal_extensions(d: int, length: int, forbidden: frozenset[int] | set[int] = frozenset()) -> Iterator[ColorPath]:
    """Legal colour sequences of ``length`` whose first colour avoids ``forbidden``."""
    if length == 0:
        yield ()
        return

    def rec(prefix: list[int]) -> Iterator[ColorPath]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        last = prefix[-1]
        for c in range(1, d + 1):
            if c != last:
                prefix.append(c)
                yield from rec(prefix)
                prefix.pop()

    for c in range(1, d + 1):
        if c not in forbidden:
            yield from rec([c])


def geodesic(a: ColorPath, b: ColorPath) -> ColorPath:
    """Colour sequence of the geodesic from vertex ``a`` to vertex ``b``."""
    j = 0
    n = min(len(a), len(b))
    while j < n and a[j] == b[j]:
        j += 1
    return tuple(reversed(a[j:])) + b[j:]


def _check_bound(count: int, bound: int, what: str) -> None:
    if count > bound:
        raise EnumerationTooLarge(f"{what} needs {count} paths, above the bound {bound}")


def orbit_count(table: SuborbitTable, r: int, method: str = "profile", bound: int = DEFAULT_ENUMERATION_BOUND) -> int:
    """Number of orbits of the edge stabilizer on the level-``2r`` vertices of a half-tree.

    ``profile`` counts distinct geodesic profiles. ``bfs`` merges paths with
    the local moves "apply an element of the stabilizer of the entry colour to
    everything below a vertex" and counts the resulting classes.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    d = table.degree
    m = 2 * r
    _check_bound((d - 1) ** (m - 1), bound, f"orbit count at r={r}")
    paths = [(1,) + tail for tail in legal_extensions(d, m - 1, {1})]
    labels = table.labels
    if method == "profile":
        return len({_profile(p, labels) for p in paths})
    if method != "bfs":
        raise ValueError(f"unknown method {method!r}")

    stabs = {c: [g for g in table.group.stabilizer(c) if g != tuple(range(1, d + 1))] for c in range(1, d + 1)}
    uf = UnionFind(paths)
    for p in paths:
        prof = _profile(p, labels)
        for i in range(1, m):
            head, below = p[:i], p[i:]
            for g in stabs[p[i - 1]]:
                q = head + tuple(g[c - 1] for c in below)
                if _profile(q, labels) != prof:
                    raise AssertionError(f"local move changed the profile of {p}")
                uf.union(p, q)
    return len(uf)


def class_size(w: Word, table: SuborbitTable) -> int:
    """Number of vertices ``y`` with profile ``w`` from the base vertex."""
    if not w:
        return 1
    size = table.degree
    for a in w:
        size *= table.sizes[a - 1]
    return size


def realization(w: Word, table: SuborbitTable, largest: bool = False) -> ColorPath:
    """Lexicographically smallest (or largest) colour path with profile ``w``."""
    if not w:
        return ()
    pick = max if largest else min
    path = [table.degree if largest else 1]
    for a in w:
        path.append(pick(table.exits(path[-1], a)))
    return tuple(path)


def ellipse(z: ColorPath, cap: int, d: int) -> Iterator[ColorPath]:
    """Vertices ``y`` with ``dist(x, y) + dist(y, z) <= cap`` and ``dist(x, y)`` even."""
    n = len(z)
    slack = (cap - n) // 2
    for j in range(n + 1):
        base = z[:j]
        forbidden = set()
        if j > 0:
            forbidden.add(z[j - 1])
        if j < n:
            forbidden.add(z[j])
        for s in range(slack + 1):
            if (j + s) % 2:
                continue
            if s == 0:
                yield base
                continue
            for tail in legal_extensions(d, s, forbidden):
                yield base + tail


def _tally_target(z: ColorPath, cap: int, d: int, labels) -> Counter:
    counts: Counter = Counter()
    for y in ellipse(z, cap, d):
        counts[_profile(y, labels), _profile(geodesic(y, z), labels)] += 1
    return counts


def _sphere(d: int, radius: int) -> int:
    return 1 if radius == 0 else d * (d - 1) ** (radius - 1)


def convolve_oracle(
    u: Word,
    v: Word,
    table: SuborbitTable,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    check_realization: bool = False,
) -> dict[Word, int]:
    """Structure constants of ``1_{KuK} * 1_{KvK}`` with ``mu(K) = 1``.

    For each class ``w``, a concrete ``z`` with profile ``w`` is fixed and the
    coefficient is the number of ``y`` with ``profile(x, y) = u`` and
    ``profile(y, z) = v``.
    """
    k = table.k
    u, v = validate_word(u, k), validate_word(v, k)
    du, dv = degree(u), degree(v)
    cap = du + dv
    d = table.degree
    _check_bound(_sphere(d, cap), bound, f"product of degree {cap}")
    labels = table.labels
    out: dict[Word, int] = {}
    for n in range(abs(du - dv), cap + 1, 2):
        for w in words_of_degree(k, n):
            zs = [realization(w, table)]
            if check_realization:
                zs.append(realization(w, table, largest=True))
            counts = []
            for z in zs:
                counts.append(
                    sum(
                        1
                        for y in ellipse(z, cap, d)
                        if len(y) == du and _profile(y, labels) == u and _profile(geodesic(y, z), labels) == v
                    )
                )
            if len(set(counts)) != 1:
                raise AssertionError(f"coefficient of {w} depends on the realization: {counts}")
            if counts[0]:
                out[w] = counts[0]
    return dict(sorted(out.items(), key=lambda kv: shortlex(kv[0])))


@dataclass
class StructureConstantTable:
    """All products ``1_{KuK} * 1_{KvK}`` with ``deg u + deg v <= degree_cap``."""

    d: int
    generators: tuple[tuple[int, ...], ...]
    k: int
    sizes: tuple[int, ...]
    degree_cap: int
    rows: dict[tuple[Word, Word], dict[Word, int]] = field(repr=False)

    def row(self, u: Word, v: Word) -> dict[Word, int]:
        try:
            return self.rows[u, v]
        except KeyError:
            raise MissingStructureConstants(u, v) from None

    def __contains__(self, pair) -> bool:
        return pair in self.rows

    def header(self) -> dict:
        return {
            "format_version": CACHE_FORMAT_VERSION,
            "d": self.d,
            "generators": [list(g) for g in self.generators],
            "k": self.k,
            "n_j": list(self.sizes),
            "degree_cap": self.degree_cap,
        }

    def to_json(self) -> dict:
        entries = []
        for (u, v) in sorted(self.rows, key=lambda uv: (shortlex(uv[0]), shortlex(uv[1]))):
            terms = [[format_word(w), c] for w, c in sorted(self.rows[u, v].items(), key=lambda kv: shortlex(kv[0]))]
            entries.append({"u": format_word(u), "v": format_word(v), "terms": terms})
        return {"header": self.header(), "entries": entries}

    @classmethod
    def from_json(cls, data: dict) -> StructureConstantTable:
        h = data["header"]
        if h.get("format_version") != CACHE_FORMAT_VERSION:
            raise ValueError(f"unsupported cache format {h.get('format_version')}")
        rows = {}
        for e in data["entries"]:
            rows[parse_word(e["u"]), parse_word(e["v"])] = {parse_word(w): int(c) for w, c in e["terms"]}
        return cls(
            d=h["d"],
            generators=tuple(tuple(g) for g in h["generators"]),
            k=h["k"],
            sizes=tuple(h["n_j"]),
            degree_cap=h["degree_cap"],
            rows=rows,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"


def table_header(table: SuborbitTable, degree_cap: int) -> dict:
    return {
        "format_version": CACHE_FORMAT_VERSION,
        "d": table.degree,
        "generators": [list(g) for g in table.group.generators],
        "k": table.k,
        "n_j": list(table.sizes),
        "degree_cap": degree_cap,
    }


def _build_chunk(args) -> list[tuple[Word, list[tuple[tuple[Word, Word], int]]]]:
    table, words, cap = args
    out = []
    for w in words:
        z = realization(w, table)
        counts = _tally_target(z, cap, table.degree, table.labels)
        out.append((w, sorted(counts.items())))
    return out


def build_structure_table(
    table: SuborbitTable,
    degree_cap: int,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    threads: int = 1,
) -> StructureConstantTable:
    """Compute every product of word pairs whose degrees sum to at most ``degree_cap``."""
    if degree_cap < 0 or degree_cap % 2:
        raise InvalidWord(f"degree cap must be even and nonnegative, got {degree_cap}")
    d, k = table.degree, table.k
    _check_bound(_sphere(d, degree_cap), bound, f"structure table of degree {degree_cap}")
    targets = words_up_to(k, degree_cap)
    rows: dict[tuple[Word, Word], dict[Word, int]] = {}
    for u in targets:
        for v in words_up_to(k, degree_cap - degree(u)):
            rows[u, v] = {}

    if threads > 1 and len(targets) > 1:
        chunks = [targets[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [item for part in pool.map(_build_chunk, [(table, c, degree_cap) for c in chunks]) for item in part]
    else:
        results = _build_chunk((table, targets, degree_cap))

    for w, counts in results:
        for (u, v), c in counts:
            rows[u, v][w] = c
    for key in rows:
        rows[key] = dict(sorted(rows[key].items(), key=lambda kv: shortlex(kv[0])))
    logger.info("built structure table d=%d k=%d cap=%d with %d rows", d, k, degree_cap, len(rows))
    return StructureConstantTable(
        d=d,
        generators=tuple(table.group.generators),
        k=k,
        sizes=table.sizes,
        degree_cap=degree_cap,
        rows=rows,
    )


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "treehecke"


def cache_path(table: SuborbitTable, degree_cap: int, cache_dir: Path | str | None = None) -> Path:
    header = json.dumps(table_header(table, degree_cap), sort_keys=True)
    digest = hashlib.sha256(header.encode()).hexdigest()[:16]
    root = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    return root / f"structure-d{table.degree}-cap{degree_cap}-{digest}.json"


def load_or_build(
    table: SuborbitTable,
    degree_cap: int,
    cache_dir: Path | str | None = None,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    threads: int = 1,
) -> StructureConstantTable:
    """Reuse a cached table when its header matches exactly; otherwise build and store one."""
    path = cache_path(table, degree_cap, cache_dir)
    expected = table_header(table, degree_cap)
    if path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            if data.get("header") == expected:
                logger.info("loaded structure table from %s", path)
                return StructureConstantTable.from_json(data)
            logger.warning("cache header mismatch in %s, rebuilding", path)
        except (ValueError, KeyError) as exc:
            logger.warning("unreadable cache %s (%s), rebuilding", path, exc)
    sct = build_structure_table(table, degree_cap, bound=bound, threads=threads)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(sct.dumps(), encoding="utf-8")
    os.replace(tmp, path)
    return sct


def table_diagnostics(sct: StructureConstantTable, table: SuborbitTable) -> list[str]:
    """Check mass conservation, parity, degree bounds and the maximal-term rule.

    Returns human-readable failures; an empty list means every row passed.
    """
    failures = []
    k = sct.k
    for (u, v), terms in sct.rows.items():
        du, dv = degree(u), degree(v)
        mass = sum(c * class_size(w, table) for w, c in terms.items())
        if mass != class_size(u, table) * class_size(v, table):
            failures.append(f"mass conservation fails for u={u}, v={v}: {mass}")
        for w in terms:
            dw = degree(w)
            if dw % 2 or not abs(du - dv) <= dw <= du + dv:
                failures.append(f"term {w} of u={u}, v={v} has degree {dw} out of range")
        top = {w: c for w, c in terms.items() if degree(w) == du + dv}
        if u and v:
            expected = {u + (b,) + v: 1 for b in range(1, k + 1)}
        else:
            expected = {u + v: 1}
        if top != expected:
            failures.append(f"maximal terms of u={u}, v={v} are {top}, expected {expected}")
    return failures
