"""Exact weighted census of small cubic multigraph classes and the counting identities.

Two engines enumerate perfect matchings of the ``3 * two_n`` half-edges:

* ``grouped`` (default) settles all half-edges of the lowest unfinished
  vertex at once and counts, in closed form, how many matchings realise each
  choice of loops and partner multiplicities. Every multigraph is produced
  exactly once together with its exact matching count.
* ``pairings`` walks every single matching in lexicographic order inside a
  compiled loop and tallies matchings per multigraph. It is the independent
  check on the grouped engine.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator

import numpy as np
from numba import njit, types
from numba.typed import Dict

from .corelab import loop_insertion
from .decompose import bridge_number
from .multigraph import Multigraph, is_connected, subdivide_edge, weight
from .planarity import is_planar

CENSUS_CAP = 6
FILTERS = ("connected", "planar")

Pairs = tuple[tuple[int, int], ...]


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _distribute(rem: int, vs: list[int], resid: list[int], start: int) -> Iterator[list[tuple[int, int]]]:
    """All ways to split ``rem`` half-edges among ``vs[start:]`` respecting residual degrees."""
    if rem == 0:
        yield []
        return
    if start >= len(vs):
        return
    v = vs[start]
    for m in range(min(rem, resid[v]), -1, -1):
        for tail in _distribute(rem - m, vs, resid, start + 1):
            yield ([(v, m)] if m else []) + tail


def iter_pairing_classes(degrees: Iterable[int]) -> Iterator[tuple[Pairs, int]]:
    """Yield each multigraph with the given degree sequence and its number of matchings.

    Vertices are ``1..len(degrees)``; graphs come as sorted edge tuples.
    """
    deg = [0] + list(degrees)
    V = len(deg) - 1
    if sum(deg) % 2:
        return

    def rec(u: int, resid: list[int], edges: list[tuple[int, int]], count: int):
        while u <= V and resid[u] == 0:
            u += 1
        if u > V:
            yield tuple(edges), count
            return
        r = resid[u]
        higher = [v for v in range(u + 1, V + 1) if resid[v] > 0]
        for loops in range(r // 2 + 1):
            rem = r - 2 * loops
            loop_ways = comb(r, 2 * loops) * _double_factorial(2 * loops - 1)
            for split in _distribute(rem, higher, resid, 0):
                ways = loop_ways * factorial(rem)
                new_resid = resid[:]
                new_resid[u] = 0
                new_edges = edges + [(u, u)] * loops
                for v, m in split:
                    # which of u's half-edges go to v is in the multinomial; v's side is ordered
                    ways //= factorial(m)
                    ways *= factorial(resid[v]) // factorial(resid[v] - m)
                    new_resid[v] -= m
                    new_edges += [(u, v)] * m
                yield from rec(u + 1, new_resid, new_edges, count * ways)

    yield from rec(1, deg, [], 1)


@njit(cache=True)
def _pairing_tally(vertex_of, nv):
    """Walk all perfect matchings of half-edges; tally matchings per adjacency code.

    The code stores, base 4, the edge multiplicity of each vertex pair ``a <= b``.
    """
    H = vertex_of.shape[0]
    half = H // 2
    slot = np.zeros((nv, nv), dtype=np.int64)
    idx = 0
    for a in range(nv):
        for b in range(a, nv):
            p = np.int64(1)
            for _ in range(idx):
                p *= 4
            slot[a, b] = p
            slot[b, a] = p
            idx += 1
    tally = Dict.empty(key_type=types.int64, value_type=types.int64)
    matched = np.zeros(H, dtype=np.bool_)
    first = np.zeros(half, dtype=np.int64)
    second = np.zeros(half, dtype=np.int64)
    contrib = np.zeros(half, dtype=np.int64)
    code = np.int64(0)
    d = 0
    first[0] = 0
    second[0] = 0
    matched[0] = True
    while d >= 0:
        i = first[d]
        j = second[d]
        if j > i:
            matched[j] = False
            code -= contrib[d]
        j += 1
        while j < H and matched[j]:
            j += 1
        if j >= H:
            matched[i] = False
            d -= 1
            continue
        second[d] = j
        matched[j] = True
        c = slot[vertex_of[i], vertex_of[j]]
        contrib[d] = c
        code += c
        if d == half - 1:
            if code in tally:
                tally[code] += 1
            else:
                tally[code] = 1
            continue
        nxt = i + 1
        while matched[nxt]:
            nxt += 1
        d += 1
        first[d] = nxt
        second[d] = nxt
        matched[nxt] = True
    return tally


def iter_pairings_raw(two_n: int) -> Iterator[tuple[Pairs, int]]:
    """Multigraphs of the cubic pairing model with raw matching tallies (compiled walk)."""
    if two_n == 0:
        yield (), 1
        return
    vertex_of = np.repeat(np.arange(two_n, dtype=np.int64), 3)
    tally = _pairing_tally(vertex_of, two_n)
    slots = [(a, b) for a in range(two_n) for b in range(a, two_n)]
    for code, count in sorted(tally.items()):
        edges: list[tuple[int, int]] = []
        c = int(code)
        for a, b in slots:
            edges += [(a + 1, b + 1)] * (c % 4)
            c //= 4
        yield tuple(sorted(edges)), int(count)


@dataclass(frozen=True)
class CensusRecord:
    edges: Pairs
    weight: Fraction
    pairings: int


@dataclass(frozen=True)
class ClassCensus:
    two_n: int
    filters: tuple[str, ...]
    total_weight: Fraction
    accepted_pairings: int
    records: tuple[CensusRecord, ...] = field(repr=False)

    def graph(self, rec: CensusRecord) -> Multigraph:
        return Multigraph.from_edges(self.two_n, rec.edges)


def _passes(g: Multigraph, filters: tuple[str, ...]) -> bool:
    if "connected" in filters and not is_connected(g):
        return False
    if "planar" in filters and not is_planar(g):
        return False
    return True


_CACHE: dict[tuple, ClassCensus] = {}


def census(two_n: int, filters: Iterable[str] = (), engine: str = "grouped", cap: int = CENSUS_CAP) -> ClassCensus:
    """Total weight of cubic multigraphs on ``two_n`` labelled vertices passing ``filters``."""
    flt = tuple(sorted(set(filters)))
    for f in flt:
        if f not in FILTERS:
            raise ValueError(f"unknown filter {f!r}")
    if two_n < 0 or two_n % 2:
        raise ValueError("two_n must be a non-negative even number")
    if two_n > cap:
        raise ValueError(f"census size {two_n} exceeds cap {cap}")
    key = (two_n, flt, engine)
    if key in _CACHE:
        return _CACHE[key]
    if engine == "grouped":
        source = iter_pairing_classes([3] * two_n)
    elif engine == "pairings":
        source = iter_pairings_raw(two_n)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    records = []
    total = Fraction(0)
    accepted = 0
    for edges, count in source:
        g = Multigraph.from_edges(two_n, edges)
        if not _passes(g, flt):
            continue
        w = weight(g)
        records.append(CensusRecord(edges, w, count))
        total += w
        accepted += count
    out = ClassCensus(two_n, flt, total, accepted, tuple(sorted(records, key=lambda r: r.edges)))
    _CACHE[key] = out
    return out


def pairing_weight_consistent(c: ClassCensus) -> bool:
    """Each record's matching count equals its weight times ``6^two_n``, and so does the total."""
    scale = factorial(3) ** c.two_n
    if any(r.weight * scale != r.pairings for r in c.records):
        return False
    return c.total_weight * scale == c.accepted_pairings


# identities ----------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    name: str
    lhs: Fraction
    rhs: Fraction
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _has_loop_at(edges: Pairs, v: int) -> bool:
    return (v, v) in edges


def verify_loop_identity(two_n: int, engine: str = "grouped") -> IdentityReport:
    """Probability of a loop at vertex 1, directly and via the smaller class.

    The right side is ``((2n-1) a_{n-1} 3(n-1)/2 + (2n-1) a_{n-1}/4) / a_n``.
    """
    if two_n < 2 or two_n % 2 or two_n > CENSUS_CAP:
        raise ValueError(f"two_n must be even in 2..{CENSUS_CAP}")
    n = two_n // 2
    big = census(two_n, engine=engine)
    small = census(two_n - 2, engine=engine)
    loop_weight = sum((r.weight for r in big.records if _has_loop_at(r.edges, 1)), Fraction(0))
    a_n, a_prev = big.total_weight, small.total_weight
    rhs = ((2 * n - 1) * a_prev * Fraction(3 * (n - 1), 2) + (2 * n - 1) * a_prev / 4) / a_n
    return IdentityReport("loop", loop_weight / a_n, rhs,
                          {"loop_weight": loop_weight, "a_n": a_n, "a_n_minus_1": a_prev})


def verify_bridge_identity(two_n: int, f: int, engine: str = "grouped") -> IdentityReport:
    """Weight of connected cubic graphs with ``b(1,2) >= 2f+1`` against the split sum.

    The right side is ``sum over j+k=n-1, j,k>=f of C(2n-2, 2j) m_j m_k (3j)(3k)``.
    """
    if two_n < 2 or two_n % 2 or two_n > CENSUS_CAP:
        raise ValueError(f"two_n must be even in 2..{CENSUS_CAP}")
    if f < 1:
        raise ValueError("f must be at least 1")
    n = two_n // 2
    big = census(two_n, ("connected",), engine=engine)
    lhs = Fraction(0)
    for r in big.records:
        if bridge_number(big.graph(r), 1, 2) >= 2 * f + 1:
            lhs += r.weight
    m = {i: census(2 * i, ("connected",), engine=engine).total_weight for i in range(f, n)}
    rhs = Fraction(0)
    for j in range(f, n):
        k = n - 1 - j
        if k < f:
            continue
        rhs += comb(2 * n - 2, 2 * j) * m[j] * m[k] * (3 * j) * (3 * k)
    return IdentityReport("bridge", lhs, rhs, {"m_n": big.total_weight,
                                               "probability": lhs / big.total_weight})


@dataclass(frozen=True)
class SubdivisionReport:
    subdivision_total: Fraction
    subdivision_target: Fraction
    subdivision_results: int
    loop_total: Fraction
    loop_target: Fraction
    loop_results: int

    @property
    def holds(self) -> bool:
        return self.subdivision_total == self.subdivision_target and self.loop_total == self.loop_target


def verify_subdivision_identities(h: Multigraph) -> SubdivisionReport:
    """Sum weights over the distinct one-edge subdivisions and over the distinct loop insertions."""
    subs: dict[tuple, Fraction] = {}
    loops: dict[tuple, Fraction] = {}
    for eid, _, _ in h.edges:
        g = subdivide_edge(h, eid)
        subs.setdefault(g.canonical(), weight(g))
        g = loop_insertion(h, eid)
        loops.setdefault(g.canonical(), weight(g))
    wh = weight(h)
    return SubdivisionReport(
        sum(subs.values(), Fraction(0)), wh * h.m, len(subs),
        sum(loops.values(), Fraction(0)), wh * h.m / 2, len(loops),
    )


def identity_corpus() -> list[Multigraph]:
    """Ten small multigraphs mixing loops, parallel classes and simple parts."""
    E = Multigraph.from_edges
    return [
        E(1, [(1, 1)]),
        E(3, [(1, 2), (2, 3), (3, 1)]),
        E(2, [(1, 2)] * 3),
        E(2, [(1, 1), (1, 2), (2, 2)]),
        E(1, [(1, 1), (1, 1)]),
        E(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
        E(3, [(1, 2), (1, 2), (2, 3), (3, 3), (1, 3)]),
        E(4, [(1, 2), (1, 2), (1, 2), (3, 4), (3, 3), (4, 4), (2, 3)]),
        E(2, [(1, 1), (1, 1), (1, 2), (1, 2), (2, 2)]),
        E(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 3), (3, 3)]),
    ]


def census_report(two_n: int, filters: Iterable[str] = (), identities: bool = False) -> dict:
    """JSON-ready summary with exact rationals rendered as ``p/q`` strings."""
    c = census(two_n, filters)
    out: dict = {
        "two_n": two_n,
        "filters": list(c.filters),
        "total_weight": frac_str(c.total_weight),
        "graphs": len(c.records),
        "accepted_pairings": c.accepted_pairings,
        "pairing_weight_consistent": pairing_weight_consistent(c),
    }
    if identities:
        ids: dict = {}
        if 2 <= two_n <= CENSUS_CAP:
            rep = verify_loop_identity(two_n)
            ids["loop"] = {"lhs": frac_str(rep.lhs), "rhs": frac_str(rep.rhs), "holds": rep.holds,
                           "loop_weight": frac_str(rep.details["loop_weight"])}
            rep = verify_bridge_identity(two_n, 1)
            ids["bridge_f1"] = {"lhs": frac_str(rep.lhs), "rhs": frac_str(rep.rhs), "holds": rep.holds}
        sub = [verify_subdivision_identities(h) for h in identity_corpus()]
        ids["subdivision_corpus"] = {"graphs": len(sub), "all_hold": all(s.holds for s in sub)}
        out["identities"] = ids
    return out


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"
