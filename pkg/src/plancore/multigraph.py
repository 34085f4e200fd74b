"""Labelled multigraphs with loops, parallel edges and stable edge ids."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Iterator

Edge = tuple[int, int, int]  # (edge id, u, v)


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on vertices ``1..n``.

    ``edges`` holds ``(id, u, v)`` triples sorted by id. Ids are unique within a
    value and ``next_id`` is strictly larger than every id ever issued, so an
    id retired by an edit is never handed out again.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    next_id: int = field(default=-1)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        last = -1
        for eid, u, v in self.edges:
            if eid <= last:
                raise ValueError("edge ids must be strictly increasing")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {eid} has endpoint outside 1..{self.n}")
            last = eid
        if self.next_id < 0:
            object.__setattr__(self, "next_id", last + 1)
        elif self.next_id <= last:
            raise ValueError("next_id must exceed every edge id")

    # construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Multigraph:
        return cls(n, tuple((i, u, v) for i, (u, v) in enumerate(pairs)))

    @classmethod
    def from_text(cls, text: str) -> Multigraph:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty graph text")
        n, m = (int(t) for t in lines[0].split())
        body = lines[1:]
        if len(body) != m:
            raise ValueError(f"header announces {m} edges, found {len(body)}")
        pairs = []
        for ln in body:
            a, b = ln.split()
            pairs.append((int(a), int(b)))
        return cls.from_edges(n, pairs)

    def to_text(self) -> str:
        out = [f"{self.n} {len(self.edges)}"]
        out.extend(f"{u} {v}" for _, u, v in self.edges)
        return "\n".join(out) + "\n"

    # queries ----------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _by_id(self) -> dict[int, tuple[int, int]]:
        return {eid: (u, v) for eid, u, v in self.edges}

    def has_edge_id(self, eid: int) -> bool:
        return eid in self._by_id

    def endpoints(self, eid: int) -> tuple[int, int]:
        try:
            return self._by_id[eid]
        except KeyError:
            raise KeyError(f"unknown edge id {eid}") from None

    def pairs(self) -> Iterator[tuple[int, int]]:
        for _, u, v in self.edges:
            yield u, v

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex (index 0 unused): ``(edge id, other end)``; a loop is listed twice."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n + 1)]
        for eid, u, v in self.edges:
            inc[u].append((eid, v))
            inc[v].append((eid, u))
        return tuple(tuple(x) for x in inc)

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * (self.n + 1)
        for _, u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg[1:])

    def loop_count(self) -> int:
        return sum(1 for _, u, v in self.edges if u == v)

    def canonical(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        """Vertex count plus the sorted multiset of sorted endpoint pairs."""
        return self.n, tuple(sorted((min(u, v), max(u, v)) for _, u, v in self.edges))

    def same_graph(self, other: Multigraph) -> bool:
        """Equality as labelled multigraphs, ignoring edge ids."""
        return self.canonical() == other.canonical()

    # edits ------------------------------------------------------------

    def with_edges(self, n: int, removed: Iterable[int], added: Iterable[tuple[int, int]]) -> Multigraph:
        """New value on ``n`` vertices with edge ids ``removed`` dropped and ``added`` appended."""
        gone = set(removed)
        for eid in gone:
            if eid not in self._by_id:
                raise KeyError(f"unknown edge id {eid}")
        kept = [e for e in self.edges if e[0] not in gone]
        nid = self.next_id
        for u, v in added:
            kept.append((nid, u, v))
            nid += 1
        return Multigraph(n, tuple(kept), nid)


def weight(g: Multigraph) -> Fraction:
    """Compensation factor: ``2^-loops`` times ``1/i!`` per loop site or parallel class of size ``i``."""
    loops: Counter[int] = Counter()
    classes: Counter[tuple[int, int]] = Counter()
    for _, u, v in g.edges:
        if u == v:
            loops[u] += 1
        else:
            classes[(min(u, v), max(u, v))] += 1
    denom = 2 ** sum(loops.values())
    for c in loops.values():
        denom *= factorial(c)
    for c in classes.values():
        denom *= factorial(c)
    return Fraction(1, denom)


def is_simple(g: Multigraph) -> bool:
    seen = set()
    for _, u, v in g.edges:
        if u == v:
            return False
        key = (min(u, v), max(u, v))
        if key in seen:
            return False
        seen.add(key)
    return True


def degree_sequence(g: Multigraph) -> tuple[int, ...]:
    return g.degree_sequence()


def subdivide_edge(g: Multigraph, eid: int, new_label: int | None = None) -> Multigraph:
    """Replace edge ``uv`` by ``u-(n+1)`` and ``(n+1)-v``; the new label must be ``n+1``."""
    w = g.n + 1
    if new_label is not None and new_label != w:
        raise ValueError(f"new label must be {w}, got {new_label}")
    u, v = g.endpoints(eid)
    return g.with_edges(w, [eid], [(u, w), (w, v)])


def relabel(g: Multigraph, mapping: dict[int, int], n: int | None = None) -> Multigraph:
    """Apply a vertex map to every endpoint, keeping edge ids."""
    size = g.n if n is None else n
    return Multigraph(size, tuple((e, mapping[u], mapping[v]) for e, u, v in g.edges), g.next_id)


def components(g: Multigraph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    parent = list(range(g.n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for _, u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for x in range(1, g.n + 1):
        groups.setdefault(find(x), []).append(x)
    return [groups[r] for r in sorted(groups)]


def is_connected(g: Multigraph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def induced(g: Multigraph, vertices: Iterable[int]) -> tuple[Multigraph, tuple[int, ...]]:
    """Subgraph induced on ``vertices`` relabelled to ``1..k`` in increasing order.

    Returns the graph and the tuple of original labels (position ``i`` holds the
    original label of new vertex ``i+1``). Edge order follows the original ids.
    """
    labels = tuple(sorted(set(vertices)))
    index = {x: i + 1 for i, x in enumerate(labels)}
    pairs = [(index[u], index[v]) for _, u, v in g.edges if u in index and v in index]
    return Multigraph.from_edges(len(labels), pairs), labels


def disjoint_union(h1: Multigraph, h2: Multigraph) -> Multigraph:
    """``h1`` followed by ``h2`` shifted by ``h1.n``; edge ids are renumbered densely."""
    off = h1.n
    pairs = list(h1.pairs()) + [(u + off, v + off) for u, v in h2.pairs()]
    return Multigraph.from_edges(h1.n + h2.n, pairs)
