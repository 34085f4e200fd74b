"""Random cores grown from a kernel, kernel families, loop and bridge insertion."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from pathlib import Path

import numpy as np

from .multigraph import Multigraph, is_simple, weight
from .polya import _urn_counts_batch, trial_states
from .rng import Rng


@dataclass(frozen=True)
class RandomCoreResult:
    """Outcome of growing a core; ``counts[i]`` belongs to the ``i``-th kernel edge in id order."""

    core: Multigraph
    counts: tuple[int, ...]
    simple: bool
    two_simple: bool
    attempts: int = 1


class AttemptsExhausted(RuntimeError):
    def __init__(self, attempts: int):
        super().__init__(f"no simple core after {attempts} attempts")
        self.attempts = attempts


def _check_kernel(K: Multigraph) -> None:
    if K.n == 0 or min(K.degree_sequence()) < 3:
        raise ValueError("kernel must have minimum degree at least 3")


def random_multicore(K: Multigraph, k: int, seed: int, trial: int = 0) -> RandomCoreResult:
    """Subdivide ``k`` times, each time choosing uniformly among the current edges.

    The live edge list keeps the drawn slot in place (it now holds the first
    half of the split edge) and appends the second half, so the kernel edge of
    origin per slot evolves exactly like the ball array of the urn sampler: for
    a given ``(seed, trial)`` the counts equal ``urn_sample(e(K), k, seed, trial)``.
    """
    _check_kernel(K)
    if k < 0:
        raise ValueError("k must be non-negative")
    rng = Rng(seed, trial)
    ends: dict[int, tuple[int, int]] = {eid: (u, v) for eid, u, v in K.edges}
    live = [eid for eid, _, _ in K.edges]
    origin = list(range(K.m))
    counts = [0] * K.m
    nid = K.next_id
    n = K.n
    for _ in range(k):
        j = rng.below(len(live))
        eid = live[j]
        u, v = ends.pop(eid)
        n += 1
        ends[nid] = (u, n)
        ends[nid + 1] = (n, v)
        live[j] = nid
        live.append(nid + 1)
        c = origin[j]
        origin.append(c)
        counts[c] += 1
        nid += 2
    core = Multigraph(n, tuple((e, *ends[e]) for e in sorted(ends)), nid)
    return RandomCoreResult(core, tuple(counts), is_simple(core), all(c >= 2 for c in counts))


def multicore_counts(K: Multigraph, k: int, trials: int, seed: int) -> np.ndarray:
    """Per-trial count vectors of :func:`random_multicore` without building graphs."""
    _check_kernel(K)
    return _urn_counts_batch(trial_states(seed, trials), np.arange(K.m, dtype=np.int64), k, K.m)


def counts_simple(K: Multigraph, counts) -> bool:
    """Whether expanding ``K`` with ``counts`` gives a simple graph."""
    classes: dict[tuple[int, int], list[int]] = {}
    for (_, u, v), c in zip(K.edges, counts):
        if u == v:
            if c < 2:
                return False
        else:
            classes.setdefault((min(u, v), max(u, v)), []).append(c)
    return all(sum(1 for c in cs if c == 0) <= 1 for cs in classes.values())


def simple_feasible(K: Multigraph, k: int) -> bool:
    """Conservative check that a simple core with ``k`` subdivisions exists."""
    loops = 0
    classes: dict[tuple[int, int], int] = {}
    for _, u, v in K.edges:
        if u == v:
            loops += 1
        else:
            key = (min(u, v), max(u, v))
            classes[key] = classes.get(key, 0) + 1
    return k >= 2 * loops + sum(r - 1 for r in classes.values())


def default_max_attempts(K: Multigraph, k: int) -> int:
    N = K.m
    if k > 2 * N * N:
        return 10 * (1 + ceil(2 * N * N / k))
    return 10_000


def random_core_simple(K: Multigraph, k: int, seed: int, max_attempts: int | None = None) -> RandomCoreResult:
    """Rejection sampling of :func:`random_multicore` until the outcome is simple.

    Attempt ``a`` uses stream ``(seed, a)``.
    """
    _check_kernel(K)
    if not simple_feasible(K, k):
        raise ValueError(f"no simple core with kernel of {K.m} edges and {k} subdivisions")
    cap = default_max_attempts(K, k) if max_attempts is None else max_attempts
    for a in range(cap):
        res = random_multicore(K, k, seed, a)
        if res.simple:
            return RandomCoreResult(res.core, res.counts, True, res.two_simple, a + 1)
    raise AttemptsExhausted(cap)


def enumerate_multicore(K: Multigraph, k: int) -> dict[tuple, Fraction]:
    """Exact law of the grown core (as a labelled multigraph) by expanding the process tree.

    Keys are :meth:`Multigraph.canonical` forms. Paths that reach the same
    labelled multigraph are merged, which is exact because the next step only
    depends on the current edge multiset.
    """
    _check_kernel(K)
    level: dict[tuple, Fraction] = {K.canonical(): Fraction(1)}
    for _ in range(k):
        nxt: dict[tuple, Fraction] = {}
        for (n, pairs), p in level.items():
            q = p / len(pairs)
            w = n + 1
            for i, (u, v) in enumerate(pairs):
                rest = pairs[:i] + pairs[i + 1 :] + ((u, w), (v, w))
                key = (w, tuple(sorted(rest)))
                nxt[key] = nxt.get(key, Fraction(0)) + q
        level = nxt
    return level


def construction_multiplicities(K: Multigraph, core: Multigraph) -> list[int]:
    """Multiplicity of the edge subdivided at each step of the unique way to grow ``core`` from ``K``.

    Peels vertices ``n, n-1, ..., v(K)+1`` (each must have degree 2) and
    records how many parallel copies the restored edge has at that stage.
    """
    pairs = [(min(u, v), max(u, v)) for u, v in core.pairs()]
    mults = []
    for w in range(core.n, K.n, -1):
        touching = [p for p in pairs if w in p]
        if len(touching) != 2:
            raise ValueError(f"vertex {w} is not a subdivision vertex")
        ends = [a if b == w else b for a, b in touching]
        for p in touching:
            pairs.remove(p)
        restored = (min(ends), max(ends))
        pairs.append(restored)
        mults.append(pairs.count(restored))
    if sorted(pairs) != sorted((min(u, v), max(u, v)) for u, v in K.pairs()):
        raise ValueError("core does not reduce to the kernel")
    mults.reverse()
    return mults


# insertions ------------------------------------------------------------------------


def _fresh_pair(base: int, w: int | None, x: int | None) -> tuple[int, int]:
    if w is None and x is None:
        return base + 1, base + 2
    if w is None or x is None or w == x or {w, x} != {base + 1, base + 2}:
        raise ValueError(f"label collision: new vertices must be {base + 1} and {base + 2}")
    return w, x


def loop_insertion(h: Multigraph, eid: int, w: int | None = None, x: int | None = None) -> Multigraph:
    """Replace edge ``yz`` by ``xy, xz``, and attach ``x`` to ``w`` which carries a loop."""
    if not h.has_edge_id(eid):
        raise KeyError(f"stale edge id {eid}")
    w, x = _fresh_pair(h.n, w, x)
    y, z = h.endpoints(eid)
    return h.with_edges(h.n + 2, [eid], [(x, y), (x, z), (w, x), (w, w)])


def bridge_insertion(h1: Multigraph, h2: Multigraph, e1: int, e2: int,
                     w: int | None = None, x: int | None = None) -> Multigraph:
    """Join ``h1`` and ``h2`` by a new bridge ``wx`` with ``w`` splitting ``e1`` and ``x`` splitting ``e2``.

    ``h2`` is shifted by ``h1.n``; ``w, x`` default to the two next labels.
    Edges are renumbered densely: ``h1`` edges, then ``h2`` edges, then the five new ones.
    """
    if not h1.has_edge_id(e1) or not h2.has_edge_id(e2):
        raise KeyError("stale edge id")
    off = h1.n
    w, x = _fresh_pair(h1.n + h2.n, w, x)
    y1, z1 = h1.endpoints(e1)
    y2, z2 = h2.endpoints(e2)
    y2, z2 = y2 + off, z2 + off
    pairs = [(u, v) for eid, u, v in h1.edges if eid != e1]
    pairs += [(u + off, v + off) for eid, u, v in h2.edges if eid != e2]
    pairs += [(w, y1), (w, z1), (w, x), (x, y2), (x, z2)]
    return Multigraph.from_edges(h1.n + h2.n + 2, pairs)


def _compact(n: int, pairs: list[tuple[int, int]], keep: list[int]) -> Multigraph:
    index = {v: i + 1 for i, v in enumerate(sorted(keep))}
    return Multigraph.from_edges(len(index), [(index[u], index[v]) for u, v in pairs if u in index])


def _other_ends(pairs: list[tuple[int, int]], v: int, skip: int) -> list[int]:
    out = []
    for a, b in pairs:
        if a == v and b == v:
            continue
        if a == v and b != skip:
            out.append(b)
        elif b == v and a != skip:
            out.append(a)
    return out


def undo_loop_insertion(g: Multigraph, w: int, x: int) -> Multigraph:
    """Delete ``w`` and ``x`` and restore the edge between the two other neighbours of ``x``."""
    pairs = list(g.pairs())
    ends = _other_ends(pairs, x, w)
    if len(ends) != 2:
        raise ValueError("x must have exactly two neighbours besides w")
    rest = [(u, v) for u, v in pairs if u not in (w, x) and v not in (w, x)]
    rest.append((ends[0], ends[1]))
    return _compact(g.n, rest, [v for v in range(1, g.n + 1) if v not in (w, x)])


def undo_bridge_insertion(g: Multigraph, w: int, x: int) -> tuple[Multigraph, Multigraph]:
    """Remove bridge ``wx`` and restore the split edges; returns the two sides, ``w``'s side first."""
    pairs = list(g.pairs())
    ew = _other_ends(pairs, w, x)
    ex = _other_ends(pairs, x, w)
    if len(ew) != 2 or len(ex) != 2:
        raise ValueError("w and x must each have two neighbours besides each other")
    rest = [(u, v) for u, v in pairs if u not in (w, x) and v not in (w, x)]
    rest += [(ew[0], ew[1]), (ex[0], ex[1])]
    adj: dict[int, set[int]] = {}
    for u, v in rest:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    side = {ew[0]}
    stack = [ew[0]]
    while stack:
        a = stack.pop()
        for b in adj.get(a, ()):
            if b not in side:
                side.add(b)
                stack.append(b)
    if ex[0] in side:
        raise ValueError("wx is not a bridge")
    others = [v for v in range(1, g.n + 1) if v not in side and v not in (w, x)]
    h1 = _compact(g.n, [p for p in rest if p[0] in side], sorted(side))
    h2 = _compact(g.n, [p for p in rest if p[0] not in side], others)
    return h1, h2


# kernel families -------------------------------------------------------------------

FAMILIES = ("necklace", "bridge-chain", "theta", "figure-eight", "k4")


@dataclass(frozen=True)
class KernelFamilySpec:
    family: str
    size: int = 1

    @classmethod
    def parse(cls, tag: str) -> KernelFamilySpec:
        """Parse ``necklace:L``, ``chain:b`` / ``bridge-chain:b``, ``theta``, ``figure-eight`` or ``k4``."""
        name, _, arg = tag.partition(":")
        if name == "chain":
            name = "bridge-chain"
        return cls(name, int(arg) if arg else 1)


def _k4() -> Multigraph:
    return Multigraph.from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


def necklace(L: int) -> Multigraph:
    """Cycle ``1..L`` with each ``i`` bridged to ``L+i``, which carries a loop."""
    if L < 1:
        raise ValueError("necklace needs L >= 1")
    pairs = [(i, i % L + 1) for i in range(1, L + 1)]
    pairs += [(i, L + i) for i in range(1, L + 1)]
    pairs += [(L + i, L + i) for i in range(1, L + 1)]
    return Multigraph.from_edges(2 * L, pairs)


def bridge_chain(b: int) -> Multigraph:
    """``b+1`` copies of K4 joined in a path by bridge insertions.

    Each new copy is split at its edge 12 and the previous copy at its edge 34,
    so end copies gain one vertex and inner copies two.
    """
    if b < 0:
        raise ValueError("bridge chain needs b >= 0")
    g = _k4()
    last_offset = 0
    for _ in range(b):
        # edge 34 of the most recent copy
        target = next(eid for eid, u, v in g.edges if (u, v) == (last_offset + 3, last_offset + 4))
        new_offset = g.n
        g = bridge_insertion(g, _k4(), target, 0)
        last_offset = new_offset
    return g


def bridge_chain_block_sizes(b: int) -> list[int]:
    """Block sizes created by :func:`bridge_chain`, largest first."""
    if b == 0:
        return [4]
    return sorted([5, 5] + [6] * (b - 1), reverse=True)


def kernel_family(spec: KernelFamilySpec) -> Multigraph:
    if spec.size < 1 and spec.family != "bridge-chain":
        raise ValueError("size must be >= 1")
    if spec.family == "necklace":
        return necklace(spec.size)
    if spec.family == "bridge-chain":
        return bridge_chain(spec.size)
    if spec.family == "theta":
        return Multigraph.from_edges(2, [(1, 2)] * 3)
    if spec.family == "figure-eight":
        return Multigraph.from_edges(1, [(1, 1), (1, 1)])
    if spec.family == "k4":
        return _k4()
    raise ValueError(f"unknown kernel family {spec.family!r}")


def load_kernel(tag: str) -> Multigraph:
    """Kernel from a CLI tag: a family tag or ``file:PATH`` in canonical text form."""
    if tag.startswith("file:"):
        return Multigraph.from_text(Path(tag[5:]).read_text())
    return kernel_family(KernelFamilySpec.parse(tag))


def kernel_weight_check(K: Multigraph, core: Multigraph) -> bool:
    """Whether the product of construction multiplicities equals ``1 / w(K)``."""
    prod = 1
    for q in construction_multiplicities(K, core):
        prod *= q
    return Fraction(prod) == 1 / weight(K)
