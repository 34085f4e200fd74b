"""Complex part, 2-core, kernel with subdivision counts, blocks, bridges and cycle lengths."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .multigraph import Multigraph, components

DEFAULT_CIRCUMFERENCE_CAP = 40


class KernelTooLarge(ValueError):
    """Raised when exact circumference search is refused for a kernel above the cap."""


@dataclass(frozen=True)
class CoreDecomposition:
    """Core and kernel of the complex part of a multigraph.

    The core is the kernel with ``counts[i]`` subdivision vertices on its
    ``i``-th edge (id order). It is relabelled so that kernel vertices come
    first (``1..v(kernel)``, increasing original label) followed by the
    subdivision vertices, edge by edge along each chain; it is rebuilt from
    ``kernel`` and ``counts`` on first access. ``core_labels[i]`` is the
    original label of core vertex ``i+1``. ``complex_part`` holds original
    labels, or ``None`` when the decomposition was built straight from kernel
    data and the complex part is the whole core.
    """

    kernel: Multigraph
    counts: tuple[int, ...]
    complex_part: frozenset[int] | None = None
    core_labels: tuple[int, ...] | None = None

    @cached_property
    def core(self) -> Multigraph:
        return _expand(self.kernel, self.counts)

    @property
    def S(self) -> int:
        return sum(self.counts)

    def to_text(self) -> str:
        lines = [self.kernel.to_text().rstrip("\n")]
        lines.extend(f"{eid}: {c}" for (eid, _, _), c in zip(self.kernel.edges, self.counts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CoreDecomposition:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, m = (int(t) for t in lines[0].split())
        kernel = Multigraph.from_text("\n".join(lines[: m + 1]))
        counts = [0] * m
        for ln in lines[m + 1 :]:
            key, val = ln.split(":")
            counts[int(key)] = int(val)
        if len(lines) - m - 1 != m:
            raise ValueError("expected one count line per kernel edge")
        return from_kernel(kernel, counts)


def complex_part(g: Multigraph) -> frozenset[int]:
    comp_of = {}
    comps = components(g)
    for i, c in enumerate(comps):
        for x in c:
            comp_of[x] = i
    ecount = [0] * len(comps)
    for _, u, _ in g.edges:
        ecount[comp_of[u]] += 1
    out: set[int] = set()
    for i, c in enumerate(comps):
        if ecount[i] >= len(c) + 1:
            out.update(c)
    return frozenset(out)


def _walk_chains(n_kernel: int, core_inc: list[list[tuple[int, int]]], is_kernel: list[bool]):
    """Contract maximal degree-2 chains; returns ``[(u, v, internal vertices)]``."""
    used: set[int] = set()
    chains = []
    for u in range(1, n_kernel + 1):
        for eid, nxt in core_inc[u]:
            if eid in used:
                continue
            used.add(eid)
            internal = []
            cur, prev_e = nxt, eid
            while not is_kernel[cur]:
                internal.append(cur)
                (e1, a), (e2, b) = core_inc[cur]
                if e1 == prev_e:
                    prev_e, cur = e2, b
                else:
                    prev_e, cur = e1, a
                used.add(prev_e)
            chains.append((u, cur, internal))
    return chains


def core_kernel(g: Multigraph) -> CoreDecomposition:
    cp = complex_part(g)
    if not cp:
        return CoreDecomposition(Multigraph(0), (), frozenset(), ())
    deg = [0] * (g.n + 1)
    inc: list[list[tuple[int, int]]] = [[] for _ in range(g.n + 1)]
    for eid, u, v in g.edges:
        if u in cp:
            deg[u] += 1
            deg[v] += 1
            inc[u].append((eid, v))
            inc[v].append((eid, u))
    alive = [False] * (g.n + 1)
    for x in cp:
        alive[x] = True
    dead_edge: set[int] = set()
    queue = deque(x for x in sorted(cp) if deg[x] <= 1)
    while queue:
        x = queue.popleft()
        if not alive[x]:
            continue
        alive[x] = False
        for eid, y in inc[x]:
            if eid in dead_edge:
                continue
            dead_edge.add(eid)
            deg[y] -= 1
            if alive[y] and deg[y] <= 1:
                queue.append(y)
    core_vertices = [x for x in sorted(cp) if alive[x]]
    kernel_orig = [x for x in core_vertices if deg[x] >= 3]
    assert kernel_orig, "a complex component always keeps a vertex of degree >= 3"
    kidx = {x: i + 1 for i, x in enumerate(kernel_orig)}
    nk = len(kernel_orig)
    # incidence on kernel-first labels so that the walk order is canonical
    label = dict(kidx)
    nxt = nk + 1
    for x in core_vertices:
        if x not in label:
            label[x] = nxt
            nxt += 1
    nc = len(core_vertices)
    core_inc: list[list[tuple[int, int]]] = [[] for _ in range(nc + 1)]
    for eid, u, v in g.edges:
        if eid in dead_edge or not alive[u]:
            continue
        core_inc[label[u]].append((eid, label[v]))
        core_inc[label[v]].append((eid, label[u]))
    is_kernel = [False] * (nc + 1)
    for i in range(1, nk + 1):
        is_kernel[i] = True
    chains = _walk_chains(nk, core_inc, is_kernel)
    # final core labelling: internal vertices numbered along the chains
    final = {i: i for i in range(1, nk + 1)}
    nxt = nk + 1
    for _, _, internal in chains:
        for x in internal:
            final[x] = nxt
            nxt += 1
    inv_label = {val: key for key, val in label.items()}
    core_labels = tuple(inv_label[t] for t in sorted(final, key=final.__getitem__))
    kernel = Multigraph.from_edges(nk, [(u, v) for u, v, _ in chains])
    counts = tuple(len(internal) for _, _, internal in chains)
    return CoreDecomposition(kernel, counts, frozenset(cp), core_labels)


def _expand(kernel: Multigraph, counts: Sequence[int]) -> Multigraph:
    pairs = []
    nxt = kernel.n + 1
    for (_, u, v), c in zip(kernel.edges, counts):
        prev = u
        for _ in range(c):
            pairs.append((prev, nxt))
            prev = nxt
            nxt += 1
        pairs.append((prev, v))
    return Multigraph.from_edges(nxt - 1, pairs)


def reconstruct_core(kernel: Multigraph, counts: Sequence[int]) -> Multigraph:
    """Subdivide each kernel edge ``counts[e]`` times; new vertices numbered along edges in id order."""
    if len(counts) != kernel.m:
        raise ValueError("one count per kernel edge required")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    return _expand(kernel, counts)


def from_kernel(kernel: Multigraph, counts: Sequence[int]) -> CoreDecomposition:
    """Decomposition of the core obtained by expanding ``kernel`` with ``counts``.

    No graph search is run, which keeps this cheap inside Monte Carlo loops.
    Kernel, counts and core agree with ``core_kernel`` of the expanded core
    when the kernel's edges are already in walking order (as produced by
    :func:`core_kernel`).
    """
    if len(counts) != kernel.m:
        raise ValueError("one count per kernel edge required")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    return CoreDecomposition(kernel, tuple(int(c) for c in counts))


# blocks and bridges ---------------------------------------------------------


@dataclass(frozen=True)
class BlockSet:
    """Blocks as edge-id sets, largest vertex count first; ``sizes`` aligned with ``blocks``."""

    blocks: tuple[frozenset[int], ...]
    sizes: tuple[int, ...]
    bridges: tuple[int, ...]

    def size(self, i: int) -> int:
        """``i``-th largest block size (1-based), 0 when there are fewer blocks."""
        return self.sizes[i - 1] if i <= len(self.sizes) else 0


def _biconnected(g: Multigraph) -> tuple[list[list[int]], list[int]]:
    """Edge groups of the 2-connected pieces (loops excluded) and the bridges."""
    disc = [0] * (g.n + 1)
    low = [0] * (g.n + 1)
    inc = g.incidence
    groups: list[list[int]] = []
    bridges: list[int] = []
    clock = 0
    estack: list[int] = []
    for root in range(1, g.n + 1):
        if disc[root]:
            continue
        clock += 1
        disc[root] = low[root] = clock
        stack = [(root, -1, 0)]
        while stack:
            v, pe, i = stack[-1]
            nbrs = inc[v]
            if i < len(nbrs):
                stack[-1] = (v, pe, i + 1)
                eid, w = nbrs[i]
                if eid == pe or w == v:
                    continue
                if not disc[w]:
                    clock += 1
                    disc[w] = low[w] = clock
                    estack.append(eid)
                    stack.append((w, eid, 0))
                elif disc[w] < disc[v]:
                    estack.append(eid)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                continue
            stack.pop()
            if not stack:
                break
            p = stack[-1][0]
            if low[v] < low[p]:
                low[p] = low[v]
            if low[v] >= disc[p]:
                grp = []
                while True:
                    e = estack.pop()
                    grp.append(e)
                    if e == pe:
                        break
                if len(grp) == 1:
                    bridges.append(pe)
                else:
                    groups.append(grp)
    return groups, bridges


def blocks(g: Multigraph) -> BlockSet:
    groups, bridges = _biconnected(g)
    found: list[tuple[int, frozenset[int]]] = []
    for grp in groups:
        verts = set()
        for e in grp:
            u, v = g.endpoints(e)
            verts.add(u)
            verts.add(v)
        found.append((len(verts), frozenset(grp)))
    for eid, u, v in g.edges:
        if u == v:
            found.append((1, frozenset((eid,))))
    found.sort(key=lambda t: (-t[0], min(t[1])))
    return BlockSet(tuple(b for _, b in found), tuple(s for s, _ in found), tuple(sorted(bridges)))


def bridges(g: Multigraph) -> tuple[int, ...]:
    return tuple(sorted(_biconnected(g)[1]))


def bridge_number(g: Multigraph, w: int, x: int) -> int:
    """Size of the smaller side after deleting edge ``wx`` if it is a bridge, else 0."""
    if w == x:
        raise ValueError("bridge number needs two distinct vertices")
    if len(components(g)) > 1:
        raise ValueError("bridge number is defined for connected graphs only")
    ids = [eid for eid, u, v in g.edges if {u, v} == {w, x}]
    if len(ids) != 1:
        return 0
    skip = ids[0]
    seen = {w}
    stack = [w]
    inc = g.incidence
    while stack:
        a = stack.pop()
        for eid, b in inc[a]:
            if eid != skip and b not in seen:
                seen.add(b)
                stack.append(b)
    if x in seen:
        return 0
    return min(len(seen), g.n - len(seen))


# cycle lengths --------------------------------------------------------------


def girth_exact(g: Multigraph) -> int | None:
    """Length of a shortest cycle (loops count 1, parallel pairs 2); ``None`` for forests."""
    if any(u == v for _, u, v in g.edges):
        return 1
    seen = set()
    simple_adj: list[list[int]] = [[] for _ in range(g.n + 1)]
    for _, u, v in g.edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            return 2
        seen.add(key)
        simple_adj[u].append(v)
        simple_adj[v].append(u)
    best = None
    dist = [-1] * (g.n + 1)
    parent = [0] * (g.n + 1)
    for s in range(1, g.n + 1):
        if not simple_adj[s]:
            continue
        touched = [s]
        dist[s] = 0
        parent[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            if best is not None and 2 * dist[x] + 1 >= best:
                break
            for y in simple_adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    touched.append(y)
                    q.append(y)
                elif y != parent[x]:
                    c = dist[x] + dist[y] + 1
                    if best is None or c < best:
                        best = c
        for t in touched:
            dist[t] = -1
        if best == 3:
            break
    return best


def _weighted_classes(d: CoreDecomposition):
    """Loop weights and, per unordered vertex pair, the sorted list of edge weights (X_e + 1)."""
    loops: list[int] = []
    pairs: dict[tuple[int, int], list[int]] = {}
    for (_, u, v), c in zip(d.kernel.edges, d.counts):
        w = c + 1
        if u == v:
            loops.append(w)
        else:
            pairs.setdefault((min(u, v), max(u, v)), []).append(w)
    for ws in pairs.values():
        ws.sort()
    return loops, pairs


def girth_via_kernel(d: CoreDecomposition) -> int | None:
    """Shortest core cycle from kernel data alone.

    Loops and parallel pairs are read off directly. Longer cycles use one
    shortest-path tree per source on the kernel with parallel edges collapsed
    to their lightest copy: every non-tree edge ``xy`` closes a cycle of length
    at most ``d(x) + w(xy) + d(y)``, and for a source on a shortest cycle some
    non-tree edge of that cycle attains it.
    """
    if d.kernel.m == 0:
        return None
    loops, pairs = _weighted_classes(d)
    best = min(loops) if loops else None
    for ws in pairs.values():
        if len(ws) >= 2:
            c = ws[0] + ws[1]
            if best is None or c < best:
                best = c
    if len(pairs) >= 3:
        cand = _shortest_cycle_simple(d.kernel.n, pairs)
        if cand is not None and (best is None or cand < best):
            best = cand
    return best


def _shortest_cycle_simple(n: int, pairs: dict[tuple[int, int], list[int]]) -> int | None:
    keys = list(pairs)
    rows = np.array([u - 1 for u, _ in keys] + [v - 1 for _, v in keys])
    cols = np.array([v - 1 for _, v in keys] + [u - 1 for u, _ in keys])
    wts = np.array([pairs[k][0] for k in keys] * 2, dtype=float)
    mat = csr_matrix((wts, (rows, cols)), shape=(n, n))
    dist, pred = dijkstra(mat, directed=True, return_predecessors=True)
    us = np.array([u - 1 for u, _ in keys])
    vs = np.array([v - 1 for _, v in keys])
    ew = np.array([pairs[k][0] for k in keys], dtype=float)
    # candidate[s, e] = dist[s,u] + w + dist[s,v] for edges that are not tree edges from s
    cand = dist[:, us] + dist[:, vs] + ew[None, :]
    tree = (pred[:, vs] == us[None, :]) | (pred[:, us] == vs[None, :])
    cand[tree] = np.inf
    best = cand.min()
    if not np.isfinite(best):
        return None
    return int(round(best))


def _cycle_blocks(n: int, adj: dict[int, dict[int, int]]) -> list[set[int]]:
    """Vertex sets of biconnected pieces with at least three vertices in a simple weighted graph."""
    pairs = []
    for u, nb in adj.items():
        for v in nb:
            if u < v:
                pairs.append((u, v))
    simple = Multigraph.from_edges(n, pairs)
    groups, _ = _biconnected(simple)
    out = []
    for grp in groups:
        verts = set()
        for e in grp:
            a, b = simple.endpoints(e)
            verts.update((a, b))
        if len(verts) >= 3:
            out.append(verts)
    return out


def circumference_via_kernel(d: CoreDecomposition, cap: int = DEFAULT_CIRCUMFERENCE_CAP) -> int | None:
    """Longest core cycle by exact branch-and-bound search over kernel cycles.

    Refuses (``KernelTooLarge``) when the kernel has more than ``cap`` vertices.
    """
    if d.kernel.m == 0:
        return None
    if d.kernel.n > cap:
        raise KernelTooLarge(f"kernel has {d.kernel.n} vertices, cap is {cap}")
    loops, pairs = _weighted_classes(d)
    best = max(loops) if loops else 0
    adj: dict[int, dict[int, int]] = {}
    for (u, v), ws in pairs.items():
        if len(ws) >= 2:
            best = max(best, ws[-1] + ws[-2])
        adj.setdefault(u, {})[v] = ws[-1]
        adj.setdefault(v, {})[u] = ws[-1]
    for verts in _cycle_blocks(d.kernel.n, adj):
        best = max(best, _longest_cycle_in_block(verts, adj, best))
    return best if best > 0 else None


def _longest_cycle_in_block(verts: set[int], adj: dict[int, dict[int, int]], floor: int) -> int:
    order = sorted(verts)
    local = {v: {w: c for w, c in adj[v].items() if w in verts} for v in order}
    maxw = {v: max(local[v].values()) for v in order}
    best = floor
    for s in order:
        # cycles whose smallest vertex is s
        allowed = [v for v in order if v > s]
        if len(allowed) < 2:
            break
        rest_bound = sum(maxw[v] for v in allowed) + maxw[s]
        if rest_bound <= best:
            continue
        allowed_set = set(allowed)
        visited = {s}
        # explicit stack of (vertex, weight so far, remaining bound, neighbour iterator)
        stack = [(s, 0, rest_bound - maxw[s], iter(sorted(local[s].items(), key=lambda t: -t[1])))]
        depth_vertices = [s]
        while stack:
            v, acc, remaining, it = stack[-1]
            advanced = False
            for w, c in it:
                if w == s:
                    if len(depth_vertices) >= 3 and acc + c > best:
                        best = acc + c
                    continue
                if w in visited or w not in allowed_set:
                    continue
                new_acc = acc + c
                new_rem = remaining - maxw[w]
                if new_acc + new_rem + maxw[s] <= best:
                    continue
                visited.add(w)
                depth_vertices.append(w)
                stack.append((w, new_acc, new_rem, iter(sorted(local[w].items(), key=lambda t: -t[1]))))
                advanced = True
                break
            if not advanced:
                stack.pop()
                x = depth_vertices.pop()
                if x != s:
                    visited.discard(x)
    return best


def max_loop_cycle(d: CoreDecomposition) -> int:
    best = None
    for (_, u, v), c in zip(d.kernel.edges, d.counts):
        if u == v and (best is None or c + 1 > best):
            best = c + 1
    if best is None:
        raise ValueError("kernel has no loops")
    return best


def kernel_block_structure(kernel: Multigraph) -> tuple[list[tuple[int, list[int]]], list[int]]:
    """Kernel blocks as ``(vertex count, edge ids)`` plus loop edge ids, for count-based block sizes."""
    groups, _ = _biconnected(kernel)
    out = []
    for grp in groups:
        verts = set()
        for e in grp:
            verts.update(kernel.endpoints(e))
        out.append((len(verts), sorted(grp)))
    loops = [eid for eid, u, v in kernel.edges if u == v]
    return out, loops


def core_block_sizes(kernel: Multigraph, counts: Sequence[int]) -> list[int]:
    """Block sizes of the expanded core, largest first, computed from kernel blocks and counts.

    Subdividing keeps the block structure: a kernel block gains the subdivision
    vertices on its edges, a loop with ``X`` subdivisions becomes a block of
    ``X + 1`` vertices, and subdivided bridges stay bridges.
    """
    pos = {eid: i for i, (eid, _, _) in enumerate(kernel.edges)}
    structure, loops = kernel_block_structure(kernel)
    sizes = [nv + sum(counts[pos[e]] for e in grp) for nv, grp in structure]
    sizes.extend(counts[pos[e]] + 1 for e in loops)
    sizes.sort(reverse=True)
    return sizes
