"""Brute-force reference implementations used only by the tests."""
from __future__ import annotations

from itertools import combinations

from plancore.multigraph import Multigraph


def cycle_lengths(g: Multigraph) -> set[int]:
    """Lengths of all cycles by exhaustive search (loops 1, parallel pairs 2)."""
    lengths: set[int] = set()
    adj: dict[int, set[int]] = {v: set() for v in range(1, g.n + 1)}
    mult: dict[tuple[int, int], int] = {}
    for _, u, v in g.edges:
        if u == v:
            lengths.add(1)
            continue
        key = (min(u, v), max(u, v))
        mult[key] = mult.get(key, 0) + 1
        adj[u].add(v)
        adj[v].add(u)
    if any(c >= 2 for c in mult.values()):
        lengths.add(2)
    # simple cycles of length >= 3 rooted at their smallest vertex
    for s in range(1, g.n + 1):
        stack = [(s, [s])]
        while stack:
            x, path = stack.pop()
            for y in adj[x]:
                if y == s and len(path) >= 3:
                    lengths.add(len(path))
                elif y > s and y not in path:
                    stack.append((y, path + [y]))
    return lengths


def girth_brute(g: Multigraph) -> int | None:
    ls = cycle_lengths(g)
    return min(ls) if ls else None


def circumference_brute(g: Multigraph) -> int | None:
    ls = cycle_lengths(g)
    return max(ls) if ls else None


def _contract(edges: set[tuple[int, int]], u: int, v: int) -> set[tuple[int, int]]:
    out = set()
    for a, b in edges:
        a = u if a == v else a
        b = u if b == v else b
        if a != b:
            out.add((min(a, b), max(a, b)))
    return out


def _is_k5(edges: set[tuple[int, int]]) -> bool:
    verts = {x for e in edges for x in e}
    return len(verts) == 5 and len(edges) == 10


def _is_k33(edges: set[tuple[int, int]]) -> bool:
    verts = sorted({x for e in edges for x in e})
    if len(verts) != 6 or len(edges) != 9:
        return False
    for side in combinations(verts, 3):
        a = set(side)
        if all((x in a) != (y in a) for x, y in edges):
            return True
    return False


def has_kuratowski_minor(edges: set[tuple[int, int]], memo: dict | None = None) -> bool:
    """Exhaustive minor search by deletion and contraction (tiny graphs only)."""
    if memo is None:
        memo = {}
    key = frozenset(edges)
    if key in memo:
        return memo[key]
    verts = {x for e in edges for x in e}
    result = False
    if len(edges) >= 9 and len(verts) >= 5:
        if _is_k5(edges) or _is_k33(edges):
            result = True
        else:
            for e in sorted(edges):
                rest = edges - {e}
                if has_kuratowski_minor(rest, memo) or has_kuratowski_minor(_contract(rest, *e), memo):
                    result = True
                    break
    memo[key] = result
    return result


def planar_brute(g: Multigraph) -> bool:
    edges = {(min(u, v), max(u, v)) for _, u, v in g.edges if u != v}
    return not has_kuratowski_minor(edges)
