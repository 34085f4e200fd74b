"""Planarity test via the left-right criterion (no embedding is produced).

Loops and parallel edges are dropped first. Trees hanging off the graph are
stripped (they never affect planarity), and any connected piece whose cycle
space has dimension at most 2 is accepted immediately: a Kuratowski
subdivision needs at least three independent cycles. Only the remaining
pieces go through the left-right test.
"""
from __future__ import annotations

from collections import deque
from typing import Optional

from .multigraph import Multigraph


def _simple_adjacency(g: Multigraph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(g.n + 1)]
    for _, u, v in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def is_planar(g: Multigraph) -> bool:
    adj = _simple_adjacency(g)
    n = g.n
    m = sum(len(a) for a in adj) // 2
    if n >= 3 and m > 3 * n - 6:
        return False
    # peel vertices of degree <= 1
    deg = [len(a) for a in adj]
    alive = [True] * (n + 1)
    queue = deque(v for v in range(1, n + 1) if deg[v] <= 1)
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    queue.append(w)
    seen = [False] * (n + 1)
    for s in range(1, n + 1):
        if not alive[s] or seen[s]:
            continue
        comp = [s]
        seen[s] = True
        i = 0
        while i < len(comp):
            x = comp[i]
            i += 1
            for y in adj[x]:
                if alive[y] and not seen[y]:
                    seen[y] = True
                    comp.append(y)
        edges = sum(deg[x] for x in comp) // 2
        if edges - len(comp) <= 1:
            continue
        if len(comp) >= 3 and edges > 3 * len(comp) - 6:
            return False
        index = {x: j for j, x in enumerate(comp)}
        local = [[index[y] for y in sorted(adj[x]) if alive[y]] for x in comp]
        if not _LRTester(local).run():
            return False
    return True


class _Interval:
    __slots__ = ("low", "high")

    def __init__(self, low=None, high=None):
        self.low = low
        self.high = high

    def empty(self) -> bool:
        return self.low is None and self.high is None

    def copy(self) -> _Interval:
        return _Interval(self.low, self.high)


class _ConflictPair:
    __slots__ = ("left", "right")

    def __init__(self, left: Optional[_Interval] = None, right: Optional[_Interval] = None):
        self.left = left if left is not None else _Interval()
        self.right = right if right is not None else _Interval()

    def swap(self) -> None:
        self.left, self.right = self.right, self.left


class _LRTester:
    """Left-right planarity test on a connected simple graph given by 0-based adjacency lists."""

    def __init__(self, adj: list[list[int]]):
        self.adj = adj
        n = len(adj)
        self.height: list[Optional[int]] = [None] * n
        self.parent_edge: list[Optional[tuple[int, int]]] = [None] * n
        self.oriented: set[tuple[int, int]] = set()
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.lowpt: dict = {}
        self.lowpt2: dict = {}
        self.nesting: dict = {}
        self.ref: dict = {}
        self.lowpt_edge: dict = {}
        self.stack_bottom: dict = {}
        self.S: list[_ConflictPair] = []

    def run(self) -> bool:
        root = 0
        self.height[root] = 0
        self._orient(root)
        self.ordered = [sorted(self.out[v], key=lambda w, v=v: self.nesting[(v, w)]) for v in range(len(self.adj))]
        return self._test(root)

    def _orient(self, root: int) -> None:
        stack = [root]
        ind = [0] * len(self.adj)
        pending: set[tuple[int, int]] = set()
        while stack:
            v = stack.pop()
            e = self.parent_edge[v]
            nbrs = self.adj[v]
            while ind[v] < len(nbrs):
                w = nbrs[ind[v]]
                vw = (v, w)
                if vw not in pending:
                    if vw in self.oriented or (w, v) in self.oriented:
                        ind[v] += 1
                        continue
                    self.oriented.add(vw)
                    self.out[v].append(w)
                    self.lowpt[vw] = self.height[v]
                    self.lowpt2[vw] = self.height[v]
                    if self.height[w] is None:
                        self.parent_edge[w] = vw
                        self.height[w] = self.height[v] + 1
                        pending.add(vw)
                        stack.append(v)
                        stack.append(w)
                        break
                    self.lowpt[vw] = self.height[w]
                # finish vw: nesting depth and parent lowpoints
                self.nesting[vw] = 2 * self.lowpt[vw]
                if self.lowpt2[vw] < self.height[v]:
                    self.nesting[vw] += 1
                if e is not None:
                    if self.lowpt[vw] < self.lowpt[e]:
                        self.lowpt2[e] = min(self.lowpt[e], self.lowpt2[vw])
                        self.lowpt[e] = self.lowpt[vw]
                    elif self.lowpt[vw] > self.lowpt[e]:
                        self.lowpt2[e] = min(self.lowpt2[e], self.lowpt[vw])
                    else:
                        self.lowpt2[e] = min(self.lowpt2[e], self.lowpt2[vw])
                ind[v] += 1

    def _top(self) -> Optional[_ConflictPair]:
        return self.S[-1] if self.S else None

    def _lowest(self, p: _ConflictPair) -> int:
        if p.left.empty():
            return self.lowpt[p.right.low]
        if p.right.empty():
            return self.lowpt[p.left.low]
        return min(self.lowpt[p.left.low], self.lowpt[p.right.low])

    def _conflicting(self, iv: _Interval, b) -> bool:
        return not iv.empty() and self.lowpt[iv.high] > self.lowpt[b]

    def _test(self, root: int) -> bool:
        stack = [root]
        ind = [0] * len(self.adj)
        pending: set[tuple[int, int]] = set()
        while stack:
            v = stack.pop()
            e = self.parent_edge[v]
            descended = False
            ordered = self.ordered[v]
            while ind[v] < len(ordered):
                w = ordered[ind[v]]
                ei = (v, w)
                if ei not in pending:
                    self.stack_bottom[ei] = self._top()
                    if ei == self.parent_edge[w]:
                        pending.add(ei)
                        stack.append(v)
                        stack.append(w)
                        descended = True
                        break
                    self.lowpt_edge[ei] = ei
                    self.S.append(_ConflictPair(right=_Interval(ei, ei)))
                if self.lowpt[ei] < self.height[v]:
                    if w == ordered[0]:
                        self.lowpt_edge[e] = self.lowpt_edge[ei]
                    elif not self._add_constraints(ei, e):
                        return False
                ind[v] += 1
            if not descended and e is not None:
                self._remove_back_edges(e)
        return True

    def _add_constraints(self, ei, e) -> bool:
        P = _ConflictPair()
        while True:
            Q = self.S.pop()
            if not Q.left.empty():
                Q.swap()
            if not Q.left.empty():
                return False
            if self.lowpt[Q.right.low] > self.lowpt[e]:
                if P.right.empty():
                    P.right = Q.right.copy()
                else:
                    self.ref[P.right.low] = Q.right.high
                P.right.low = Q.right.low
            else:
                self.ref[Q.right.low] = self.lowpt_edge[e]
            if self._top() is self.stack_bottom[ei]:
                break
        while self.S and (self._conflicting(self.S[-1].left, ei) or self._conflicting(self.S[-1].right, ei)):
            Q = self.S.pop()
            if self._conflicting(Q.right, ei):
                Q.swap()
            if self._conflicting(Q.right, ei):
                return False
            self.ref[P.right.low] = Q.right.high
            if Q.right.low is not None:
                P.right.low = Q.right.low
            if P.left.empty():
                P.left = Q.left.copy()
            else:
                self.ref[P.left.low] = Q.left.high
            P.left.low = Q.left.low
        if not (P.left.empty() and P.right.empty()):
            self.S.append(P)
        return True

    def _remove_back_edges(self, e) -> None:
        u = e[0]
        while self.S and self._lowest(self.S[-1]) == self.height[u]:
            self.S.pop()
        if self.S:
            P = self.S.pop()
            while P.left.high is not None and P.left.high[1] == u:
                P.left.high = self.ref.get(P.left.high)
            if P.left.high is None and P.left.low is not None:
                self.ref[P.left.low] = P.right.low
                P.left.low = None
            while P.right.high is not None and P.right.high[1] == u:
                P.right.high = self.ref.get(P.right.high)
            if P.right.high is None and P.right.low is not None:
                self.ref[P.right.low] = P.left.low
                P.right.low = None
            self.S.append(P)
        if self.lowpt[e] < self.height[u]:
            top = self.S[-1]
            hl, hr = top.left.high, top.right.high
            if hl is not None and (hr is None or self.lowpt[hl] > self.lowpt[hr]):
                self.ref[e] = hl
            else:
                self.ref[e] = hr
