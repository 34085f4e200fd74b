from __future__ import annotations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from plancore.multigraph import Multigraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def multigraphs(draw, max_n: int = 7, max_m: int = 12, loops: bool = True) -> Multigraph:
    """Small labelled multigraphs with optional loops and parallel edges."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    pairs = []
    for _ in range(m):
        u = draw(st.integers(1, n))
        v = draw(st.integers(1, n))
        if u == v and not loops:
            continue
        pairs.append((u, v))
    return Multigraph.from_edges(n, pairs)


@st.composite
def simple_graphs(draw, max_n: int = 8) -> Multigraph:
    n = draw(st.integers(1, max_n))
    all_pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(all_pairs), unique=True, max_size=len(all_pairs))) if all_pairs else []
    return Multigraph.from_edges(n, sorted(chosen))
