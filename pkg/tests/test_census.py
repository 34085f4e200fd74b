from __future__ import annotations

import json
from fractions import Fraction

import pytest

from plancore.census import (census, census_report, identity_corpus, iter_pairing_classes, iter_pairings_raw,
                             pairing_weight_consistent, verify_bridge_identity, verify_loop_identity,
                             verify_subdivision_identities)
from plancore.multigraph import Multigraph, weight


def test_small_totals():
    assert census(0).total_weight == 1
    assert census(2).total_weight == Fraction(5, 12)
    assert census(4).total_weight == Fraction(385, 48)
    assert len(census(4).records) == 47


def test_two_vertex_classes():
    recs = {r.edges: r.weight for r in census(2).records}
    assert recs[((1, 2), (1, 2), (1, 2))] == Fraction(1, 6)
    assert sum(w for e, w in recs.items() if (1, 1) in e) == Fraction(1, 4)


@pytest.mark.parametrize("two_n", [2, 4])
def test_engines_agree(two_n):
    a = census(two_n, engine="grouped")
    b = census(two_n, engine="pairings")
    assert a.records == b.records


@pytest.mark.parametrize("two_n", [0, 2, 4, 6])
def test_pairing_counts_match_weights(two_n):
    assert pairing_weight_consistent(census(two_n))


def test_raw_pairing_total():
    total = sum(count for _, count in iter_pairings_raw(4))
    assert total == 10395  # 11!!


def test_grouped_classes_have_requested_degrees():
    for edges, count in iter_pairing_classes([3, 3, 2]):
        g = Multigraph.from_edges(3, edges)
        assert g.degree_sequence() == (3, 3, 2)
        assert count == weight(g) * 6 * 6 * 2


def test_filters():
    full = census(4)
    conn = census(4, ["connected"])
    planar = census(4, ["planar"])
    assert conn.total_weight < full.total_weight
    assert planar.total_weight == full.total_weight  # nothing on 4 vertices is non-planar
    assert census(6, ["connected", "planar"]).total_weight == Fraction(5445, 8)
    with pytest.raises(ValueError):
        census(4, ["bipartite"])


def test_bad_sizes():
    with pytest.raises(ValueError):
        census(3)
    with pytest.raises(ValueError):
        census(8)


def test_loop_identity():
    rep = verify_loop_identity(4)
    assert rep.holds and rep.lhs == Fraction(3, 11) and rep.details["loop_weight"] == Fraction(35, 16)
    assert verify_loop_identity(2).lhs == Fraction(3, 5)
    assert verify_loop_identity(6).holds


def test_bridge_identity():
    rep = verify_bridge_identity(6, 1)
    assert rep.lhs == rep.rhs == Fraction(75, 8)
    assert verify_bridge_identity(4, 1).holds
    assert verify_bridge_identity(6, 2).lhs == 0 == verify_bridge_identity(6, 2).rhs
    with pytest.raises(ValueError):
        verify_bridge_identity(6, 0)


def test_subdivision_identities_on_corpus():
    corpus = identity_corpus()
    assert len(corpus) == 10
    for h in corpus:
        assert verify_subdivision_identities(h).holds


def test_report_is_json_ready():
    rep = census_report(4, ["connected"], identities=True)
    text = json.dumps(rep, sort_keys=True)
    assert '"total_weight": "' in text
    assert rep["identities"]["loop"]["holds"]
