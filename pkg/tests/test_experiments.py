from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from plancore.corelab import necklace
from plancore.experiments import (CorePoint, RegimeSpec, component_circumference, fit_exponent, kernel_scale,
                                  load_config, planar_sample_stats, run_config, run_core_scaling,
                                  run_planar_scaling, tool_version)
from plancore.multigraph import Multigraph

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
E = Multigraph.from_edges


def test_fit_exact_power_law():
    pts = [(n, 3 * n ** (1 / 3)) for n in (10, 20, 40, 80)]
    fit = fit_exponent(pts)
    assert fit.slope == pytest.approx(1 / 3, abs=1e-12)
    assert fit.stderr == pytest.approx(0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3))


def test_fit_constant_data():
    assert fit_exponent([(n, 5.0) for n in (1, 2, 4)]).slope == pytest.approx(0, abs=1e-12)


def test_fit_noisy_power_law():
    rng = np.random.default_rng(7)
    ns = [100, 200, 400, 800, 1600, 3200]
    pts = [(n, n ** (1 / 3) * (1 + 0.1 * rng.standard_normal())) for n in ns]
    assert abs(fit_exponent(pts).slope - 1 / 3) <= 0.1


def test_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        fit_exponent([(1, 1), (2, 2)])
    with pytest.raises(ValueError):
        fit_exponent([(1, 1), (2, 0), (3, 1)])


def test_regime_spec():
    r = RegimeSpec("critical", None, (100,), 1, 0)
    assert r.m(100) == 50 and r.m(101) == 50
    sup = RegimeSpec("supercritical", 0.8, (100,), 1, 0)
    assert sup.m(100) == math.floor(50 + 100 ** 0.8)
    assert RegimeSpec("subcritical", 0.8, (100,), 1, 0).m(100) == math.floor(50 - 100 ** 0.8)
    with pytest.raises(ValueError):
        RegimeSpec("supercritical", 0.5, (100,), 1, 0)
    with pytest.raises(ValueError):
        RegimeSpec("weird", None, (100,), 1, 0)
    with pytest.raises(ValueError):
        RegimeSpec("critical", None, (), 1, 0)


def test_component_circumference():
    assert component_circumference(E(4, [(1, 2), (2, 3), (3, 1), (3, 4)]), 40) == 3
    assert component_circumference(E(3, [(1, 2), (2, 3)]), 40) is None
    k4 = E(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    assert component_circumference(k4, 40) == 4


def test_planar_sample_stats():
    g = E(9, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (6, 7), (7, 8), (8, 6), (8, 9)])
    st = planar_sample_stats(g)
    assert st["l1_vertices"] == 5 and st["l1_tree"] == 0
    assert st["l1_girth"] == 3 and st["l1_circumference"] == 3
    assert st["l1_core_vertices"] == 3 and st["l1_core_bound_ok"] == 1
    assert st["rest_circumference"] == 3 and st["rest_girth"] == 3
    tree = planar_sample_stats(E(4, [(1, 2), (2, 3), (3, 4)]))
    assert tree["l1_tree"] == 1 and "l1_girth" not in tree


def test_kernel_scales():
    K = necklace(100)
    assert kernel_scale("k/N^2", K, 90_000, "girth") == pytest.approx(1.0)
    assert kernel_scale("k/N*lnL", K, 300, "maxloop") == pytest.approx(math.log(100))
    with pytest.raises(ValueError):
        kernel_scale("nope", K, 1, "girth")


def test_core_scaling_reports_are_reproducible():
    grid = [CorePoint(5, 1000), CorePoint(5, 4000), CorePoint(5, 16000)]
    a = run_core_scaling("necklace", ["girth", "maxloop"], grid, 30, 4)
    b = run_core_scaling("necklace", ["girth", "maxloop"], grid, 30, 4)
    assert a.csv_text() == b.csv_text()
    assert a.json_text() == b.json_text()
    assert a.csv_text().splitlines()[0] == "n,m,seed,trial,stat,value"
    assert len(a.rows) == 3 * 30 * 2
    summary = json.loads(a.json_text())
    assert summary["tool_version"] == tool_version()
    assert set(summary["fits"]) == {"girth", "maxloop"}


def test_core_girth_flat_at_fixed_ratio():
    # k = 20 N^2 keeps the girth scale constant, so the slope against N is near 0
    grid = [CorePoint(L, 20 * (3 * L) ** 2) for L in (25, 50, 100, 200)]
    rep = run_core_scaling("necklace", "girth", grid, 60, 5, fit_against="N",
                           windows=[{"kind": "slope", "stat": "girth", "target": 0.0, "tol": 0.3}])
    assert rep.passed, rep.summary["windows"]


def test_planar_scaling_subcritical_trees():
    regime = RegimeSpec("subcritical", 0.8, (100, 200, 400), 100, 3)
    rep = run_planar_scaling(regime, ["l1_vertices"],
                             windows=[{"kind": "min_tree_fraction_at_largest_n", "value": 0.9}])
    assert rep.passed, rep.summary["windows"]
    assert rep.summary["regime"]["beta"] == 0.8


def test_planar_scaling_reproducible_and_abort():
    regime = RegimeSpec("critical", None, (40, 60, 80), 20, 9)
    a = run_planar_scaling(regime, ["l1_vertices"])
    b = run_planar_scaling(regime, ["l1_vertices"])
    assert a.csv_text() == b.csv_text() and a.json_text() == b.json_text()
    starving = RegimeSpec("supercritical", 0.95, (60,), 5, 1)
    rep = run_planar_scaling(starving, ["l1_vertices"], max_tries=2,
                             windows=[{"kind": "acceptance", "min": 0.0}])
    assert rep.summary["aborted"] is not None and not rep.passed


def test_configs_parse():
    for p in sorted(CONFIGS.glob("*.toml")):
        cfg = load_config(p)
        assert cfg["experiment"] in ("core", "planar")


def test_run_config_json(tmp_path):
    cfg = {"experiment": "core", "family": "bridge-chain", "stats": ["block_1"], "trials": 20, "seed": 1,
           "grid": [{"size": 2, "k": 20 * 22 ** 2}],
           "windows": [{"kind": "trial_ratio", "stat": "block_1", "scale": "k*bl/v", "lo": 0.5, "hi": 2.0,
                        "min_fraction": 0.9}]}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    rep = run_config(load_config(p))
    assert rep.passed
    with pytest.raises(ValueError):
        run_config({"experiment": "nope"})
