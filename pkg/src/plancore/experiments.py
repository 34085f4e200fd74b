"""Scaling experiments: regime grids, per-trial statistics, log-log fits and acceptance windows."""
from __future__ import annotations

import csv
import io
import json
import math
import subprocess
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
from scipy import stats as sps

from . import __version__
from .corelab import KernelFamilySpec, kernel_family, multicore_counts
from .decompose import (
    KernelTooLarge,
    circumference_via_kernel,
    core_block_sizes,
    core_kernel,
    from_kernel,
    girth_exact,
    girth_via_kernel,
    max_loop_cycle,
)
from .multigraph import Multigraph, components, induced
from .rng import derive_seed
from .sampler import SamplerExhausted, planar_rejection_sample

REGIMES = ("subcritical", "critical", "supercritical")


def tool_version() -> str:
    """Package version plus ``git describe`` of the source tree when available."""
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"], cwd=here,
                             capture_output=True, text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


# fits ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    stderr: float
    points: tuple[tuple[float, float], ...]


def fit_exponent(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares line through ``(log x, log y)``."""
    if len(points) < 3:
        raise ValueError("need at least three points")
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("fit needs strictly positive values")
    res = sps.linregress(np.log(xs), np.log(ys))
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    return FitResult(float(res.slope), float(res.intercept), stderr,
                     tuple((float(x), float(y)) for x, y in points))


# regimes -----------------------------------------------------------------------


@dataclass(frozen=True)
class RegimeSpec:
    """Edge count ``m(n) = floor(n/2 + s(n))``.

    ``s(n) = 0`` for the critical regime without ``beta``; otherwise
    ``s(n) = sign * n**beta`` with sign ``-1`` below and ``+1`` above criticality.
    """

    regime: str
    beta: float | None
    n_grid: tuple[int, ...]
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.regime == "critical":
            if self.beta is not None and self.beta > 2 / 3:
                raise ValueError("critical window needs beta <= 2/3")
        elif self.beta is None or not (2 / 3 < self.beta < 1):
            raise ValueError(f"{self.regime} regime needs beta in (2/3, 1)")
        if len(self.n_grid) == 0 or self.trials < 1:
            raise ValueError("need a non-empty n grid and at least one trial")

    def s(self, n: int) -> float:
        if self.beta is None:
            return 0.0
        sign = -1.0 if self.regime == "subcritical" else 1.0
        return sign * n ** self.beta

    def m(self, n: int) -> int:
        return math.floor(n / 2 + self.s(n))


# statistics of planar samples ----------------------------------------------------


def component_circumference(h: Multigraph, cap: int) -> int | None:
    """Longest cycle of a connected graph; ``None`` for trees."""
    if h.m < h.n:
        return None
    if h.m == h.n:
        # unicyclic: the 2-core is the cycle
        return h.n - _tree_part(h)
    return circumference_via_kernel(core_kernel(h), cap)


def _largest_first(g: Multigraph) -> list[list[int]]:
    comps = components(g)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def planar_sample_stats(g: Multigraph, cap: int = 40) -> dict[str, float]:
    """Cycle and size statistics of the largest component ``L1`` and of the rest ``R``."""
    comps = _largest_first(g)
    l1, labels = induced(g, comps[0])
    out: dict[str, float] = {"l1_vertices": float(l1.n), "l1_edges": float(l1.m)}
    cyclic = l1.m >= l1.n
    out["l1_tree"] = 0.0 if cyclic else 1.0
    if cyclic:
        out["l1_girth"] = float(girth_exact(l1))
        try:
            lam = component_circumference(l1, cap)
            out["l1_circumference"] = float(lam)
        except KernelTooLarge:
            out["l1_circumference_refused"] = 1.0
            lam = None
        d = core_kernel(l1)
        core_size = d.core.n if d.kernel.m else (l1.n - _tree_part(l1))
        out["l1_core_vertices"] = float(core_size)
        if lam is not None:
            out["l1_core_bound_ok"] = 1.0 if lam <= core_size else 0.0
    rest_circ = 0
    rest_girth = None
    for comp in comps[1:]:
        if len(comp) < 3:
            continue
        h, _ = induced(g, comp)
        if h.m < h.n:
            continue
        try:
            c = component_circumference(h, cap)
        except KernelTooLarge:
            out["rest_circumference_refused"] = 1.0
            continue
        rest_circ = max(rest_circ, c or 0)
        gi = girth_exact(h)
        if gi is not None and (rest_girth is None or gi < rest_girth):
            rest_girth = gi
    out["rest_circumference"] = float(rest_circ)
    if rest_girth is not None:
        out["rest_girth"] = float(rest_girth)
    return out


def _tree_part(h: Multigraph) -> int:
    """Number of vertices removed by iterated leaf stripping."""
    deg = list(h.degree_sequence())
    adj: list[list[int]] = [[] for _ in range(h.n + 1)]
    for u, v in h.pairs():
        adj[u].append(v)
        adj[v].append(u)
    dead = [False] * (h.n + 1)
    stack = [v for v in range(1, h.n + 1) if deg[v - 1] <= 1]
    removed = 0
    while stack:
        v = stack.pop()
        if dead[v]:
            continue
        dead[v] = True
        removed += 1
        for w in adj[v]:
            if not dead[w]:
                deg[w - 1] -= 1
                if deg[w - 1] <= 1:
                    stack.append(w)
    return removed


# reports ---------------------------------------------------------------------------


@dataclass
class Report:
    """Rows ``(n, m, seed, trial, stat, value)`` plus a JSON-ready summary."""

    rows: list[tuple[int, int, int, int, str, float]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "seed", "trial", "stat", "value"])
        for row in self.rows:
            w.writerow([row[0], row[1], row[2], row[3], row[4], repr(float(row[5]))])
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps(self.summary, indent=2, sort_keys=True) + "\n"

    @property
    def passed(self) -> bool:
        return all(w["passed"] for w in self.summary.get("windows", []))

    def write(self, out_dir: Path, stem: str = "report") -> tuple[Path, Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        p_csv = out_dir / f"{stem}.csv"
        p_json = out_dir / f"{stem}.json"
        p_csv.write_text(self.csv_text())
        p_json.write_text(self.json_text())
        return p_csv, p_json


def _median(values: Sequence[float]) -> float | None:
    return float(np.median(values)) if len(values) else None


def run_planar_scaling(regime: RegimeSpec, stats: Sequence[str] = ("l1_circumference",),
                       max_tries: int = 1000, windows: Sequence[dict] = (), cap: int = 40) -> Report:
    """Sample planar graphs by rejection over the n grid and summarise per-n medians.

    Sample ``i`` at size ``n`` uses seed ``derive_seed(seed, n, i)``. If the
    sampler starves, the run stops and the report carries the partial data
    with ``aborted`` set.
    """
    report = Report()
    per_n: list[dict[str, Any]] = []
    aborted = None
    for n in regime.n_grid:
        m = regime.m(n)
        tries = 0
        values: dict[str, list[float]] = {}
        accepted = 0
        for i in range(regime.trials):
            s_i = derive_seed(regime.seed, n, i)
            try:
                res = planar_rejection_sample(n, m, s_i, max_tries)
            except SamplerExhausted as exc:
                tries += exc.tries
                aborted = {"n": n, "trial": i, "tries": exc.tries}
                break
            tries += res.tries
            accepted += 1
            st = planar_sample_stats(res.graph, cap)
            for name in sorted(st):
                values.setdefault(name, []).append(st[name])
                report.rows.append((n, m, regime.seed, i, name, st[name]))
        entry: dict[str, Any] = {
            "n": n, "m": m, "accepted": accepted, "tries": tries,
            "acceptance": accepted / tries if tries else None,
            "tree_fraction": _mean(values.get("l1_tree", [])),
            "core_bound_violations": int(sum(1 for v in values.get("l1_core_bound_ok", []) if v == 0.0)),
            "medians": {name: _median(values.get(name, [])) for name in stats},
            "counts": {name: len(values.get(name, [])) for name in stats},
        }
        per_n.append(entry)
        if aborted:
            break
    fits = {}
    for name in stats:
        pts = [(e["n"], e["medians"][name]) for e in per_n if e["medians"].get(name)]
        if len(pts) >= 3 and all(p[1] > 0 for p in pts):
            fits[name] = asdict(fit_exponent(pts))
    report.summary = {
        "experiment": "planar",
        "tool_version": tool_version(),
        "regime": asdict(regime),
        "max_tries": max_tries,
        "stats": list(stats),
        "per_n": per_n,
        "fits": fits,
        "aborted": aborted,
    }
    report.summary["windows"] = [_evaluate_planar_window(w, report.summary) for w in windows]
    return report


def _mean(values: Sequence[float]) -> float | None:
    return float(np.mean(values)) if len(values) else None


def _evaluate_planar_window(w: dict, summary: dict) -> dict:
    kind = w["kind"]
    out = dict(w)
    if summary.get("aborted"):
        out.update(passed=False, observed="run aborted")
        return out
    if kind == "slope":
        fit = summary["fits"].get(w["stat"])
        obs = fit["slope"] if fit else None
        out.update(observed=obs, passed=obs is not None and abs(obs - w["target"]) <= w["tol"])
    elif kind == "tree_fraction":
        obs = [e["tree_fraction"] for e in summary["per_n"]]
        out.update(observed=obs, passed=all(v is not None and w["lo"] <= v <= w["hi"] for v in obs))
    elif kind == "acceptance":
        obs = [e["acceptance"] for e in summary["per_n"]]
        out.update(observed=obs, passed=all(v is not None and v >= w["min"] for v in obs))
    elif kind == "max_tree_fraction_at_largest_n" or kind == "min_tree_fraction_at_largest_n":
        obs = summary["per_n"][-1]["tree_fraction"]
        ok = obs is not None and (obs >= w["value"] if kind.startswith("min") else obs <= w["value"])
        out.update(observed=obs, passed=ok)
    elif kind == "core_bound":
        obs = sum(e["core_bound_violations"] for e in summary["per_n"])
        out.update(observed=obs, passed=obs == 0)
    else:
        raise ValueError(f"unknown window kind {kind!r}")
    return out


# core scaling ------------------------------------------------------------------------

CORE_STATS = ("girth", "maxloop", "circumference")


def _stat_function(stat: str) -> Callable[[Multigraph, np.ndarray], float]:
    if stat == "girth":
        return lambda K, c: girth_via_kernel(from_kernel(K, c))
    if stat == "maxloop":
        return lambda K, c: max_loop_cycle(from_kernel(K, c))
    if stat == "circumference":
        return lambda K, c: circumference_via_kernel(from_kernel(K, c))
    if stat.startswith("block_"):
        i = int(stat.split("_", 1)[1])
        return lambda K, c: _nth(core_block_sizes(K, c), i)
    raise ValueError(f"unknown statistic {stat!r}")


def _nth(sizes: list[int], i: int) -> int:
    return sizes[i - 1] if i <= len(sizes) else 0


def kernel_scale(name: str, K: Multigraph, k: int, stat: str) -> float:
    """Reference scale for ratio windows, by name."""
    N = K.m
    L = K.loop_count()
    if name == "k/N^2":
        return k / N ** 2
    if name == "k/N":
        return k / N
    if name == "k/N*lnL":
        return k / N * math.log(L)
    if name == "k/N*(1+lnL)":
        return k / N * (1 + math.log(L))
    if name == "k*bl/v":
        i = int(stat.split("_", 1)[1])
        return k * _nth(core_block_sizes(K, [0] * K.m), i) / K.n
    raise ValueError(f"unknown scale {name!r}")


@dataclass(frozen=True)
class CorePoint:
    size: int
    k: int


def run_core_scaling(family: str, stat: str | Sequence[str], grid: Sequence[CorePoint], trials: int, seed: int,
                     fit_against: str = "k", windows: Sequence[dict] = ()) -> Report:
    """Grow random cores from a kernel family over a grid of ``(size, k)`` points.

    CSV rows carry the core size: ``n = v(K) + k`` vertices and ``m = e(K) + k`` edges.

    Point ``j`` uses seed ``derive_seed(seed, j)`` and trial streams under it.
    ``fit_against`` picks the x axis of the log-log fit: ``k`` or ``N`` (kernel edges).
    """
    stats_list = [stat] if isinstance(stat, str) else list(stat)
    funcs = {s: _stat_function(s) for s in stats_list}
    if fit_against not in ("k", "N"):
        raise ValueError("fit_against must be 'k' or 'N'")
    if not grid:
        raise ValueError("empty grid")
    report = Report()
    points = []
    for j, pt in enumerate(grid):
        K = kernel_family(KernelFamilySpec(family, pt.size))
        s_j = derive_seed(seed, j)
        counts = multicore_counts(K, pt.k, trials, s_j)
        values: dict[str, list[float]] = {s: [] for s in stats_list}
        for t in range(trials):
            for s in stats_list:
                v = funcs[s](K, counts[t])
                values[s].append(float(v))
                report.rows.append((K.n + pt.k, K.m + pt.k, seed, t, s, float(v)))
        points.append({
            "size": pt.size, "N": K.m, "v_kernel": K.n, "loops": K.loop_count(), "k": pt.k,
            "medians": {s: _median(values[s]) for s in stats_list},
            "_values": values,
            "_kernel": K,
        })
    fits = {}
    for s in stats_list:
        xs = [(p["k"] if fit_against == "k" else p["N"]) for p in points]
        pts = [(x, p["medians"][s]) for x, p in zip(xs, points)]
        if len(set(xs)) >= 3 and all(y > 0 for _, y in pts):
            fits[s] = asdict(fit_exponent(pts))
    summary = {
        "experiment": "core",
        "tool_version": tool_version(),
        "family": family,
        "stats": stats_list,
        "grid": [asdict(p) for p in grid],
        "trials": trials,
        "seed": seed,
        "fit_against": fit_against,
        "points": [{k: v for k, v in p.items() if not k.startswith("_")} for p in points],
        "fits": fits,
    }
    summary["windows"] = [_evaluate_core_window(w, points, fits) for w in windows]
    report.summary = summary
    return report


def _evaluate_core_window(w: dict, points: list[dict], fits: dict) -> dict:
    kind = w["kind"]
    stat = w["stat"]
    out = dict(w)
    if kind == "slope":
        fit = fits.get(stat)
        obs = fit["slope"] if fit else None
        out.update(observed=obs, passed=obs is not None and abs(obs - w["target"]) <= w["tol"])
    elif kind == "median_ratio":
        obs = [p["medians"][stat] / kernel_scale(w["scale"], p["_kernel"], p["k"], stat) for p in points]
        out.update(observed=obs, passed=all(w["lo"] <= r <= w["hi"] for r in obs))
    elif kind == "trial_ratio":
        fracs = []
        for p in points:
            sc = kernel_scale(w["scale"], p["_kernel"], p["k"], stat)
            vals = np.array(p["_values"][stat]) / sc
            fracs.append(float(np.mean((vals >= w["lo"]) & (vals <= w["hi"]))))
        out.update(observed=fracs, passed=all(f >= w["min_fraction"] for f in fracs))
    else:
        raise ValueError(f"unknown window kind {kind!r}")
    return out


# configuration -----------------------------------------------------------------------


def load_config(path: Path) -> dict:
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return json.loads(text)
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    return tomllib.loads(text)


def run_config(cfg: dict) -> Report:
    """Dispatch a scaling configuration (``experiment = "core"`` or ``"planar"``)."""
    exp = cfg.get("experiment")
    windows = cfg.get("windows", [])
    if exp == "core":
        grid = [CorePoint(int(p["size"]), int(p["k"])) for p in cfg["grid"]]
        return run_core_scaling(cfg["family"], cfg.get("stats", cfg.get("stat", "girth")), grid,
                                int(cfg["trials"]), int(cfg["seed"]), cfg.get("fit_against", "k"), windows)
    if exp == "planar":
        regime = RegimeSpec(cfg["regime"], cfg.get("beta"), tuple(int(n) for n in cfg["n_grid"]),
                            int(cfg["trials"]), int(cfg["seed"]))
        return run_planar_scaling(regime, cfg.get("stats", ["l1_circumference"]),
                                  int(cfg.get("max_tries", 1000)), windows, int(cfg.get("cap", 40)))
    raise ValueError(f"unknown experiment {exp!r}")
