"""Log-log figures for scaling reports."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_fit(points: Sequence[tuple[float, float]], slope: float, intercept: float, path: Path,
             xlabel: str, ylabel: str, title: str = "") -> Path:
    """Scatter the medians on log-log axes with the fitted power law."""
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(xs, ys, "o", label="median")
    grid = np.geomspace(xs.min(), xs.max(), 50)
    ax.loglog(grid, np.exp(intercept) * grid ** slope, "-", label=f"slope {slope:.3f}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_report(summary: dict, out_dir: Path) -> list[Path]:
    """One figure per fitted statistic in a scaling summary."""
    written = []
    xlabel = "n"
    if summary.get("experiment") == "core":
        xlabel = "k" if summary.get("fit_against") == "k" else "N (kernel edges)"
    for stat, fit in sorted(summary.get("fits", {}).items()):
        path = out_dir / f"{stat}.png"
        written.append(plot_fit(fit["points"], fit["slope"], fit["intercept"], path, xlabel, f"median {stat}",
                                title=summary.get("family", summary.get("experiment", ""))))
    return written
