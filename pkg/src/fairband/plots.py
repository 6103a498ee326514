"""Figure output for experiment suites.

Two figures per experiment: mean cumulative regret and mean cumulative
unfair decisions over rounds, one line per policy with a 95 percent band
across seeds.  Rendering is optional; the CSV outputs carry the same data.
"""

from __future__ import annotations

import numpy as np

__all__ = ["render_figures"]

MAX_POINTS = 2000


def _downsample(n: int) -> np.ndarray:
    if n <= MAX_POINTS:
        return np.arange(n)
    idx = np.linspace(0, n - 1, MAX_POINTS).astype(np.int64)
    idx[-1] = n - 1
    return np.unique(idx)


def render_figures(suite, out_dir) -> list[str]:
    """Write the regret and unfairness figures; returns the paths written."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    panels = [
        ("regret", "cumulative regret", "regret_curve", "regret_halfwidth"),
        ("unfair", "cumulative unfair decisions", "unfair_curve", "unfair_halfwidth"),
    ]
    for tag, ylabel, curve_attr, half_attr in panels:
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        for summary in suite.summaries:
            curve = getattr(summary, curve_attr)
            half = getattr(summary, half_attr)
            idx = _downsample(curve.shape[0])
            t = idx + 1
            ax.plot(t, curve[idx], label=summary.policy, linewidth=1.4)
            if summary.runs > 1:
                ax.fill_between(
                    t, (curve - half)[idx], (curve + half)[idx], alpha=0.15, linewidth=0
                )
        ax.set_xlabel("round t")
        ax.set_ylabel(ylabel)
        ax.set_title(suite.config.experiment_id)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / f"{suite.config.experiment_id}_{tag}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(str(path))
    return written
