"""Static SVG figures of simulated or exact fields."""
from __future__ import annotations

from pathlib import Path

import numpy as np


def plot_fields(snapshots, x, out_dir, prefix="", n_lines=6):
    """One SVG per field: profiles at a few times plus an x-t heatmap.

    Returns the list of written paths (always two: U and V).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "rdsym"

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    times = np.array([s.t for s in snapshots])
    picks = np.unique(np.linspace(0, len(snapshots) - 1, min(n_lines, len(snapshots))).astype(int))
    paths = []
    for name in ("U", "V"):
        data = np.array([getattr(s, name) for s in snapshots])
        fig, (ax_l, ax_h) = plt.subplots(1, 2, figsize=(10, 4))
        for i in picks:
            ax_l.plot(x, data[i], label=f"t={times[i]:.4g}")
        ax_l.set_xlabel("x")
        ax_l.set_ylabel(name)
        ax_l.legend(fontsize="small")
        extent = [x[0], x[-1], times[0], times[-1] if times[-1] > times[0] else times[0] + 1]
        im = ax_h.imshow(data, origin="lower", aspect="auto", extent=extent)
        ax_h.set_xlabel("x")
        ax_h.set_ylabel("t")
        fig.colorbar(im, ax=ax_h, label=name)
        fig.tight_layout()
        path = out_dir / f"{prefix}{name}.svg"
        # fixed hashsalt and no date keep the SVG byte-stable between runs
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths
