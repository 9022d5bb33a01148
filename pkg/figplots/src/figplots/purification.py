"""Purification curves: trajectory-averaged full-system entropy vs time."""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, group_by, load_table


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "purification")
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for (p_zz, alpha, L), mask in group_by(table, ("p_zz", "alpha", "L")):
        steps = np.unique(table["step"][mask])
        means = [table["S"][mask][table["step"][mask] == s].mean()
                 for s in steps]
        ax.plot(steps, means, marker=".",
                label=rf"$p_{{ZZ}}={p_zz:g},\ \alpha={alpha:g},\ L={L:g}$")
    ax.set_xscale("symlog", linthresh=1)
    ax.set_xlabel("steps")
    ax.set_ylabel("S (bits)")
    ax.legend(fontsize=8)
    ax.set_title(spec.options.get("title", "purification dynamics"))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("purification"))
