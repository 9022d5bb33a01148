"""Edge polarization versus boundary measurement probability."""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, group_by, load_table


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "edge_probe")
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for (p_zz, alpha, L), mask in group_by(table, ("p_zz", "alpha", "L")):
        order = np.argsort(table["p_b"][mask])
        ax.errorbar(table["p_b"][mask][order], table["m_b_mean"][mask][order],
                    yerr=table["m_b_sem"][mask][order], marker="o",
                    capsize=2,
                    label=rf"$p_{{ZZ}}={p_zz:g},\ \alpha={alpha:g},\ L={L:g}$")
    ax.set_xlabel(r"$p_b$")
    ax.set_ylabel(r"$M_b$")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    ax.set_title(spec.options.get("title", "edge response"))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("edge-response"))
