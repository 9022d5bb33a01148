"""Topological entropy curves versus p_zz for each measurement range."""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, group_by, load_table


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "phase_diagram")
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for (inv_alpha, L), mask in group_by(table, ("inv_alpha", "L")):
        order = np.argsort(table["p_zz"][mask])
        ax.errorbar(table["p_zz"][mask][order],
                    table["s_topo_mean"][mask][order],
                    yerr=table["s_topo_sem"][mask][order], marker="o",
                    capsize=2,
                    label=rf"$\alpha={1 / inv_alpha:g},\ L={L:g}$")
    ax.set_xlabel(r"$p_{ZZ}$")
    ax.set_ylabel(r"$S_{\rm topo}$ (bits)")
    ax.legend(fontsize=8)
    ax.set_title(spec.options.get("title", "topological entropy"))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("stopo"))
