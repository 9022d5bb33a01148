"""Entanglement scaling lines: normalized S_half vs L, log-log."""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, group_by, load_table


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "scaling")
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    for (alpha, p_zz), mask in group_by(table, ("alpha", "p_zz")):
        order = np.argsort(table["L"][mask])
        ax.plot(table["L"][mask][order],
                table["s_half_normalized"][mask][order],
                marker="s", label=rf"$\alpha={alpha:g}$")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"$L$")
    ax.set_ylabel(r"$S_{\rm half}(L)\,/\,S_{\rm half}(L_{\min})$")
    ax.legend(fontsize=8)
    ax.set_title(spec.options.get("title", "entanglement scaling"))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("scaling"))
