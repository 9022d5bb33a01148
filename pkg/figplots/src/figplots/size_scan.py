"""Finite-size panels: an order parameter vs L, one panel per p_zz."""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, SchemaError, group_by, load_table


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "phase_diagram")
    value_col = spec.options.get("value", "o_spt_mean")
    if value_col not in table:
        raise SchemaError(f"{spec.csv_paths[0]}: missing column {value_col!r} "
                          "requested for the size scan")
    sem_col = value_col.replace("_mean", "_sem")
    panels = sorted(set(table["p_zz"]))
    fig, axes = plt.subplots(1, len(panels),
                             figsize=(3.0 * len(panels), 3.2),
                             sharey=True, squeeze=False)
    for ax, p_zz in zip(axes[0], panels):
        sel = table["p_zz"] == p_zz
        sub = {k: v[sel] for k, v in table.items()}
        for (inv_alpha,), mask in group_by(sub, ("inv_alpha",)):
            order = np.argsort(sub["L"][mask])
            yerr = sub[sem_col][mask][order] if sem_col in sub else None
            ax.errorbar(sub["L"][mask][order], sub[value_col][mask][order],
                        yerr=yerr, marker="o", capsize=2,
                        label=rf"$\alpha={1 / inv_alpha:g}$")
        ax.set_xscale("log")
        ax.set_xlabel(r"$L$")
        ax.set_title(rf"$p_{{ZZ}}={p_zz:g}$")
    axes[0][0].set_ylabel(value_col)
    axes[0][0].legend(fontsize=7)
    fig.suptitle(spec.options.get("title", ""))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("size-scan"))
