"""Phase-diagram heatmap: p_zz vs 1/alpha colored by an order column."""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, SchemaError, load_table


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "phase_diagram")
    value_col = spec.options.get("value", "max_order")
    if value_col not in table:
        raise SchemaError(f"{spec.csv_paths[0]}: missing column {value_col!r} "
                          "requested for the heatmap")
    L_values = np.unique(table["L"])
    L_sel = float(spec.options.get("L", L_values[-1]))
    mask = table["L"] == L_sel
    xs = np.unique(table["p_zz"][mask])
    ys = np.unique(table["inv_alpha"][mask])
    grid = np.full((len(ys), len(xs)), np.nan)
    for x, y, v in zip(table["p_zz"][mask], table["inv_alpha"][mask],
                       table[value_col][mask]):
        grid[np.searchsorted(ys, y), np.searchsorted(xs, x)] = v

    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=value_col)
    ax.set_xlabel(r"$p_{ZZ}$")
    ax.set_ylabel(r"$1/\alpha$")
    ax.set_title(spec.options.get("title", f"L = {L_sel:g}"))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("heatmap"))
