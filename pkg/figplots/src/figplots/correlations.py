"""String and spin correlation decay, log-log, with optional fit overlays.

Fit parameters are read from the ``fits`` entry of the CSV's JSON sidecar
(written by ``mocsim correlations --fit``) and drawn as dashed A r^-Delta
reference lines over their fit windows.
"""
from __future__ import annotations

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, group_by, load_sidecar, load_table


def _overlay_fits(ax, fits, observable, p_zz, alpha, L):
    for fit in fits:
        if (fit["observable"] == observable and fit["p_zz"] == p_zz
                and fit["alpha"] == alpha and fit["L"] == L):
            lo, hi = fit["window"]
            rs = np.geomspace(max(lo, 1e-9), hi, 32)
            ax.plot(rs, fit["amplitude"] * rs ** (-fit["exponent"]),
                    linestyle="--", color="black", linewidth=1,
                    label=rf"$\Delta={fit['exponent']:.2f}$")


def render(spec: FigureSpec):
    table = load_table(spec.csv_paths[0], "correlations")
    fits = load_sidecar(spec.csv_paths[0]).get("fits", [])
    fig, (ax_spt, ax_zz) = plt.subplots(1, 2, figsize=(8.4, 3.8), sharex=True)
    for (p_zz, alpha, L), mask in group_by(table, ("p_zz", "alpha", "L")):
        order = np.argsort(table["r"][mask])
        rs = table["r"][mask][order]
        label = rf"$p_{{ZZ}}={p_zz:g},\ \alpha={alpha:g}$"
        ax_spt.plot(rs, table["c_spt_mean"][mask][order], marker="o",
                    label=label)
        ax_zz.plot(rs, table["c_zz_mean"][mask][order], marker="o",
                   label=label)
        _overlay_fits(ax_spt, fits, "c_spt", p_zz, alpha, L)
        _overlay_fits(ax_zz, fits, "c_zz", p_zz, alpha, L)
    for ax, title in ((ax_spt, r"$C_{\rm SPT}(r)$"), (ax_zz, r"$C_{ZZ}(r)$")):
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(r"$r$")
        ax.set_title(title)
        ax.legend(fontsize=7)
    fig.suptitle(spec.options.get("title", ""))
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("correlations"))
