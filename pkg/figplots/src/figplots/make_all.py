"""Driver: render every figure whose canonical CSV exists in a directory."""
from __future__ import annotations

import os

from . import correlations, edge_response, heatmap, purification, scaling, size_scan, stopo
from .io import FigureSpec

# canonical CSV name -> (figure kind label, renderer, options)
CATALOG = {
    "phase_diagram.csv": ("heatmap", heatmap.render, {}),
    "ee_map.csv": ("heatmap", heatmap.render, {"value": "s_half_mean"}),
    "purification.csv": ("purification", purification.render, {}),
    "edge_probe.csv": ("edge-response", edge_response.render, {}),
    "scaling.csv": ("scaling", scaling.render, {}),
    "correlations.csv": ("correlations", correlations.render, {}),
    "stopo.csv": ("stopo", stopo.render, {}),
    "size_scan.csv": ("size-scan", size_scan.render, {}),
}


def make_all(input_dir: str, out_dir: str, fmt: str = "png") -> list[str]:
    """Render every figure with an input present; returns written paths."""
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for csv_name, (kind, renderer, options) in CATALOG.items():
        path = os.path.join(input_dir, csv_name)
        if not os.path.exists(path):
            continue
        out = os.path.join(out_dir, csv_name.replace(".csv", f".{fmt}"))
        fig = renderer(FigureSpec(kind=kind, csv_paths=(path,), out_path=out,
                                  options=dict(options)))
        plt.close(fig)
        written.append(out)
    return written


if __name__ == "__main__":  # pragma: no cover
    from .cli import run_kind
    raise SystemExit(run_kind("make-all"))
