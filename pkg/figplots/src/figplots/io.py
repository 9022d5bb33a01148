"""CSV loading and schema validation for the simulator's output files."""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

SCHEMAS = {
    "phase_diagram": ("p_zz", "inv_alpha", "L", "n_traj",
                      "o_ssb_mean", "o_ssb_sem", "o_spt_mean", "o_spt_sem",
                      "max_order", "s_half_mean", "s_half_sem",
                      "s_topo_mean", "s_topo_sem"),
    "purification": ("p_zz", "alpha", "L", "traj", "step", "S"),
    "correlations": ("p_zz", "alpha", "L", "r",
                     "c_zz_mean", "c_zz_sem", "c_spt_mean", "c_spt_sem"),
    "edge_probe": ("p_zz", "alpha", "L", "p_b", "m_b_mean", "m_b_sem"),
    "scaling": ("p_zz", "alpha", "L",
                "s_half_mean", "s_half_sem", "s_half_normalized"),
}


class SchemaError(ValueError):
    """A CSV does not carry the columns the figure kind requires."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input CSVs, figure kind, output image, options."""

    kind: str
    csv_paths: tuple[str, ...]
    out_path: str
    options: dict = field(default_factory=dict)


def load_table(path: str, schema: str) -> dict[str, np.ndarray]:
    """Read a CSV into column arrays, validating the declared schema."""
    required = SCHEMAS[schema]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(
                    f"{path}: missing column {column!r} required by the "
                    f"{schema} schema")
        rows = list(reader)
    table = {}
    for column in header:
        values = [row[column] for row in rows]
        try:
            table[column] = np.array([float(v) for v in values])
        except ValueError:
            table[column] = np.array(values)
    return table


def load_sidecar(csv_path: str) -> dict:
    """The JSON sidecar written next to every sweep CSV, or {}."""
    root, _ = os.path.splitext(csv_path)
    sidecar = root + ".json"
    if not os.path.exists(sidecar):
        return {}
    with open(sidecar) as fh:
        return json.load(fh)


def group_by(table: dict[str, np.ndarray], keys: tuple[str, ...]):
    """Yield (key values, row mask) for each distinct key combination."""
    columns = [table[k] for k in keys]
    seen = []
    for i in range(len(columns[0])):
        combo = tuple(col[i] for col in columns)
        if combo not in seen:
            seen.append(combo)
    for combo in seen:
        mask = np.ones(len(columns[0]), bool)
        for col, value in zip(columns, combo):
            mask &= col == value
        yield combo, mask
