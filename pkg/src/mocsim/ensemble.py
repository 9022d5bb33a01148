"""Deterministic trajectory ensembles, parameter sweeps, and file output.

Every trajectory owns an independent counter-based RNG stream keyed by
(base seed, parameter point, trajectory index), so ensembles are exactly
reproducible for any worker count.  Integer-valued per-trajectory
observables are accumulated as exact integer sums; floating point enters
only in the final division, which makes sweep outputs bit-identical across
reruns and thread counts.
"""
from __future__ import annotations

import csv
import json
import math
import multiprocessing
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import __version__
from .circuit import CircuitParams, default_sample_times, run_purification, run_steady_state
from .observables import central_window

SWEEP_KINDS = ("phase_diagram", "purification", "correlations", "edge_probe",
               "scaling")

PHASE_DIAGRAM_COLUMNS = ("p_zz", "inv_alpha", "L", "n_traj",
                         "o_ssb_mean", "o_ssb_sem", "o_spt_mean", "o_spt_sem",
                         "max_order", "s_half_mean", "s_half_sem",
                         "s_topo_mean", "s_topo_sem")
PURIFICATION_COLUMNS = ("p_zz", "alpha", "L", "traj", "step", "S")
CORRELATION_COLUMNS = ("p_zz", "alpha", "L", "r",
                       "c_zz_mean", "c_zz_sem", "c_spt_mean", "c_spt_sem")
EDGE_PROBE_COLUMNS = ("p_zz", "alpha", "L", "p_b", "m_b_mean", "m_b_sem")
SCALING_COLUMNS = ("p_zz", "alpha", "L",
                   "s_half_mean", "s_half_sem", "s_half_normalized")

COLUMNS_BY_KIND = {
    "phase_diagram": PHASE_DIAGRAM_COLUMNS,
    "purification": PURIFICATION_COLUMNS,
    "correlations": CORRELATION_COLUMNS,
    "edge_probe": EDGE_PROBE_COLUMNS,
    "scaling": SCALING_COLUMNS,
}


@dataclass(frozen=True)
class SweepSpec:
    """Grid description for one sweep; serialized verbatim to the sidecar."""

    kind: str
    L_values: tuple[int, ...]
    p_zz_values: tuple[float, ...]
    alpha_values: tuple[float, ...]
    p_b_values: tuple[float, ...] = (0.0,)
    trajectories: int = 1000
    steps_mult: int = 4
    base_seed: int = 0
    r_max: Optional[int] = None
    sample_times: Optional[tuple[int, ...]] = None
    center_noop: bool = False

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        for name in ("L_values", "p_zz_values", "alpha_values", "p_b_values"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
        if self.trajectories < 1:
            raise ValueError("need at least one trajectory")
        if self.steps_mult < 1:
            raise ValueError("steps multiplier must be positive")
        if self.kind == "phase_diagram":
            for L in self.L_values:
                if L < 8 or L % 4:
                    raise ValueError(
                        "phase-diagram observables need L >= 8 and divisible by 4")

    def point_params(self, L: int, p_zz: float, alpha: float,
                     p_b: float = 0.0) -> CircuitParams:
        protocol = {"purification": "purification",
                    "edge_probe": "edge_probe"}.get(self.kind, "steady_state")
        return CircuitParams(L=L, p_zz=p_zz, alpha=alpha,
                             steps=self.steps_mult * L * L, p_b=p_b,
                             protocol=protocol, seed=self.base_seed,
                             center_noop=self.center_noop)


@dataclass
class PointStats:
    """Exact aggregates for one grid point."""

    params: CircuitParams
    count: int
    sums: dict = field(default_factory=dict)       # name -> (sum, sum_sq, denom)
    corr_sums: dict = field(default_factory=dict)  # name -> {r: (sum, sum_sq, denom)}

    def mean(self, name: str) -> float:
        s, _, den = self.sums[name]
        return s / (self.count * den)

    def sem(self, name: str) -> float:
        s, sq, den = self.sums[name]
        return _sem_from_sums(s, sq, self.count, den)

    def corr_mean(self, name: str, r: int) -> float:
        s, _, den = self.corr_sums[name][r]
        return s / (self.count * den)

    def corr_sem(self, name: str, r: int) -> float:
        s, sq, den = self.corr_sums[name][r]
        return _sem_from_sums(s, sq, self.count, den)


def _sem_from_sums(s: int, sq: int, n: int, denom: int) -> float:
    """Standard error of the mean from exact integer sums of v and v**2."""
    if n < 2:
        return 0.0
    num = n * sq - s * s  # exactly zero for deterministic observables
    if num == 0:
        return 0.0
    return math.sqrt(num / (n - 1)) / (denom * n)


def _czz_denom(L: int, r: int) -> int:
    lo, hi = central_window(L)
    return hi - r - lo + 1


def _cspt_denom(L: int, r: int) -> int:
    lo, hi = central_window(L)
    return hi - lo - r - 1


def _observables_for(kind: str) -> tuple[str, ...]:
    return {
        "phase_diagram": ("o_ssb", "o_spt", "s_half", "s_topo"),
        "edge_probe": ("m_b",),
        "scaling": ("s_half",),
        "correlations": (),
    }[kind]


def _sum_chunk(args) -> dict:
    """Worker: exact integer sums over one contiguous trajectory range."""
    params, lo, hi, observables, r_values = args
    sums = {name: [0, 0] for name in observables}
    corr = {name: {r: [0, 0] for r in r_values} for name in ("c_zz", "c_spt")} \
        if r_values else {}
    for traj in range(lo, hi):
        _, rec = run_steady_state(params.with_traj(traj),
                                  observables=observables,
                                  r_values=r_values or None)
        for name in observables:
            value = getattr(rec, name)
            v = int(value * 2) if name == "m_b" else int(value)
            sums[name][0] += v
            sums[name][1] += v * v
        for cname, table in corr.items():
            rec_map = getattr(rec, cname)
            denom_fn = _czz_denom if cname == "c_zz" else _cspt_denom
            for r, acc in table.items():
                num = int(rec_map[r] * denom_fn(params.L, r))
                acc[0] += num
                acc[1] += num * num
    return {"sums": sums, "corr": corr, "count": hi - lo}


def _purify_chunk(args) -> list[tuple]:
    params, lo, hi, sample_times = args
    rows = []
    for traj in range(lo, hi):
        series = run_purification(params.with_traj(traj),
                                  sample_times=sample_times)
        rows.extend((traj, step, s) for step, s in series)
    return rows


def _chunks(n_traj: int, threads: int) -> list[tuple[int, int]]:
    n_chunks = max(1, min(n_traj, threads * 4))
    size = math.ceil(n_traj / n_chunks)
    return [(lo, min(lo + size, n_traj)) for lo in range(0, n_traj, size)]


def _map_chunks(worker, jobs: list, threads: int) -> list:
    if threads <= 1 or len(jobs) <= 1:
        return [worker(job) for job in jobs]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
        return list(pool.map(worker, jobs))


def run_ensemble(params: CircuitParams, n_traj: int,
                 observables: Sequence[str],
                 r_values: Optional[Sequence[int]] = None,
                 threads: int = 1) -> PointStats:
    """Run n_traj independent trajectories at one point and aggregate.

    Aggregation accumulates integer sums in fixed trajectory order, so the
    result is bit-identical for any worker count.
    """
    observables = tuple(observables)
    r_values = tuple(r_values) if r_values else ()
    jobs = [(params, lo, hi, observables, r_values)
            for lo, hi in _chunks(n_traj, threads)]
    parts = _map_chunks(_sum_chunk, jobs, threads)
    stats = PointStats(params=params, count=n_traj)
    for name in observables:
        s = sum(p["sums"][name][0] for p in parts)
        sq = sum(p["sums"][name][1] for p in parts)
        stats.sums[name] = (s, sq, 2 if name == "m_b" else 1)
    if r_values:
        for cname, denom_fn in (("c_zz", _czz_denom), ("c_spt", _cspt_denom)):
            stats.corr_sums[cname] = {
                r: (sum(p["corr"][cname][r][0] for p in parts),
                    sum(p["corr"][cname][r][1] for p in parts),
                    denom_fn(params.L, r))
                for r in r_values}
    return stats


def _progress(i: int, total: int) -> None:
    if os.environ.get("MOCSIM_QUIET"):
        return
    print(f"\r  point {i}/{total}", end="" if i < total else "\n",
          file=sys.stderr, flush=True)


def run_phase_diagram(spec: SweepSpec, threads: int = 1) -> list[dict]:
    """Order parameters, S_half and S_topo over the (p_zz, 1/alpha, L) grid."""
    rows = []
    points = [(L, a, p) for L in spec.L_values for a in spec.alpha_values
              for p in spec.p_zz_values]
    for i, (L, alpha, p_zz) in enumerate(points, 1):
        stats = run_ensemble(spec.point_params(L, p_zz, alpha),
                             spec.trajectories,
                             _observables_for("phase_diagram"), threads=threads)
        row = {"p_zz": p_zz, "inv_alpha": 1.0 / alpha, "L": L,
               "n_traj": spec.trajectories}
        for name in ("o_ssb", "o_spt", "s_half", "s_topo"):
            row[f"{name}_mean"] = stats.mean(name)
            row[f"{name}_sem"] = stats.sem(name)
        row["max_order"] = max(row["o_ssb_mean"], row["o_spt_mean"])
        rows.append(row)
        _progress(i, len(points))
    return rows


def run_scaling(spec: SweepSpec, threads: int = 1) -> list[dict]:
    """S_half versus system size, normalized by the smallest-L value."""
    rows = []
    groups = [(a, p) for a in spec.alpha_values for p in spec.p_zz_values]
    L_min = min(spec.L_values)
    total = len(groups) * len(spec.L_values)
    i = 0
    for alpha, p_zz in groups:
        group_rows = []
        for L in sorted(spec.L_values):
            stats = run_ensemble(spec.point_params(L, p_zz, alpha),
                                 spec.trajectories, ("s_half",),
                                 threads=threads)
            group_rows.append({"p_zz": p_zz, "alpha": alpha, "L": L,
                               "s_half_mean": stats.mean("s_half"),
                               "s_half_sem": stats.sem("s_half")})
            i += 1
            _progress(i, total)
        base = next(r["s_half_mean"] for r in group_rows if r["L"] == L_min)
        for r in group_rows:
            r["s_half_normalized"] = r["s_half_mean"] / base if base else math.nan
        rows.extend(group_rows)
    return rows


def run_purification_sweep(spec: SweepSpec, threads: int = 1) -> list[dict]:
    """Per-trajectory entropy time series for every grid point."""
    rows = []
    points = [(L, a, p) for L in spec.L_values for a in spec.alpha_values
              for p in spec.p_zz_values]
    for i, (L, alpha, p_zz) in enumerate(points, 1):
        params = spec.point_params(L, p_zz, alpha)
        times = spec.sample_times or tuple(default_sample_times(params.steps))
        jobs = [(params, lo, hi, times)
                for lo, hi in _chunks(spec.trajectories, threads)]
        for part in _map_chunks(_purify_chunk, jobs, threads):
            rows.extend({"p_zz": p_zz, "alpha": alpha, "L": L,
                         "traj": traj, "step": step, "S": s}
                        for traj, step, s in part)
        _progress(i, len(points))
    return rows


def run_edge_probe_sweep(spec: SweepSpec, threads: int = 1) -> list[dict]:
    """Edge polarization versus boundary measurement probability."""
    rows = []
    points = [(L, a, p, pb) for L in spec.L_values for a in spec.alpha_values
              for p in spec.p_zz_values for pb in spec.p_b_values]
    for i, (L, alpha, p_zz, p_b) in enumerate(points, 1):
        stats = run_ensemble(spec.point_params(L, p_zz, alpha, p_b),
                             spec.trajectories, ("m_b",), threads=threads)
        rows.append({"p_zz": p_zz, "alpha": alpha, "L": L, "p_b": p_b,
                     "m_b_mean": stats.mean("m_b"),
                     "m_b_sem": stats.sem("m_b")})
        _progress(i, len(points))
    return rows


def run_correlations(spec: SweepSpec, threads: int = 1) -> list[dict]:
    """Ensemble-mean spin and string correlators versus distance."""
    rows = []
    points = [(L, a, p) for L in spec.L_values for a in spec.alpha_values
              for p in spec.p_zz_values]
    for i, (L, alpha, p_zz) in enumerate(points, 1):
        r_max = spec.r_max or L // 4
        if not 1 <= r_max <= L // 2 - 2:
            raise ValueError(f"r_max must lie in 1..{L // 2 - 2} for L={L}")
        r_values = range(1, r_max + 1)
        stats = run_ensemble(spec.point_params(L, p_zz, alpha),
                             spec.trajectories, (), r_values=r_values,
                             threads=threads)
        for r in r_values:
            rows.append({"p_zz": p_zz, "alpha": alpha, "L": L, "r": r,
                         "c_zz_mean": stats.corr_mean("c_zz", r),
                         "c_zz_sem": stats.corr_sem("c_zz", r),
                         "c_spt_mean": stats.corr_mean("c_spt", r),
                         "c_spt_sem": stats.corr_sem("c_spt", r)})
        _progress(i, len(points))
    return rows


_RUNNERS = {
    "phase_diagram": run_phase_diagram,
    "purification": run_purification_sweep,
    "correlations": run_correlations,
    "edge_probe": run_edge_probe_sweep,
    "scaling": run_scaling,
}


def run_sweep(spec: SweepSpec, threads: int = 1) -> tuple[tuple[str, ...], list[dict]]:
    """Dispatch a sweep; returns (column names, rows)."""
    rows = _RUNNERS[spec.kind](spec, threads=threads)
    return COLUMNS_BY_KIND[spec.kind], rows


def write_outputs(path: str, spec: SweepSpec, columns: Sequence[str],
                  rows: list[dict], fits: Optional[list[dict]] = None) -> str:
    """Write the CSV and its JSON sidecar; returns the sidecar path."""
    payload = {"spec": asdict(spec), "version": __version__,
               "base_seed": spec.base_seed,
               "csv": os.path.basename(path),
               "columns": list(columns)}
    if fits is not None:
        payload["fits"] = fits
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(columns))
            writer.writeheader()
            writer.writerows(rows)
        sidecar = sidecar_path(path)
        with open(sidecar, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write output {path!r}: {exc}") from exc
    return sidecar


def sidecar_path(csv_path: str) -> str:
    root, _ = os.path.splitext(csv_path)
    return root + ".json"


def spec_from_sidecar(path: str) -> SweepSpec:
    with open(path) as fh:
        payload = json.load(fh)
    raw = payload["spec"]
    kwargs = {}
    for key, value in raw.items():
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    return SweepSpec(**kwargs)


def rerun_from_sidecar(path: str, threads: int = 1):
    """Re-execute the sweep recorded in a sidecar; returns (columns, rows)."""
    return run_sweep(spec_from_sidecar(path), threads=threads)
