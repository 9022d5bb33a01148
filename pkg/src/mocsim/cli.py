"""Command-line front end: one subcommand per experiment.

Subcommands write the CSV schemas of :mod:`mocsim.ensemble` plus a JSON
sidecar that reproduces the run exactly.  Grids are given as ``min:max:count``
(inclusive, linear), comma lists, or single values; ``--inv-alpha`` expresses
the measurement-range axis as 1/alpha.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from . import __version__, ensemble
from .observables import fit_power_law
from .oracle import run_equivalence_suite


def parse_float_grid(text: str) -> tuple[float, ...]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be min:max:count, got {text!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be at least 1")
        if count == 1:
            return (lo,)
        step = (hi - lo) / (count - 1)
        return tuple(lo + i * step for i in range(count))
    return tuple(float(v) for v in text.split(","))


def parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def parse_window(text: str) -> tuple[float, float]:
    lo, hi = text.split(":")
    return float(lo), float(hi)


def _read_config(path: str) -> dict[str, str]:
    """Flat key-value config mirroring flag names (``p-zz = 0:1:5``)."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip().lstrip("-")] = value.strip()
    return values


_GRID_COMMANDS = {
    # command -> (sweep kind, flags beyond the common set)
    "phase-diagram": ("phase_diagram", ()),
    "ee-map": ("phase_diagram", ()),
    "stopo": ("phase_diagram", ()),
    "size-scan": ("phase_diagram", ()),
    "ee-scaling": ("scaling", ()),
    "purify": ("purification", ("sample-times",)),
    "edge-probe": ("edge_probe", ("p-b",)),
    "correlations": ("correlations", ("r-max", "fit", "fit-window")),
}

_DEFAULTS = {
    "traj": "1000",
    "steps-mult": "4",
    "seed": "0",
    "p-b": "0",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mocsim",
        description="Long-range measurement-only circuit experiments")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, (kind, extra) in _GRID_COMMANDS.items():
        p = sub.add_parser(name, help=f"{kind} sweep")
        p.add_argument("--L", help="chain length(s), comma separated")
        p.add_argument("--p-zz", dest="p_zz", help="two-qubit measurement probability grid")
        p.add_argument("--alpha", help="power-law exponent grid")
        p.add_argument("--inv-alpha", dest="inv_alpha", help="grid over 1/alpha")
        p.add_argument("--traj", help="trajectories per grid point")
        p.add_argument("--steps-mult", dest="steps_mult",
                       help="step budget multiplier: steps = mult * L^2")
        p.add_argument("--seed", help="base seed")
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--threads", help="worker processes (default $MOCSIM_THREADS or 1)")
        p.add_argument("--config", help="key-value config file; flags win")
        p.add_argument("--center-noop", dest="center_noop", action="store_true",
                       default=None,
                       help="sample cluster centers over all sites, skipping edges")
        if "p-b" in extra:
            p.add_argument("--p-b", dest="p_b", help="boundary probe probability grid")
        if "sample-times" in extra:
            p.add_argument("--sample-times", dest="sample_times",
                           help="comma-separated step indices to record")
        if "r-max" in extra:
            p.add_argument("--r-max", dest="r_max", help="largest correlation distance")
            p.add_argument("--fit", action="store_true", default=None,
                           help="print power-law fits per grid point")
            p.add_argument("--fit-window", dest="fit_window",
                           help="fit window as rmin:rmax (default 4:L/4)")

    oc = sub.add_parser("oracle-check",
                        help="randomized stabilizer/dense equivalence suite")
    oc.add_argument("--n", type=int, default=8, help="qubit count (<= 12)")
    oc.add_argument("--cases", type=int, default=500)
    oc.add_argument("--seq-len", dest="seq_len", type=int, default=200)
    oc.add_argument("--seed", type=int, default=0)
    return parser


def _merged(args: argparse.Namespace, key: str) -> Optional[str]:
    """Flag value, else config value, else built-in default."""
    attr = key.replace("-", "_")
    value = getattr(args, attr, None)
    if value is not None:
        return value if not isinstance(value, bool) else value
    config = getattr(args, "_config_values", {})
    if key in config:
        return config[key]
    return _DEFAULTS.get(key)


def _require(value: Optional[str], flag: str) -> str:
    if value is None:
        raise ValueError(f"missing required flag --{flag}")
    return value


def _run_grid_command(name: str, args: argparse.Namespace) -> int:
    kind, _ = _GRID_COMMANDS[name]
    if args.config:
        args._config_values = _read_config(args.config)
    else:
        args._config_values = {}

    L_values = parse_int_list(_require(_merged(args, "L"), "L"))
    p_zz = parse_float_grid(_require(_merged(args, "p-zz"), "p-zz"))
    alpha_text = _merged(args, "alpha")
    inv_text = _merged(args, "inv-alpha")
    if alpha_text is not None and inv_text is not None:
        raise ValueError("give either --alpha or --inv-alpha, not both")
    if alpha_text is not None:
        alpha = parse_float_grid(alpha_text)
    elif inv_text is not None:
        inv = parse_float_grid(inv_text)
        if any(v <= 0 for v in inv):
            raise ValueError("1/alpha values must be positive")
        alpha = tuple(1.0 / v for v in inv)
    else:
        raise ValueError("missing required flag --alpha (or --inv-alpha)")

    p_b = parse_float_grid(_merged(args, "p-b"))
    sample_times = None
    if getattr(args, "sample_times", None) or "sample-times" in args._config_values:
        sample_times = parse_int_list(_merged(args, "sample-times"))
    r_max = None
    if getattr(args, "r_max", None) or "r-max" in args._config_values:
        r_max = int(_merged(args, "r-max"))

    spec = ensemble.SweepSpec(
        kind=kind,
        L_values=L_values,
        p_zz_values=p_zz,
        alpha_values=alpha,
        p_b_values=p_b,
        trajectories=int(_merged(args, "traj")),
        steps_mult=int(_merged(args, "steps-mult")),
        base_seed=int(_merged(args, "seed")),
        r_max=r_max,
        sample_times=sample_times,
        center_noop=bool(_merged(args, "center-noop") or False),
    )
    threads_text = _merged(args, "threads") or os.environ.get("MOCSIM_THREADS", "1")
    threads = int(threads_text)
    out = _require(_merged(args, "out"), "out")

    columns, rows = ensemble.run_sweep(spec, threads=threads)
    fits = None
    if kind == "correlations" and _merged(args, "fit"):
        fits = _correlation_fits(spec, rows, args)
    sidecar = ensemble.write_outputs(out, spec, columns, rows, fits=fits)
    print(f"wrote {len(rows)} rows to {out} (sidecar {sidecar})", file=sys.stderr)
    return 0


def _correlation_fits(spec, rows, args) -> list[dict]:
    """Power-law fits per grid point; printed and stored in the sidecar."""
    window_text = getattr(args, "fit_window", None) or \
        args._config_values.get("fit-window")
    fits = []
    for L in spec.L_values:
        window = parse_window(window_text) if window_text else (4.0, L / 4)
        for a in spec.alpha_values:
            for p in spec.p_zz_values:
                sel = [r for r in rows
                       if r["L"] == L and r["alpha"] == a and r["p_zz"] == p]
                for cname in ("c_zz", "c_spt"):
                    pts = [(r["r"], r[f"{cname}_mean"]) for r in sel]
                    fit = fit_power_law(pts, window=window)
                    if fit is None:
                        print(f"fit L={L} alpha={a} p_zz={p} {cname}: "
                              "too few positive points")
                        continue
                    print(f"fit L={L} alpha={a} p_zz={p} {cname}: "
                          f"Delta={fit.exponent:.4f} A={fit.amplitude:.4f} "
                          f"rms={fit.rms_residual:.4f}")
                    fits.append({"L": L, "alpha": a, "p_zz": p,
                                 "observable": cname,
                                 "amplitude": fit.amplitude,
                                 "exponent": fit.exponent,
                                 "rms_residual": fit.rms_residual,
                                 "window": list(window)})
    return fits


def _run_oracle_check(args: argparse.Namespace) -> int:
    report = run_equivalence_suite(n=args.n, cases=args.cases,
                                   seq_len=args.seq_len, seed=args.seed)
    status = "passed" if report.passed else "FAILED"
    print(f"oracle-check: {report.cases - len(report.failed_cases)}"
          f"/{report.cases} sequences passed, {report.checks} checks, "
          f"{len(report.failures)} failures -> {status}")
    for failure in report.failures[:20]:
        print(f"  {failure}", file=sys.stderr)
    return 0 if report.passed else 1


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "oracle-check":
            return _run_oracle_check(args)
        return _run_grid_command(args.command, args)
    except (ValueError, OSError) as exc:
        print(f"mocsim: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
