"""Scalar and spatial diagnostics evaluated on a stabilizer state.

Per-trajectory values are exact: expectations lie in {-1, 0, +1}, entropies
are integer bits, and position-averaged correlators are rationals.  Phase
diagnostics take the absolute value per trajectory before any ensemble
averaging happens downstream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .pauli import (build_edge_left, build_edge_right, build_string_op,
                    build_zz, single_site)
from .stabilizer import StabilizerState

DEFAULT_SCALARS = ("o_ssb", "o_spt", "s_half", "s_topo")


def order_parameter_sites(L: int) -> tuple[int, int]:
    """Endpoints a distance ~L/4 from each edge: a = ceil(L/4), b = L+1-a."""
    if L < 8:
        raise ValueError("order parameters need L >= 8")
    a = math.ceil(L / 4)
    return a, L + 1 - a


def central_window(L: int) -> tuple[int, int]:
    """The middle half of the chain, [ceil(L/4), floor(3L/4)]."""
    return math.ceil(L / 4), (3 * L) // 4


def o_ssb(state: StabilizerState, a: Optional[int] = None,
          b: Optional[int] = None) -> int:
    """Long-range Ising order: |<Z_a Z_b>| with defaults from L/4 placement."""
    if a is None or b is None:
        a, b = order_parameter_sites(state.n)
    return abs(state.expectation(build_zz(a, b, state.n)))


def o_spt(state: StabilizerState, a: Optional[int] = None,
          b: Optional[int] = None) -> int:
    """String order: absolute expectation of the nonlocal string operator."""
    if a is None or b is None:
        a, b = order_parameter_sites(state.n)
    return abs(state.expectation(build_string_op(a, b, state.n)))


def _czz_at(state: StabilizerState, i: int, r: int) -> int:
    """|<Z_i Z_{i+r}> - <Z_i><Z_{i+r}>| for one reference site."""
    n = state.n
    zi = state.expectation(single_site("Z", i, n))
    zj = state.expectation(single_site("Z", i + r, n))
    zz = state.expectation(build_zz(i, i + r, n))
    return abs(zz - zi * zj)


def _cspt_at(state: StabilizerState, i: int, r: int) -> int:
    """String correlation between endpoints i and i+r."""
    return abs(state.expectation(build_string_op(i, i + r, state.n)))


def c_zz(state: StabilizerState, r: int) -> Fraction:
    """Connected spin-spin correlation at distance r, averaged over all
    reference sites whose endpoints lie in the central window."""
    L = state.n
    if not 1 <= r <= L // 2:
        raise ValueError(f"r must lie in 1..{L // 2}")
    lo, hi = central_window(L)
    refs = range(lo, hi - r + 1)
    if not len(refs):
        raise ValueError(f"no valid reference sites for r={r} at L={L}")
    return Fraction(sum(_czz_at(state, i, r) for i in refs), len(refs))


def c_spt(state: StabilizerState, r: int) -> Fraction:
    """String correlation at distance r; the padding sites i-1 and i+r+1
    must also lie in the central window."""
    L = state.n
    if not 1 <= r <= L // 2:
        raise ValueError(f"r must lie in 1..{L // 2}")
    lo, hi = central_window(L)
    refs = range(lo + 1, hi - r)
    if not len(refs):
        raise ValueError(f"no valid reference sites for r={r} at L={L}")
    return Fraction(sum(_cspt_at(state, i, r) for i in refs), len(refs))


def s_half(state: StabilizerState) -> int:
    """Entanglement entropy of the left half chain in bits."""
    return state.entropy_region(range(1, state.n // 2 + 1))


def s_topo(state: StabilizerState) -> int:
    """Generalized topological entropy S_AB + S_BC - S_B - S_ABC.

    The chain is split into four equal quarters; A and B are the two left
    quarters, C is the rightmost quarter and the remaining quarter is traced
    out.  This end-to-end conditional mutual information is 2 bits on the
    cluster steady state and 0 on the symmetry-broken one.
    """
    L = state.n
    if L % 4:
        raise ValueError("topological entropy needs L divisible by 4")
    q = L // 4
    a = list(range(1, q + 1))
    b = list(range(q + 1, 2 * q + 1))
    c = list(range(3 * q + 1, 4 * q + 1))
    s = state.entropy_region
    return s(a + b) + s(b + c) - s(b) - s(a + b + c)


def m_b(state: StabilizerState) -> Fraction:
    """Edge polarization (|<X_1 Z_2>| + |<Z_{L-1} X_L>|) / 2."""
    left = abs(state.expectation(build_edge_left(state.n)))
    right = abs(state.expectation(build_edge_right(state.n)))
    return Fraction(left + right, 2)


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of C(r) = amplitude * r**(-exponent) in log-log."""

    amplitude: float
    exponent: float
    rms_residual: float
    n_points: int
    n_excluded: int


def fit_power_law(points: Sequence[tuple[float, float]],
                  window: Optional[tuple[float, float]] = None
                  ) -> Optional[PowerLawFit]:
    """Fit a power law to (r, value) pairs inside ``window``.

    Zero (or negative) values are excluded and counted; fewer than three
    usable points returns None.
    """
    kept = []
    excluded = 0
    for r, v in points:
        if window is not None and not window[0] <= r <= window[1]:
            continue
        if v > 0:
            kept.append((r, v))
        else:
            excluded += 1
    if len(kept) < 3:
        return None
    logr = np.log([r for r, _ in kept])
    logv = np.log([v for _, v in kept])
    slope, intercept = np.polyfit(logr, logv, 1)
    resid = logv - (slope * logr + intercept)
    return PowerLawFit(amplitude=float(np.exp(intercept)),
                       exponent=float(-slope),
                       rms_residual=float(np.sqrt(np.mean(resid ** 2))),
                       n_points=len(kept), n_excluded=excluded)


@dataclass(frozen=True)
class TrajectoryRecord:
    """Per-trajectory observable values (exact integers / rationals)."""

    L: int
    p_zz: float
    alpha: float
    p_b: float
    traj: int
    o_ssb: Optional[int] = None
    o_spt: Optional[int] = None
    s_half: Optional[int] = None
    s_topo: Optional[int] = None
    m_b: Optional[Fraction] = None
    c_zz: Optional[dict[int, Fraction]] = None
    c_spt: Optional[dict[int, Fraction]] = None


def evaluate(state: StabilizerState, params,
             observables: Optional[Sequence[str]] = None,
             r_values: Optional[Sequence[int]] = None) -> TrajectoryRecord:
    """Evaluate the requested diagnostics on a final state.

    ``observables=None`` selects the scalar set appropriate to the protocol
    (edge probes report m_b; s_topo only when L is divisible by 4).
    """
    if observables is None:
        observables = [name for name in DEFAULT_SCALARS
                       if name != "s_topo" or state.n % 4 == 0]
        if params.protocol == "edge_probe":
            observables = list(observables) + ["m_b"]
    values: dict = {}
    known = {"o_ssb": o_ssb, "o_spt": o_spt, "s_half": s_half,
             "s_topo": s_topo, "m_b": m_b}
    for name in observables:
        if name not in known:
            raise ValueError(f"unknown observable {name!r}")
        values[name] = known[name](state)
    if r_values is not None:
        values["c_zz"] = {int(r): c_zz(state, int(r)) for r in r_values}
        values["c_spt"] = {int(r): c_spt(state, int(r)) for r in r_values}
    return TrajectoryRecord(L=params.L, p_zz=params.p_zz, alpha=params.alpha,
                            p_b=params.p_b, traj=params.traj, **values)
