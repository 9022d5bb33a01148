"""Measurement schedule: power-law pair sampling, stepping, and protocols.

Each discrete time step applies one bulk measurement: with probability
``p_zz`` the Ising operator Z_i Z_j on a pair drawn with probability
proportional to |i - j|**(-alpha) over all distinct pairs (open boundaries),
otherwise the cluster operator at a uniformly chosen interior center.  The
``edge_probe`` protocol additionally fires both boundary probes with
independent probability ``p_b`` after the bulk measurement.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .pauli import (build_edge_left, build_edge_right, build_global_x,
                    build_zxz, build_zz)
from .stabilizer import StabilizerState

PROTOCOLS = ("steady_state", "purification", "edge_probe")

_MASK64 = (1 << 64) - 1


def _mix64(h: int, value: int) -> int:
    """One splitmix64 absorption step; exact 64-bit arithmetic."""
    h = (h + (value & _MASK64) + 0x9E3779B97F4A7C15) & _MASK64
    h ^= h >> 30
    h = (h * 0xBF58476D1CE4E5B9) & _MASK64
    h ^= h >> 27
    h = (h * 0x94D049BB133111EB) & _MASK64
    h ^= h >> 31
    return h


def _float_bits(x: float) -> int:
    return int(np.float64(x).view(np.uint64))


@dataclass(frozen=True)
class CircuitParams:
    """Full description of a single trajectory."""

    L: int
    p_zz: float
    alpha: float
    steps: Optional[int] = None
    p_b: float = 0.0
    protocol: str = "steady_state"
    seed: int = 0
    traj: int = 0
    center_noop: bool = False

    def __post_init__(self):
        if self.L < 4:
            raise ValueError("chain length must be at least 4")
        if not 0.0 <= self.p_zz <= 1.0:
            raise ValueError("p_zz must lie in [0, 1]")
        if not 0.0 <= self.p_b <= 1.0:
            raise ValueError("p_b must lie in [0, 1]")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.steps is None:
            object.__setattr__(self, "steps", 4 * self.L * self.L)
        if self.steps < 1:
            raise ValueError("need at least one step")

    def with_traj(self, traj: int) -> "CircuitParams":
        return replace(self, traj=traj)


def trajectory_rng(params: CircuitParams) -> np.random.Generator:
    """Counter-based generator keyed by the full parameter point and index.

    Streams for distinct (seed, point, traj) combinations are independent
    without any coordination, which makes trajectory parallelism exactly
    reproducible for any worker count.
    """
    h = 0
    for v in (params.seed, params.traj, params.L, params.steps,
              PROTOCOLS.index(params.protocol), int(params.center_noop),
              _float_bits(params.p_zz), _float_bits(params.alpha),
              _float_bits(params.p_b)):
        h = _mix64(h, v)
    key = (h << 64) | _mix64(h, 0xD1B54A32D192ED03)
    return np.random.Generator(np.random.Philox(key=key))


class PairSampler:
    """Two-stage sampler for the power-law pair distribution.

    Distance d is drawn with weight (L - d) * d**(-alpha) (there are exactly
    L - d pairs at distance d on an open chain), then the offset is uniform,
    which reproduces P(i, j) proportional to |i - j|**(-alpha) over the set
    of all distinct pairs.
    """

    def __init__(self, L: int, alpha: float):
        if L < 2:
            raise ValueError("need at least two sites")
        if alpha <= 0.0:
            raise ValueError("alpha must be positive")
        self.L = L
        self.alpha = alpha
        d = np.arange(1, L, dtype=np.float64)
        self.weights = (L - d) * d ** (-alpha)
        self.cum = np.cumsum(self.weights)

    def pair_probability(self, i: int, j: int) -> float:
        """Exact probability of drawing the pair (i, j)."""
        if not (1 <= i < j <= self.L):
            raise ValueError("need 1 <= i < j <= L")
        return float((j - i) ** (-self.alpha) / self.cum[-1])

    def sample(self, rng: np.random.Generator) -> tuple[int, int]:
        return self.from_uniforms(rng.random(), rng.random())

    def from_uniforms(self, u_dist: float, u_off: float) -> tuple[int, int]:
        d = int(np.searchsorted(self.cum, u_dist * self.cum[-1], side="right")) + 1
        d = min(d, self.L - 1)
        i = min(1 + int(u_off * (self.L - d)), self.L - d)
        return i, i + d


def sample_cluster_center(L: int, rng: np.random.Generator) -> int:
    """Uniform interior site in {2, ..., L-1}."""
    if L < 3:
        raise ValueError("need at least three sites")
    return int(rng.integers(2, L))


def step(state: StabilizerState, params: CircuitParams, sampler: PairSampler,
         rng: np.random.Generator) -> list[tuple]:
    """Apply one time step; returns the (operator, outcome) pairs applied."""
    applied = []
    if rng.random() < params.p_zz:
        i, j = sampler.sample(rng)
        op = build_zz(i, j, params.L)
        applied.append((op, state.measure(op, rng)))
    else:
        if params.center_noop:
            c = int(rng.integers(1, params.L + 1))
            if 1 < c < params.L:
                op = build_zxz(c, params.L)
                applied.append((op, state.measure(op, rng)))
        else:
            op = build_zxz(sample_cluster_center(params.L, rng), params.L)
            applied.append((op, state.measure(op, rng)))
    if params.protocol == "edge_probe" and rng.random() < params.p_b:
        for op in (build_edge_left(params.L), build_edge_right(params.L)):
            applied.append((op, state.measure(op, rng)))
    return applied


def _draw_batches(params: CircuitParams, rng: np.random.Generator):
    steps = params.steps
    u_type = rng.random(steps)
    u_center = rng.random(steps)
    u_dist = rng.random(steps)
    u_off = rng.random(steps)
    out_bits = rng.integers(0, 2, size=steps, dtype=np.uint8)
    if params.protocol == "edge_probe":
        probe_u = rng.random(steps)
        probe_b1 = rng.integers(0, 2, size=steps, dtype=np.uint8)
        probe_b2 = rng.integers(0, 2, size=steps, dtype=np.uint8)
    else:
        probe_u = np.empty(0, np.float64)
        probe_b1 = probe_b2 = np.empty(0, np.uint8)
    return u_type, u_center, u_dist, u_off, out_bits, probe_u, probe_b1, probe_b2


def _run_batched(state: StabilizerState, params: CircuitParams,
                 sampler: PairSampler, rng: np.random.Generator,
                 sample_at: Optional[np.ndarray] = None,
                 engine: str = "numba") -> np.ndarray:
    """Run the full step budget on ``state``; returns sampled entropies.

    ``engine="python"`` replays the identical pre-drawn randomness through
    the public single-measurement path; used to cross-check the kernel.
    """
    (u_type, u_center, u_dist, u_off, out_bits,
     probe_u, probe_b1, probe_b2) = _draw_batches(params, rng)
    if sample_at is None:
        sample_at = np.empty(0, np.int64)
    sample_out = np.zeros(len(sample_at), np.int64)
    if engine == "numba":
        state._k = int(_kernels.run_bulk(
            state._sx, state._sz, state._sp, state._dx, state._dz, state._k,
            params.L, params.center_noop,
            params.p_zz, sampler.cum, u_type, u_center, u_dist, u_off,
            out_bits, params.p_b, probe_u, probe_b1, probe_b2,
            np.asarray(sample_at, np.int64), sample_out))
        return sample_out
    if engine != "python":
        raise ValueError(f"unknown engine {engine!r}")
    L = params.L
    si = 0
    for t in range(params.steps):
        while si < len(sample_at) and sample_at[si] <= t:
            sample_out[si] = state.entropy_full()
            si += 1
        if u_type[t] < params.p_zz:
            i, j = sampler.from_uniforms(u_dist[t], u_off[t])
            op = build_zz(i, j, L)
        else:
            if params.center_noop:
                c = min(1 + int(u_center[t] * L), L)
                if c == 1 or c == L:
                    op = None
                else:
                    op = build_zxz(c, L)
            else:
                c = min(2 + int(u_center[t] * (L - 2)), L - 1)
                op = build_zxz(c, L)
        if op is not None:
            state._measure_raw(op.x, op.z, op.phase_exp, int(out_bits[t]))
        if len(probe_u) and probe_u[t] < params.p_b:
            left = build_edge_left(L)
            right = build_edge_right(L)
            state._measure_raw(left.x, left.z, left.phase_exp, int(probe_b1[t]))
            state._measure_raw(right.x, right.z, right.phase_exp, int(probe_b2[t]))
    while si < len(sample_at):
        sample_out[si] = state.entropy_full()
        si += 1
    return sample_out


def run_steady_state(params: CircuitParams,
                     observables: Optional[Sequence[str]] = None,
                     r_values: Optional[Sequence[int]] = None,
                     engine: str = "numba"):
    """Evolve |+>^L for the full step budget and evaluate observables.

    Returns ``(state, TrajectoryRecord)``.
    """
    from .observables import evaluate

    if params.protocol not in ("steady_state", "edge_probe"):
        raise ValueError("protocol must be steady_state or edge_probe")
    state = StabilizerState.plus_state(params.L)
    sampler = PairSampler(params.L, params.alpha)
    rng = trajectory_rng(params)
    _run_batched(state, params, sampler, rng, engine=engine)
    record = evaluate(state, params, observables=observables, r_values=r_values)
    return state, record


def run_purification(params: CircuitParams,
                     sample_times: Optional[Sequence[int]] = None,
                     engine: str = "numba") -> list[tuple[int, int]]:
    """Evolve I/2^L and record the full-system entropy over time.

    Returns (step, entropy) pairs including t = 0; times beyond the step
    budget are clamped to the final state.
    """
    if params.protocol != "purification":
        raise ValueError("protocol must be purification")
    if sample_times is None:
        sample_times = default_sample_times(params.steps)
    times = sorted(set(int(t) for t in sample_times) | {0})
    if any(t < 0 for t in times):
        raise ValueError("sample times must be non-negative")
    state = StabilizerState.maximally_mixed(params.L)
    sampler = PairSampler(params.L, params.alpha)
    rng = trajectory_rng(params)
    out = _run_batched(state, params, sampler, rng,
                       sample_at=np.asarray(times, np.int64), engine=engine)
    return [(min(t, params.steps), int(s)) for t, s in zip(times, out)]


def default_sample_times(steps: int) -> list[int]:
    """Roughly log-spaced sample times 0..steps (endpoints included)."""
    times = {0, steps}
    t = 1
    while t < steps:
        times.add(t)
        t = max(t + 1, int(t * 1.5))
    return sorted(times)


def conserved_parity(state: StabilizerState) -> int:
    """Expectation of the global parity operator prod_j X_j."""
    return state.expectation(build_global_x(state.n))
