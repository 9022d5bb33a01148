"""Exact dense state-vector reference for small instances (n <= 12).

Used as ground truth for the stabilizer engine: replaying a stabilizer
trajectory with forced outcomes must give branch probability 1.0 where the
engine reported a deterministic outcome and 0.5 where it reported a coin
flip, and all Pauli expectations and subsystem entropies must agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import (PauliString, build_edge_left, build_edge_right, build_zxz,
                    build_zz, random_hermitian_pauli)
from .stabilizer import StabilizerState, expectation_batch

MAX_QUBITS = 12
_EIG_TOL = 1e-12

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense 2**n x 2**n matrix of a PauliString (site 1 = leftmost factor)."""
    if p.n > MAX_QUBITS:
        raise ValueError(f"dense matrices limited to n <= {MAX_QUBITS}")
    label = p.to_label()
    sign = {"+": 1, "-": -1, "+i": 1j, "-i": -1j}[
        label[:2] if label[1] == "i" else label[0]]
    letters = label[2:] if label[1] == "i" else label[1:]
    m = np.ones((1, 1), dtype=complex)
    for ch in letters:
        m = np.kron(m, _PAULI_1Q[ch])
    return sign * m


def _masks(p: PauliString) -> tuple[int, int]:
    """Integer X/Z masks with site s at bit position n - s."""
    xm = zm = 0
    for s in range(1, p.n + 1):
        wi, b = (s - 1) >> 6, np.uint64(1) << np.uint64((s - 1) & 63)
        if p.x[wi] & b:
            xm |= 1 << (p.n - s)
        if p.z[wi] & b:
            zm |= 1 << (p.n - s)
    return xm, zm


@dataclass
class DenseState:
    """Normalized complex amplitude vector over 2**n basis states."""

    n: int
    vec: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n > MAX_QUBITS:
            raise ValueError(f"dense oracle limited to n <= {MAX_QUBITS}")
        if self.vec.shape != (2 ** self.n,):
            raise ValueError("amplitude vector has wrong length")
        norm = np.linalg.norm(self.vec)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: |psi| = {norm}")

    @classmethod
    def plus_state(cls, n: int) -> "DenseState":
        vec = np.full(2 ** n, 2.0 ** (-n / 2), dtype=complex)
        return cls(n, vec)

    def apply_pauli(self, p: PauliString) -> "DenseState":
        xm, zm = _masks(p)
        idx = np.arange(2 ** self.n)
        signs = 1.0 - 2.0 * (np.bitwise_count(np.bitwise_xor(idx, xm) & zm) & 1)
        out = (1j ** p.phase_exp) * signs * self.vec[np.bitwise_xor(idx, xm)]
        return DenseState(self.n, out)

    def expectation(self, p: PauliString) -> float:
        val = np.vdot(self.vec, self.apply_pauli(p).vec)
        if abs(val.imag) > 1e-9:
            raise ValueError("expectation of a non-Hermitian operator")
        return float(val.real)

    def measure_forced(self, p: PauliString, outcome: int) -> tuple[float, "DenseState"]:
        """Project onto (I + outcome*P)/2; returns (branch probability, post-state)."""
        if outcome not in (1, -1):
            raise ValueError("outcome must be +1 or -1")
        proj = 0.5 * (self.vec + outcome * self.apply_pauli(p).vec)
        prob = float(np.vdot(proj, proj).real)
        if prob < 1e-10:
            raise ValueError("forced a zero-probability outcome")
        return prob, DenseState(self.n, proj / np.sqrt(prob))

    def _region_spectrum(self, region) -> np.ndarray:
        sites = sorted(set(region))
        for s in sites:
            if not 1 <= s <= self.n:
                raise ValueError(f"site {s} out of range 1..{self.n}")
        if not sites or len(sites) == self.n:
            return np.array([1.0])
        axes = [s - 1 for s in sites]
        rest = [a for a in range(self.n) if a not in axes]
        m = self.vec.reshape([2] * self.n).transpose(axes + rest)
        m = m.reshape(2 ** len(sites), 2 ** len(rest))
        sv = np.linalg.svd(m, compute_uv=False)
        return sv ** 2

    def entropy_region(self, region) -> float:
        """Von Neumann entropy of the reduced state, in bits."""
        lam = self._region_spectrum(region)
        lam = lam[lam > _EIG_TOL]
        return float(-(lam * np.log2(lam)).sum())

    def renyi2_region(self, region) -> float:
        """Renyi-2 entropy of the reduced state, in bits."""
        lam = self._region_spectrum(region)
        return float(-np.log2((lam ** 2).sum()))


def all_pauli_expectations(state: DenseState) -> np.ndarray:
    """Expectations of every canonical Hermitian Pauli as a (2**n, 2**n) array.

    Entry [xm, zm] is the expectation of i**popcount(xm & zm) X^xm Z^zm.
    Intended for exhaustive oracle comparisons at n <= 8.
    """
    n = state.n
    dim = 2 ** n
    idx = np.arange(dim)
    v = np.empty((dim, dim), dtype=complex)
    for xm in range(dim):
        v[xm] = np.conj(state.vec[idx ^ xm]) * state.vec
    signs = 1.0 - 2.0 * (np.bitwise_count(idx[:, None] & idx[None, :]) & 1)
    raw = v @ signs.T.astype(complex)
    ny = np.bitwise_count(idx[:, None] & idx[None, :]) % 4
    vals = (1j ** ny) * raw
    return vals.real


def stabilizer_pauli_table(state: StabilizerState) -> np.ndarray:
    """Stabilizer-engine counterpart of :func:`all_pauli_expectations`.

    Index [xm, zm] uses site s at bit n - s, matching the dense table.
    """
    n = state.n
    dim = 2 ** n
    masks = np.arange(dim, dtype=np.uint64)
    # convert dense bit order (site s at bit n - s) to packed order (bit s - 1)
    conv = np.zeros(dim, np.uint64)
    for s in range(1, n + 1):
        src = np.uint64(1) << np.uint64(n - s)
        dst = np.uint64(1) << np.uint64(s - 1)
        conv |= np.where(masks & src, dst, np.uint64(0))
    xs = np.repeat(conv, dim)
    zs = np.tile(conv, dim)
    pes = (np.bitwise_count(xs & zs) % 4).astype(np.uint8)
    vals = expectation_batch(state, xs, zs, pes)
    return vals.reshape(dim, dim).astype(float)


# -- randomized equivalence suite -------------------------------------------


@dataclass
class EquivalenceReport:
    cases: int
    steps: int
    checks: int
    failures: list[str]
    failed_cases: frozenset[int] = frozenset()

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_circuit_op(n: int, rng: np.random.Generator) -> PauliString:
    r = rng.random()
    if r < 0.4:
        i, j = sorted(rng.choice(n, size=2, replace=False) + 1)
        return build_zz(int(i), int(j), n)
    if r < 0.8:
        return build_zxz(int(rng.integers(2, n)), n)
    return build_edge_left(n) if r < 0.9 else build_edge_right(n)


def _contiguous_regions(n: int) -> list[list[int]]:
    return [list(range(a, b + 1)) for a in range(1, n + 1) for b in range(a, n + 1)
            if b - a + 1 < n]


def _compare_entropies(stab: StabilizerState, dense: DenseState, regions,
                       failures: list[str], where: str) -> int:
    checks = 0
    for region in regions:
        s_int = stab.entropy_region(region)
        s_vn = dense.entropy_region(region)
        s_r2 = dense.renyi2_region(region)
        checks += 1
        if abs(s_vn - s_int) > 1e-8 or abs(s_r2 - s_int) > 1e-8:
            failures.append(
                f"{where}: entropy mismatch on {region}: "
                f"stab={s_int} vN={s_vn} R2={s_r2}")
    return checks


def run_equivalence_suite(n: int, cases: int, seq_len: int = 200,
                          seed: int = 0, checkpoints: int = 10,
                          sample_paulis: int = 64,
                          exhaustive_final: bool = True) -> EquivalenceReport:
    """Replay random stabilizer trajectories through the dense oracle.

    Per step: the dense branch probability of the stabilizer outcome must be
    1.0 (engine said deterministic) or 0.5 (engine said random) within 1e-9.
    At checkpoints: sampled Pauli expectations and all contiguous-region
    entropies must agree.  At the end of each sequence (n <= 8 and
    ``exhaustive_final``): every Pauli expectation and every subsystem
    entropy is compared.
    """
    if n > MAX_QUBITS:
        raise ValueError(f"oracle limited to n <= {MAX_QUBITS}")
    failures: list[str] = []
    failed_cases: set[int] = set()
    checks = 0
    contiguous = _contiguous_regions(n)
    every = max(1, seq_len // max(1, checkpoints))
    for case in range(cases):
        n_before = len(failures)
        rng = np.random.default_rng(np.random.SeedSequence([seed, case]))
        stab = StabilizerState.plus_state(n)
        dense = DenseState.plus_state(n)
        for t in range(seq_len):
            op = _random_circuit_op(n, rng)
            before = stab.expectation(op)
            outcome = stab.measure(op, rng)
            prob, dense = dense.measure_forced(op, outcome)
            expected = 1.0 if before != 0 else 0.5
            checks += 1
            if abs(prob - expected) > 1e-9:
                failures.append(
                    f"case {case} step {t}: branch probability {prob} "
                    f"!= {expected} for {op.to_label()}")
            if before != 0 and outcome != before:
                failures.append(
                    f"case {case} step {t}: deterministic outcome flipped")
            if (t + 1) % every == 0:
                for _ in range(sample_paulis):
                    q = random_hermitian_pauli(n, rng)
                    ev_s = stab.expectation(q)
                    ev_d = dense.expectation(q)
                    checks += 1
                    if abs(ev_d - ev_s) > 1e-9:
                        failures.append(
                            f"case {case} step {t}: <{q.to_label()}> "
                            f"stab={ev_s} dense={ev_d}")
                checks += _compare_entropies(stab, dense, contiguous, failures,
                                             f"case {case} step {t}")
        if exhaustive_final and n <= 8:
            table_d = all_pauli_expectations(dense)
            table_s = stabilizer_pauli_table(stab)
            checks += table_d.size
            if not np.allclose(table_d, table_s, atol=1e-9):
                bad = int(np.argmax(np.abs(table_d - table_s)))
                failures.append(
                    f"case {case}: full Pauli table mismatch at flat index {bad}")
            subsets = [[s + 1 for s in range(n) if (m >> s) & 1]
                       for m in range(1, 2 ** n - 1)]
            checks += _compare_entropies(stab, dense, subsets, failures,
                                         f"case {case} final")
        if len(failures) > n_before:
            failed_cases.add(case)
        if len(failures) > 50:
            break
    return EquivalenceReport(cases=cases, steps=cases * seq_len,
                             checks=checks, failures=failures,
                             failed_cases=frozenset(failed_cases))
