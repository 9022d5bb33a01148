"""Mixed-capable stabilizer states with projective Pauli measurements.

A state on n qubits is the uniform mixture over the joint +1 eigenspace of
k <= n commuting independent signed Pauli generators (pure iff k = n).
Measurement, expectation and subsystem entropies all run in O(n * n/64)
word operations via the kernels in :mod:`mocsim._kernels`.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from . import _kernels
from .pauli import PauliString, n_words


class StabilizerState:
    """Stabilizer group of k <= n signed Pauli generators on n qubits."""

    __slots__ = ("n", "_w", "_k", "_sx", "_sz", "_sp", "_dx", "_dz")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("qubit count must be positive")
        w = n_words(n)
        self.n = n
        self._w = w
        self._k = 0
        self._sx = np.zeros((n, w), np.uint64)
        self._sz = np.zeros((n, w), np.uint64)
        self._sp = np.zeros(n, np.uint8)
        self._dx = np.zeros((n, w), np.uint64)
        self._dz = np.zeros((n, w), np.uint64)
        # X_i / Z_i symplectic basis; whether rows are active stabilizers
        # or gauge pairs is decided by _k alone.
        for j in range(n):
            bit = np.uint64(1) << np.uint64(j & 63)
            self._sx[j, j >> 6] = bit
            self._dz[j, j >> 6] = bit

    # -- constructors --------------------------------------------------

    @classmethod
    def plus_state(cls, n: int) -> "StabilizerState":
        """Pure product state with generators {X_1, ..., X_n}, all +1."""
        state = cls(n)
        state._k = n
        return state

    @classmethod
    def maximally_mixed(cls, n: int) -> "StabilizerState":
        """The state I / 2**n: zero generators."""
        return cls(n)

    # -- basic queries ---------------------------------------------------

    @property
    def k(self) -> int:
        """Number of active stabilizer generators."""
        return self._k

    def entropy_full(self) -> int:
        """Full-system entropy in bits: n - k."""
        return self.n - self._k

    def generators(self) -> list[PauliString]:
        return [PauliString(self.n, self._sx[i], self._sz[i], int(self._sp[i]))
                for i in range(self._k)]

    def copy(self) -> "StabilizerState":
        other = StabilizerState.__new__(StabilizerState)
        other.n = self.n
        other._w = self._w
        other._k = self._k
        other._sx = self._sx.copy()
        other._sz = self._sz.copy()
        other._sp = self._sp.copy()
        other._dx = self._dx.copy()
        other._dz = self._dz.copy()
        return other

    def fingerprint(self) -> int:
        """Hash of the full internal tableau; changes iff the state mutates."""
        return hash((self._k, self._sx.tobytes(), self._sz.tobytes(),
                     self._sp.tobytes(), self._dx.tobytes(), self._dz.tobytes()))

    # -- measurement and expectation --------------------------------------

    def _require_operator(self, p: PauliString) -> None:
        if p.n != self.n:
            raise ValueError(f"operator on {p.n} qubits, state has {self.n}")
        if not p.is_hermitian():
            raise ValueError("measurement operator must be Hermitian")

    def _measure_raw(self, px, pz, ppe: int, rand_bit: int) -> tuple[int, bool]:
        ag = np.empty(self.n, np.uint8)
        ad = np.empty(self.n, np.uint8)
        qz = np.empty(self._w, np.uint64)
        self._k, code = _kernels.measure_op(
            self._sx, self._sz, self._sp, self._dx, self._dz, self._k,
            px, pz, ppe, rand_bit, ag, ad, qz)
        outcome = 1 if code in (0, 2) else -1
        return outcome, code >= 2

    def measure(self, p: PauliString, rng: np.random.Generator) -> int:
        """Projectively measure a Hermitian Pauli; returns the outcome +-1.

        Deterministic outcomes leave the state unchanged; random outcomes
        draw one bit from ``rng`` (drawn on every call to keep the stream
        consumption independent of the branch taken).
        """
        self._require_operator(p)
        if p.is_identity():
            raise ValueError("cannot measure the identity")
        rand_bit = int(rng.integers(0, 2))
        outcome, _ = self._measure_raw(p.x, p.z, p.phase_exp, rand_bit)
        return outcome

    def expectation(self, p: PauliString) -> int:
        """Exact <P> for the current state: always -1, 0 or +1."""
        self._require_operator(p)
        qz = np.empty(self._w, np.uint64)
        return int(_kernels.expectation_op(
            self._sx, self._sz, self._sp, self._dx, self._dz, self._k,
            p.x, p.z, p.phase_exp, qz))

    # -- entropies ---------------------------------------------------------

    def entropy_region(self, region: Iterable[int]) -> int:
        """Entanglement entropy of a site subset in bits.

        Equals |A| minus the number of independent stabilizers supported
        entirely inside A, computed via the GF(2) rank of the generator
        matrix restricted to the complement columns.
        """
        sites = set(region)
        for s in sites:
            if not 1 <= s <= self.n:
                raise ValueError(f"site {s} out of range 1..{self.n}")
        na = len(sites)
        if self._k == 0 or na == 0:
            return na
        mask = np.zeros(self._w, np.uint64)
        for s in range(1, self.n + 1):
            if s not in sites:
                mask[(s - 1) >> 6] |= np.uint64(1) << np.uint64((s - 1) & 63)
        rows = np.concatenate(
            (self._sx[:self._k] & mask, self._sz[:self._k] & mask), axis=1)
        rank = int(_kernels.rank_gf2(rows))
        return na - (self._k - rank)

    # -- consistency checks (test support) ----------------------------------

    def validate(self) -> None:
        """Raise AssertionError if the tableau invariants are violated."""
        from .pauli import commutes, multiply

        gens = self.generators()
        for i, g in enumerate(gens):
            assert g.is_hermitian(), f"generator {i} not Hermitian"
            sq = multiply(g, g)
            assert sq.is_identity() and sq.phase_exp == 0
            for h in gens[i + 1:]:
                assert commutes(g, h), "generators must commute"
        if self._k:
            rows = np.concatenate(
                (self._sx[:self._k].copy(), self._sz[:self._k].copy()), axis=1)
            assert int(_kernels.rank_gf2(rows)) == self._k, "dependent generators"
        # symplectic duality of the full tableau
        for i in range(self.n):
            gi = PauliString(self.n, self._sx[i], self._sz[i], 0)
            for j in range(self.n):
                dj = PauliString(self.n, self._dx[j], self._dz[j], 0)
                same = commutes(gi, dj)
                assert same == (i != j), f"duality broken at ({i}, {j})"


def expectation_batch(state: StabilizerState, xs: np.ndarray, zs: np.ndarray,
                      pes: np.ndarray) -> np.ndarray:
    """Vectorized exact expectations for many single-word Pauli queries.

    ``xs``/``zs`` are uint64 bit masks (n <= 64) and ``pes`` the phase
    exponents; returns an int8 array of -1/0/+1 values.
    """
    if state.n > 64:
        raise ValueError("batch expectations support n <= 64 only")
    n, k = state.n, state.k
    gx = state._sx[:, 0]
    gz = state._sz[:, 0]
    dx = state._dx[:, 0]
    dz = state._dz[:, 0]
    sp = state._sp.astype(np.int64)
    anti = (np.bitwise_count(zs[:, None] & gx[None, :])
            + np.bitwise_count(xs[:, None] & gz[None, :])) & 1
    zero = anti.any(axis=1)
    coef = (np.bitwise_count(zs[:, None] & dx[None, :])
            + np.bitwise_count(xs[:, None] & dz[None, :])) & 1
    if k < n:
        zero |= coef[:, k:].any(axis=1)
    qz = np.zeros(len(xs), np.uint64)
    qpe = np.zeros(len(xs), np.int64)
    for i in range(k):
        sel = coef[:, i].astype(bool)
        par = (np.bitwise_count(qz & gx[i]) & 1).astype(np.int64)
        qpe = np.where(sel, (qpe + sp[i] + 2 * par) % 4, qpe)
        qz = np.where(sel, qz ^ gz[i], qz)
    value = np.where((pes.astype(np.int64) - qpe) % 4 == 0, 1, -1).astype(np.int8)
    value[zero] = 0
    return value
