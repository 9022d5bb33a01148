"""Signed multi-qubit Pauli strings in binary-symplectic form.

An n-qubit Pauli operator is stored as two length-n bit vectors (packed into
64-bit words) plus an integer phase exponent::

    P = i**phase_exp * prod_j X_j**x_j * Z_j**z_j      (phase_exp mod 4)

Per site, ``x=z=1`` encodes ``XZ = -iY``, so the canonical Hermitian string
with ``m`` Y factors carries ``phase_exp = m mod 4``.  Sites are 1-based in
every interface.
"""
from __future__ import annotations

import numpy as np

WORD_BITS = 64


def n_words(n: int) -> int:
    """Number of 64-bit words needed for n bit positions."""
    return (n + WORD_BITS - 1) // WORD_BITS


def _parity(words: np.ndarray) -> int:
    """Parity of the total popcount of a uint64 array."""
    acc = np.uint64(0)
    for w in words:
        acc ^= w
    return int(np.bitwise_count(acc)) & 1


def _popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum())


def _bit_index(site: int) -> tuple[int, np.uint64]:
    j = site - 1
    return j >> 6, np.uint64(1) << np.uint64(j & 63)


class PauliString:
    """Immutable signed Pauli operator on ``n`` qubits."""

    __slots__ = ("n", "x", "z", "phase_exp")

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, phase_exp: int = 0):
        if n < 1:
            raise ValueError("qubit count must be positive")
        w = n_words(n)
        x = np.array(x, dtype=np.uint64, copy=True)
        z = np.array(z, dtype=np.uint64, copy=True)
        if x.shape != (w,) or z.shape != (w,):
            raise ValueError(f"expected {w} words for n={n}")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase_exp", int(phase_exp) % 4)

    def __setattr__(self, name, value):
        raise AttributeError("PauliString is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        w = n_words(n)
        return cls(n, np.zeros(w, np.uint64), np.zeros(w, np.uint64), 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a string like ``"ZZIX"``, ``"-XY"`` or ``"+iXZ"``.

        Letters run left to right over sites 1..n.  A bare letter string is
        the canonical Hermitian operator; ``-``/``+i``/``-i`` prefixes scale
        it by that unit.
        """
        s = label
        extra = 0
        for prefix, ph in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if s.startswith(prefix):
                extra = ph
                s = s[len(prefix):]
                break
        n = len(s)
        if n == 0:
            raise ValueError(f"empty Pauli label: {label!r}")
        w = n_words(n)
        x = np.zeros(w, np.uint64)
        z = np.zeros(w, np.uint64)
        ny = 0
        for site, ch in enumerate(s, start=1):
            wi, bit = _bit_index(site)
            if ch == "I":
                continue
            if ch in "XY":
                x[wi] |= bit
            if ch in "ZY":
                z[wi] |= bit
            if ch == "Y":
                ny += 1
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}")
        return cls(n, x, z, (ny + extra) % 4)

    # -- inspection --------------------------------------------------------

    def support(self) -> list[int]:
        """1-based sites where the operator acts nontrivially."""
        return [j + 1 for j in range(self.n)
                if (int(self.x[j >> 6] | self.z[j >> 6]) >> (j & 63)) & 1]

    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def is_hermitian(self) -> bool:
        """True iff P equals its adjoint (equivalently P**2 = +I)."""
        return (self.phase_exp & 1) == _parity(self.x & self.z)

    def sign(self) -> int:
        """+1 or -1 relative to the canonical Hermitian string.

        Raises for non-Hermitian phases.
        """
        delta = (self.phase_exp - _popcount(self.x & self.z)) % 4
        if delta == 0:
            return 1
        if delta == 2:
            return -1
        raise ValueError("operator is not a signed Hermitian Pauli")

    def to_label(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[
            (self.phase_exp - _popcount(self.x & self.z)) % 4]
        letters = []
        for site in range(1, self.n + 1):
            wi, bit = _bit_index(site)
            xb = bool(self.x[wi] & bit)
            zb = bool(self.z[wi] & bit)
            letters.append("IXZY"[xb + 2 * zb])
        return prefix + "".join(letters)

    def __repr__(self) -> str:
        return f"PauliString({self.to_label()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.n == other.n and self.phase_exp == other.phase_exp
                and bool(np.array_equal(self.x, other.x))
                and bool(np.array_equal(self.z, other.z)))

    def __hash__(self) -> int:
        return hash((self.n, self.phase_exp, self.x.tobytes(), self.z.tobytes()))


# -- algebra ---------------------------------------------------------------

def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic inner product of p and q is even."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    return _parity((p.x & q.z) ^ (p.z & q.x)) == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact product p*q with i-power bookkeeping."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    phase = (p.phase_exp + q.phase_exp + 2 * _parity(p.z & q.x)) % 4
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, phase)


# -- operator builders (1-based sites, +1 overall sign) ---------------------

def _blank(n: int) -> tuple[np.ndarray, np.ndarray]:
    w = n_words(n)
    return np.zeros(w, np.uint64), np.zeros(w, np.uint64)


def _check_site(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"site {i} out of range 1..{n}")


def build_zz(i: int, j: int, n: int) -> PauliString:
    """Two-qubit Ising operator Z_i Z_j."""
    _check_site(i, n)
    _check_site(j, n)
    if i == j:
        raise ValueError("sites must be distinct")
    x, z = _blank(n)
    for s in (i, j):
        wi, bit = _bit_index(s)
        z[wi] |= bit
    return PauliString(n, x, z, 0)


def build_zxz(i: int, n: int) -> PauliString:
    """Three-qubit cluster operator Z_{i-1} X_i Z_{i+1} at interior site i."""
    if not 2 <= i <= n - 1:
        raise ValueError(f"cluster center {i} out of range 2..{n - 1}")
    x, z = _blank(n)
    for s in (i - 1, i + 1):
        wi, bit = _bit_index(s)
        z[wi] |= bit
    wi, bit = _bit_index(i)
    x[wi] |= bit
    return PauliString(n, x, z, 0)


def build_string_op(a: int, b: int, n: int) -> PauliString:
    """Nonlocal string Z_{a-1} Y_a (prod_{a<k<b} X_k) Y_b Z_{b+1}."""
    if not (2 <= a < b <= n - 1):
        raise ValueError(f"endpoints ({a}, {b}) must satisfy 2 <= a < b <= {n - 1}")
    x, z = _blank(n)
    for s in (a - 1, a, b, b + 1):
        wi, bit = _bit_index(s)
        z[wi] |= bit
    for s in range(a, b + 1):
        wi, bit = _bit_index(s)
        x[wi] |= bit
    return PauliString(n, x, z, 2)  # two Y factors


def build_edge_left(n: int) -> PauliString:
    """Left boundary probe X_1 Z_2."""
    if n < 2:
        raise ValueError("need at least 2 sites")
    x, z = _blank(n)
    x[0] |= np.uint64(1)
    z[0] |= np.uint64(2)
    return PauliString(n, x, z, 0)


def build_edge_right(n: int) -> PauliString:
    """Right boundary probe Z_{n-1} X_n."""
    if n < 2:
        raise ValueError("need at least 2 sites")
    x, z = _blank(n)
    wi, bit = _bit_index(n)
    x[wi] |= bit
    wi, bit = _bit_index(n - 1)
    z[wi] |= bit
    return PauliString(n, x, z, 0)


def build_global_x(n: int) -> PauliString:
    """The conserved parity operator prod_j X_j."""
    x, z = _blank(n)
    for s in range(1, n + 1):
        wi, bit = _bit_index(s)
        x[wi] |= bit
    return PauliString(n, x, z, 0)


def single_site(kind: str, i: int, n: int) -> PauliString:
    """Single-site X/Y/Z operator at site i."""
    _check_site(i, n)
    x, z = _blank(n)
    wi, bit = _bit_index(i)
    if kind in "XY":
        x[wi] |= bit
    if kind in "ZY":
        z[wi] |= bit
    if kind not in "XYZ":
        raise ValueError(f"kind must be X, Y or Z, got {kind!r}")
    return PauliString(n, x, z, 1 if kind == "Y" else 0)


def random_hermitian_pauli(n: int, rng: np.random.Generator,
                           allow_identity: bool = False) -> PauliString:
    """Uniform random signed Hermitian Pauli, for tests and oracle sweeps."""
    while True:
        letters = rng.integers(0, 4, size=n)
        if allow_identity or letters.any():
            break
    label = "".join("IXZY"[v] for v in letters)
    p = PauliString.from_label(label)
    if rng.integers(0, 2):
        p = PauliString(n, p.x, p.z, (p.phase_exp + 2) % 4)
    return p
