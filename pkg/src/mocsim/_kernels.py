"""Numba kernels for the bit-packed stabilizer engine.

Layout shared by all kernels: a length-n chain uses W = ceil(n/64) words per
bit vector.  The tableau holds n generator rows (``sx``, ``sz``, phase ``sp``
in i-powers mod 4) and n dual rows (``dx``, ``dz``, phases untracked).  Rows
``0..k-1`` are the active stabilizers of the state; rows ``k..n-1`` are gauge
pairs spanning the maximally mixed directions.  The full 2n rows always form
a symplectic basis: generator rows mutually commute, dual rows mutually
commute, and row i's dual anticommutes with generator i only.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)


@njit(inline="always")
def _pc64(v):
    v = v - ((v >> np.uint64(1)) & _M1)
    v = (v & _M2) + ((v >> np.uint64(2)) & _M2)
    v = (v + (v >> np.uint64(4))) & _M4
    return (v * _H01) >> np.uint64(56)


@njit(cache=True)
def measure_op(sx, sz, sp, dx, dz, k, px, pz, ppe, rand_bit, ag, ad, qz):
    """Project onto an eigenspace of the Pauli (px, pz, ppe).

    ``rand_bit`` supplies the coin for a random outcome (0 -> +1, 1 -> -1).
    Mutates the tableau in place.  Returns ``(new_k, code)`` with code
    0: deterministic +1, 1: deterministic -1, 2: random +1, 3: random -1.
    """
    n = sx.shape[0]
    W = sx.shape[1]
    for i in range(n):
        accg = np.uint64(0)
        accd = np.uint64(0)
        for w in range(W):
            accg ^= (sx[i, w] & pz[w]) ^ (sz[i, w] & px[w])
            accd ^= (dx[i, w] & pz[w]) ^ (dz[i, w] & px[w])
        ag[i] = np.uint8(_pc64(accg) & _ONE)
        ad[i] = np.uint8(_pc64(accd) & _ONE)

    pivot = -1
    promote = False
    for i in range(k):
        if ag[i]:
            pivot = i
            break
    if pivot < 0:
        for i in range(k, n):
            if ag[i]:
                pivot = i
                promote = True
                break
    if pivot < 0:
        # P commutes with every generator row, so it lies in their span.
        gauge = -1
        for i in range(k, n):
            if ad[i]:
                gauge = i
                break
        if gauge < 0:
            # Deterministic: accumulate the phase of the active product.
            qpe = 0
            for w in range(W):
                qz[w] = np.uint64(0)
            for i in range(k):
                if ad[i]:
                    acc = np.uint64(0)
                    for w in range(W):
                        acc ^= qz[w] & sx[i, w]
                    qpe = (qpe + sp[i] + 2 * int(_pc64(acc) & _ONE)) & 3
                    for w in range(W):
                        qz[w] ^= sz[i, w]
            if ((ppe - qpe) % 4) == 0:
                return k, 0
            return k, 1
        # P involves a mixed direction: swap that gauge pair so its
        # generator row anticommutes with P, then fall through to the
        # random branch and promote the slot.
        for w in range(W):
            tx = sx[gauge, w]
            sx[gauge, w] = dx[gauge, w]
            dx[gauge, w] = tx
            tz = sz[gauge, w]
            sz[gauge, w] = dz[gauge, w]
            dz[gauge, w] = tz
        sp[gauge] = 0
        ag[gauge] = 1
        ad[gauge] = 0
        pivot = gauge
        promote = True

    # Random outcome: multiply every other row anticommuting with P by the
    # pivot generator, then install (outcome * P) at the pivot.
    for i in range(n):
        if i == pivot:
            continue
        if ag[i]:
            acc = np.uint64(0)
            for w in range(W):
                acc ^= sz[i, w] & sx[pivot, w]
            sp[i] = (sp[i] + sp[pivot] + 2 * int(_pc64(acc) & _ONE)) & 3
            for w in range(W):
                sx[i, w] ^= sx[pivot, w]
                sz[i, w] ^= sz[pivot, w]
        if ad[i]:
            for w in range(W):
                dx[i, w] ^= sx[pivot, w]
                dz[i, w] ^= sz[pivot, w]
    for w in range(W):
        dx[pivot, w] = sx[pivot, w]
        dz[pivot, w] = sz[pivot, w]
        sx[pivot, w] = px[w]
        sz[pivot, w] = pz[w]
    sp[pivot] = (ppe + 2 * rand_bit) & 3

    if promote:
        if pivot != k:
            for w in range(W):
                tx = sx[pivot, w]
                sx[pivot, w] = sx[k, w]
                sx[k, w] = tx
                tz = sz[pivot, w]
                sz[pivot, w] = sz[k, w]
                sz[k, w] = tz
                tx = dx[pivot, w]
                dx[pivot, w] = dx[k, w]
                dx[k, w] = tx
                tz = dz[pivot, w]
                dz[pivot, w] = dz[k, w]
                dz[k, w] = tz
            tp = sp[pivot]
            sp[pivot] = sp[k]
            sp[k] = tp
        k += 1
    return k, 2 + rand_bit


@njit(cache=True)
def expectation_op(sx, sz, sp, dx, dz, k, px, pz, ppe, qz):
    """Exact expectation of a Hermitian Pauli: -1, 0 or +1.  Read-only."""
    n = sx.shape[0]
    W = sx.shape[1]
    for i in range(n):
        acc = np.uint64(0)
        for w in range(W):
            acc ^= (sx[i, w] & pz[w]) ^ (sz[i, w] & px[w])
        if _pc64(acc) & _ONE:
            return 0
    qpe = 0
    for w in range(W):
        qz[w] = np.uint64(0)
    for i in range(n):
        acc = np.uint64(0)
        for w in range(W):
            acc ^= (dx[i, w] & pz[w]) ^ (dz[i, w] & px[w])
        if _pc64(acc) & _ONE:
            if i >= k:
                return 0
            acc = np.uint64(0)
            for w in range(W):
                acc ^= qz[w] & sx[i, w]
            qpe = (qpe + sp[i] + 2 * int(_pc64(acc) & _ONE)) & 3
            for w in range(W):
                qz[w] ^= sz[i, w]
    if ((ppe - qpe) % 4) == 0:
        return 1
    return -1


@njit(cache=True)
def rank_gf2(rows):
    """GF(2) rank of a packed bit matrix.  Destroys ``rows``."""
    m = rows.shape[0]
    cwords = rows.shape[1]
    rank = 0
    for col in range(cwords * 64):
        w = col >> 6
        bit = _ONE << np.uint64(col & 63)
        piv = -1
        for r in range(rank, m):
            if rows[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for ww in range(cwords):
                t = rows[piv, ww]
                rows[piv, ww] = rows[rank, ww]
                rows[rank, ww] = t
        for r in range(rank + 1, m):
            if rows[r, w] & bit:
                for ww in range(cwords):
                    rows[r, ww] ^= rows[rank, ww]
        rank += 1
        if rank == m:
            break
    return rank


@njit(inline="always")
def _set_bit(words, site):
    # site is 1-based
    words[(site - 1) >> 6] |= _ONE << np.uint64((site - 1) & 63)


@njit(cache=True)
def run_bulk(sx, sz, sp, dx, dz, k, L, center_noop,
             p_zz, dist_cum, u_type, u_center, u_dist, u_off, out_bits,
             p_b, probe_u, probe_b1, probe_b2,
             sample_at, sample_out):
    """Apply one batch of circuit steps.  Returns the new stabilizer count.

    Per step t: with probability ``p_zz`` measure Z_i Z_j on a power-law
    pair, else the cluster operator at a uniform center; if probe arrays are
    nonempty, additionally fire both edge probes with probability ``p_b``.
    ``sample_at`` (sorted step indices) records the full-system entropy n-k
    into ``sample_out`` before the indexed step (index == steps gives the
    final value).
    """
    n = L
    W = sx.shape[1]
    ag = np.empty(n, np.uint8)
    ad = np.empty(n, np.uint8)
    qz = np.empty(W, np.uint64)
    px = np.zeros(W, np.uint64)
    pz = np.zeros(W, np.uint64)
    steps = u_type.shape[0]
    nsamp = sample_at.shape[0]
    total = dist_cum[L - 2]
    si = 0
    for t in range(steps):
        while si < nsamp and sample_at[si] <= t:
            sample_out[si] = n - k
            si += 1
        for w in range(W):
            px[w] = np.uint64(0)
            pz[w] = np.uint64(0)
        if u_type[t] < p_zz:
            d = np.searchsorted(dist_cum, u_dist[t] * total, side="right") + 1
            if d > L - 1:
                d = L - 1
            m = L - d
            i = 1 + int(u_off[t] * m)
            if i > m:
                i = m
            _set_bit(pz, i)
            _set_bit(pz, i + d)
        else:
            if center_noop:
                c = 1 + int(u_center[t] * L)
                if c > L:
                    c = L
                if c == 1 or c == L:
                    continue
            else:
                c = 2 + int(u_center[t] * (L - 2))
                if c > L - 1:
                    c = L - 1
            _set_bit(pz, c - 1)
            _set_bit(pz, c + 1)
            _set_bit(px, c)
        k, _ = measure_op(sx, sz, sp, dx, dz, k, px, pz, 0, out_bits[t],
                          ag, ad, qz)
        if probe_u.shape[0] != 0 and probe_u[t] < p_b:
            for w in range(W):
                px[w] = np.uint64(0)
                pz[w] = np.uint64(0)
            _set_bit(px, 1)
            _set_bit(pz, 2)
            k, _ = measure_op(sx, sz, sp, dx, dz, k, px, pz, 0, probe_b1[t],
                              ag, ad, qz)
            for w in range(W):
                px[w] = np.uint64(0)
                pz[w] = np.uint64(0)
            _set_bit(pz, L - 1)
            _set_bit(px, L)
            k, _ = measure_op(sx, sz, sp, dx, dz, k, px, pz, 0, probe_b2[t],
                              ag, ad, qz)
    while si < nsamp:
        sample_out[si] = n - k
        si += 1
    return k
