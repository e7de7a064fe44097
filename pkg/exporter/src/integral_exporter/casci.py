"""Determinant-basis CASCI used as the energy oracle for exports.

Spin-summed excitation operators E_pq are built over (alpha, beta)
occupation-mask pairs, then H = e_core + sum h_pq E_pq
+ 1/2 sum (pq|rs) (E_pq E_rs - delta_qr E_ps).
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _strings(n_orb: int, n_el: int):
    return [sum(1 << i for i in c) for c in combinations(range(n_orb), n_el)]


def _excite(mask: int, p: int, q: int):
    """a+_p a_q |mask>; returns (new_mask, sign) or None."""
    if not (mask >> q) & 1:
        return None
    sign = 1 - 2 * (bin(mask & ((1 << q) - 1)).count("1") & 1)
    mask ^= 1 << q
    if (mask >> p) & 1:
        return None
    sign *= 1 - 2 * (bin(mask & ((1 << p) - 1)).count("1") & 1)
    return mask | (1 << p), sign


def casci_ground(e_core: float, h: np.ndarray, g: np.ndarray,
                 n_electrons: int, ms2: int = 0, k: int = 1):
    """Lowest k eigenvalues of the active-space Hamiltonian.

    Determinants carry fixed (n_alpha, n_beta) from n_electrons and ms2.
    """
    n = h.shape[0]
    n_a = (n_electrons + ms2) // 2
    n_b = (n_electrons - ms2) // 2
    if n_a < 0 or n_b < 0 or n_a > n or n_b > n or n_a + n_b != n_electrons:
        raise ValueError("inconsistent electron count / ms2 for the space")
    astr = _strings(n, n_a)
    bstr = _strings(n, n_b)
    aidx = {s: i for i, s in enumerate(astr)}
    bidx = {s: i for i, s in enumerate(bstr)}
    na, nb = len(astr), len(bstr)
    dim = na * nb

    e_ops = np.zeros((n, n, dim, dim))
    for p in range(n):
        for q in range(n):
            epq = e_ops[p, q]
            for ia, sa in enumerate(astr):
                hop = _excite(sa, p, q)
                if hop is None:
                    continue
                ja = aidx[hop[0]]
                for ib in range(nb):
                    epq[ja * nb + ib, ia * nb + ib] += hop[1]
            for ib, sb in enumerate(bstr):
                hop = _excite(sb, p, q)
                if hop is None:
                    continue
                jb = bidx[hop[0]]
                for ia in range(na):
                    epq[ia * nb + jb, ia * nb + ib] += hop[1]

    ham = np.zeros((dim, dim))
    for p in range(n):
        for q in range(n):
            ham += h[p, q] * e_ops[p, q]
    for p in range(n):
        for q in range(n):
            gpq = np.einsum("rs,rsij->ij", g[p, q], e_ops)
            ham += 0.5 * (e_ops[p, q] @ gpq)
            ham -= 0.5 * np.einsum("s,sij->ij", g[p, q, q], e_ops[p])
    vals = np.linalg.eigvalsh(ham)
    return vals[:k] + e_core
