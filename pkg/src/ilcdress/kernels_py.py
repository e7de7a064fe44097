"""Pure-numpy kernel backend.

Terms are (T, L) uint64 x/z bit matrices plus a (T,) complex128 coefficient
vector; words are (L,) uint64 pairs.  The compiled backend in _speedups.pyx
implements the same seven functions; ilcdress.kernels picks one at import.

Phase bookkeeping: a Pauli word is stored as its symplectic pair (x, z) and
understood as the Hermitian operator i^{y(w)} X^x Z^z with y(w) = |x & z|.
For a product a*b = i^k * c with c = (xa^xb, za^zb),

    k = (y(a) + y(b) - y(c) + 2*|za & xb|) mod 4

which is exact integer arithmetic, never floating point.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

# i^k lookup; multiplying complex128 by these exact constants is lossless
# (products against 0.0/±1.0 only).
_PHASES = np.array([1.0 + 0.0j, 0.0 + 1.0j, -1.0 + 0.0j, 0.0 - 1.0j])


def row_popcount(bits: np.ndarray) -> np.ndarray:
    """Per-row popcount of a (T, L) uint64 matrix -> (T,) int64."""
    if bits.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.bitwise_count(bits).sum(axis=1, dtype=np.int64)


def _word_popcount(w: np.ndarray) -> int:
    return int(np.bitwise_count(w).sum())


def mul_term_word(x, z, wx, wz, side):
    """Multiply every term by word w: side 'left' -> w*P, 'right' -> P*w.

    Returns (xc, zc, k) with k the (T,) uint8 i-exponent array.
    """
    xc = np.bitwise_xor(x, wx[None, :])
    zc = np.bitwise_xor(z, wz[None, :])
    ya = row_popcount(np.bitwise_and(x, z))
    yw = _word_popcount(np.bitwise_and(wx, wz))
    yc = row_popcount(np.bitwise_and(xc, zc))
    if side == "left":
        cross = row_popcount(np.bitwise_and(wz[None, :], x))
    elif side == "right":
        cross = row_popcount(np.bitwise_and(z, wx[None, :]))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    k = (ya + yw - yc + 2 * cross) % 4
    return xc, zc, k.astype(np.uint8)


def sandwich_term(x, z, w1x, w1z, w2x, w2z):
    """w1 * P * w2 for every term P. Returns (xc, zc, k)."""
    xm, zm, k1 = mul_term_word(x, z, w1x, w1z, "left")
    xc, zc, k2 = mul_term_word(xm, zm, w2x, w2z, "right")
    return xc, zc, ((k1.astype(np.int64) + k2) % 4).astype(np.uint8)


def anticommute_mask(x, z, wx, wz) -> np.ndarray:
    """Boolean (T,) mask of terms that anticommute with word w."""
    cross = row_popcount(np.bitwise_and(x, wz[None, :]))
    cross += row_popcount(np.bitwise_and(z, wx[None, :]))
    return (cross & 1).astype(bool)


def phase_apply(c: np.ndarray, k: np.ndarray) -> np.ndarray:
    """c * i^k, exact for the real/imag slots (no rounding introduced)."""
    return c * _PHASES[k]


def _sort_perm(x, z):
    # np.lexsort: last key is primary. Canonical order is ascending
    # (x_int, z_int) with limb L-1 most significant.
    keys = [z[:, j] for j in range(z.shape[1])]
    keys += [x[:, j] for j in range(x.shape[1])]
    return np.lexsort(tuple(keys))


def merge_canonical(x, z, c, threshold: float):
    """Sort rows canonically, combine duplicates, drop |coeff| <= threshold."""
    t = x.shape[0]
    if t == 0:
        return x.copy(), z.copy(), c.copy()
    perm = _sort_perm(x, z)
    xs, zs, cs = x[perm], z[perm], c[perm]
    row_changed = np.any(xs[1:] != xs[:-1], axis=1) | np.any(
        zs[1:] != zs[:-1], axis=1
    )
    starts = np.concatenate(([0], np.flatnonzero(row_changed) + 1))
    sums = np.add.reduceat(cs, starts)
    # squared-magnitude comparison: keeps both backends bit-identical
    keep = sums.real**2 + sums.imag**2 > threshold * threshold
    return xs[starts[keep]], zs[starts[keep]], sums[keep]


def diag_basis_sum(x, z, c, phi) -> complex:
    """<phi| op |phi> for a computational basis state phi ((L,) uint64)."""
    if x.shape[0] == 0:
        return 0.0 + 0.0j
    diag = row_popcount(x) == 0
    if not diag.any():
        return 0.0 + 0.0j
    par = row_popcount(np.bitwise_and(z[diag], phi[None, :])) & 1
    signs = 1.0 - 2.0 * par
    return complex(np.sum(c[diag] * signs))
