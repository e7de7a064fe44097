"""Bit-vector plumbing: Python ints <-> packed uint64 limb arrays.

Convention used everywhere: qubit k is bit k, so limb j holds qubits
[64*j, 64*j+63] and qubit 0 is the least significant bit of limb 0.
Bitstring text is written qubit 0 first (leftmost character).
"""

from __future__ import annotations

import numpy as np

LIMB_BITS = 64
_MASK64 = (1 << 64) - 1


def n_limbs(n_qubits: int) -> int:
    return (n_qubits + LIMB_BITS - 1) // LIMB_BITS


def int_to_limbs(value: int, nl: int) -> np.ndarray:
    """Pack a nonnegative int into an (nl,) uint64 array, low limb first."""
    out = np.zeros(nl, dtype=np.uint64)
    for j in range(nl):
        out[j] = (value >> (LIMB_BITS * j)) & _MASK64
    return out

def limbs_to_int(limbs: np.ndarray) -> int:
    value = 0
    for j, limb in enumerate(limbs):
        value |= int(limb) << (LIMB_BITS * j)
    return value


def ints_to_limb_rows(values, nl: int) -> np.ndarray:
    """Pack a sequence of ints into a (T, nl) uint64 array."""
    out = np.zeros((len(values), nl), dtype=np.uint64)
    for i, v in enumerate(values):
        for j in range(nl):
            out[i, j] = (v >> (LIMB_BITS * j)) & _MASK64
    return out


def limb_rows_to_ints(rows: np.ndarray) -> list[int]:
    return [limbs_to_int(rows[i]) for i in range(rows.shape[0])]


def parse_bitstring(text: str) -> tuple[int, int]:
    """Parse '0110...' (qubit 0 leftmost) -> (bits, n_qubits)."""
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"not a bitstring: {text!r}")
    bits = 0
    for k, c in enumerate(text):
        if c == "1":
            bits |= 1 << k
    return bits, len(text)


def format_bitstring(bits: int, n_qubits: int) -> str:
    """Inverse of parse_bitstring."""
    return "".join("1" if (bits >> k) & 1 else "0" for k in range(n_qubits))


def iter_set_bits(value: int):
    """Yield set bit positions of a nonnegative int, ascending."""
    k = 0
    while value:
        if value & 1:
            yield k
        value >>= 1
        k += 1
