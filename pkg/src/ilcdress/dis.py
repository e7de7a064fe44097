"""Direct interaction set: flip-index partitions and gradient ranking.

Hamiltonian terms are grouped by their x-vector (the set of qubits the
term flips). Every odd-y word sharing a flip vector has the same energy
gradient magnitude against a basis reference, so one representative per
partition is enough to rank them. Representatives put a single Y at the
lowest set flip bit and X everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ilcdress.errors import ContractError, DimensionError
from ilcdress.meanfield import QmfState, basis_expectation, product_state_expectation
from ilcdress.pauli import PauliWord, SparsePauliOp, commutator_with_word

GRADIENT_CUTOFF = 1e-12


@dataclass(frozen=True)
class DisPartition:
    flip_x: int
    gradient_magnitude: float
    representative: PauliWord

    def __post_init__(self):
        if self.flip_x == 0:
            raise ContractError("partition flip vector must be nonzero")
        if self.representative.x_bits != self.flip_x:
            raise ContractError("representative does not match flip vector")

    @property
    def weight(self) -> int:
        return bin(self.flip_x).count("1")


def representative(flip_x: int, n_qubits: int) -> PauliWord:
    """Y at the lowest set flip bit, X on the rest, no Z factors."""
    if flip_x == 0:
        raise ContractError("flip vector must be nonzero")
    if flip_x >> n_qubits:
        raise DimensionError("flip vector exceeds qubit count")
    low = flip_x & -flip_x
    return PauliWord(n_qubits, flip_x, low)


def _reference_expectation(op: SparsePauliOp, phi) -> complex:
    if isinstance(phi, QmfState):
        return product_state_expectation(op, phi)
    return basis_expectation(op, _as_mask(phi, op.n_qubits))


def _as_mask(phi, n_qubits: int) -> int:
    if isinstance(phi, str):
        from ilcdress.bits import parse_bitstring

        mask, n = parse_bitstring(phi)
        if n != n_qubits:
            raise DimensionError("bitstring length does not match qubits")
        return mask
    mask = int(phi)
    if not (0 <= mask < (1 << n_qubits)):
        raise DimensionError("reference bitmask out of range")
    return mask


def gradient(h: SparsePauliOp, t: PauliWord, phi) -> float:
    """-(i/2) <phi|[h, t]|phi>; real for Hermitian h.

    phi: basis bitmask, bitstring text, or QmfState.
    """
    if t.n_qubits != h.n_qubits:
        raise DimensionError("entangler qubit count mismatch")
    comm = commutator_with_word(h, t)
    return float(np.real(-0.5j * _reference_expectation(comm, phi)))


def build_dis(h: SparsePauliOp, phi, min_weight: int = 1) -> list[DisPartition]:
    """Ranked partitions: descending |gradient|, ties by lexicographic
    flip vector (qubit 0 first). Zero-gradient partitions are dropped.

    min_weight filters flip vectors touching fewer qubits (single-qubit
    flips are valid DIS members but configurable out of ansatz use).
    """
    n = h.n_qubits
    flips = set()
    for k in range(h.n_terms):
        x = 0
        for limb in range(h.x.shape[1] - 1, -1, -1):
            x = (x << 64) | int(h.x[k, limb])
        if x and bin(x).count("1") >= min_weight:
            flips.add(x)
    parts = []
    for flip in flips:
        rep = representative(flip, n)
        g = gradient(h, rep, phi)
        if abs(g) <= GRADIENT_CUTOFF:
            continue
        parts.append(DisPartition(flip, abs(g), rep))
    parts.sort(key=lambda p: (-p.gradient_magnitude, _lex_key(p.flip_x, n)))
    return parts


def _lex_key(flip: int, n: int):
    return tuple((flip >> k) & 1 for k in range(n))


def expand_entanglers(partitions, m: int) -> list[PauliWord]:
    """First min(m, n_p) representatives, then X->Y pair substitutions.

    Substituted words keep the parent's flip vector and odd y-count.
    Enumeration order: substitution rounds of growing pair count; parents
    in rank order within a round; position pairs lexicographic within a
    parent. Exhaustion returns fewer than m words.
    """
    if m < 1:
        raise ContractError("entangler count must be >= 1")
    out = [p.representative for p in partitions[:m]]
    if len(out) >= m:
        return out[:m]
    x_positions = []
    for p in partitions:
        pos = [k for k in range(p.representative.n_qubits)
               if (p.flip_x >> k) & 1]
        x_positions.append(pos[1:])  # lowest bit already carries the Y
    max_pairs = max((len(pos) // 2 for pos in x_positions), default=0)
    for n_pairs in range(1, max_pairs + 1):
        for p, pos in zip(partitions, x_positions):
            if len(pos) < 2 * n_pairs:
                continue
            for combo in combinations(pos, 2 * n_pairs):
                z = p.representative.z_bits
                for k in combo:
                    z |= 1 << k
                out.append(PauliWord(p.representative.n_qubits, p.flip_x, z))
                if len(out) == m:
                    return out
    return out
