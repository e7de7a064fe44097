"""Mutually anticommuting odd-y entangler sets via GF(2) linear algebra.

Given N flip vectors x^(k), we look for z-vectors z^(k) such that every
pair of words (x^(j), z^(j)), (x^(k), z^(k)) anticommutes and each word
has odd y-count. Both conditions are linear over GF(2) in the unknown
z bits:

    pair (j, k):  x^(k).z^(j) + x^(j).z^(k) = 1
    parity k:     x^(k).z^(k) = 1

which gives N(N+1)/2 equations in N*n_q unknowns, solved by Gaussian
elimination on bit-packed rows. Infeasibility is a normal outcome; the
set search walks down the partition ranking greedily before shrinking N.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ilcdress.bits import LIMB_BITS, int_to_limbs, n_limbs
from ilcdress.errors import ContractError, DimensionError, InfeasibleError
from ilcdress.pauli import PauliWord

MAX_SET_SIZE_FACTOR = "2*n_q - 1"


@dataclass(frozen=True)
class BinaryMatrix:
    """Row-major bit-packed GF(2) matrix."""

    rows: int
    cols: int
    bits: np.ndarray  # (rows, limbs) uint64, qubit/column c in limb c//64

    def __post_init__(self):
        limbs = n_limbs(self.cols) if self.cols else 1
        if self.bits.shape != (self.rows, limbs):
            raise DimensionError("bit storage does not match dimensions")

    def get(self, r: int, c: int) -> int:
        return int(self.bits[r, c // LIMB_BITS] >> np.uint64(c % LIMB_BITS)) & 1


@dataclass(frozen=True)
class AnticomRequest:
    x_vectors: tuple
    n_q: int

    def __post_init__(self):
        if not self.x_vectors:
            raise ContractError("need at least one flip vector")
        seen = set()
        for x in self.x_vectors:
            if x == 0:
                raise ContractError("flip vectors must be nonzero")
            if x >> self.n_q:
                raise DimensionError("flip vector exceeds qubit count")
            if x in seen:
                raise ContractError("flip vectors must be pairwise distinct")
            seen.add(x)


def build_constraint_matrix(req: AnticomRequest):
    """(matrix, rhs): N(N+1)/2 rows, N*n_q columns, rhs all ones.

    Variable block k holds z^(k); anticommutation rows come first (pairs
    (j, k), j < k, in row-major pair order), then the N parity rows.
    """
    xs = req.x_vectors
    n = len(xs)
    nq = req.n_q
    rows = n * (n + 1) // 2
    cols = n * nq
    limbs = n_limbs(cols) if cols else 1
    bits = np.zeros((rows, limbs), dtype=np.uint64)

    def set_block(row: int, block: int, value: int):
        big = value << (block * nq)
        bits[row] |= np.array(int_to_limbs(big, limbs), dtype=np.uint64)

    r = 0
    for j in range(n):
        for k in range(j + 1, n):
            set_block(r, j, xs[k])
            set_block(r, k, xs[j])
            r += 1
    for k in range(n):
        set_block(r, k, xs[k])
        r += 1
    rhs = np.ones(rows, dtype=np.uint64)
    return BinaryMatrix(rows, cols, bits), rhs


def solve_gf2(m: BinaryMatrix, rhs: np.ndarray):
    """One solution of m z = rhs over GF(2), or None if inconsistent.

    Free variables are set to zero. The returned assignment is verified
    by substitution before being handed back.
    """
    if rhs.shape != (m.rows,):
        raise DimensionError("rhs length does not match rows")
    work = m.bits.copy()
    b = np.asarray(rhs, dtype=np.uint64).copy()
    pivot_of_col = {}
    row = 0
    for col in range(m.cols):
        if row >= m.rows:
            break
        limb, bit = col // LIMB_BITS, np.uint64(col % LIMB_BITS)
        hit = np.nonzero((work[row:, limb] >> bit) & np.uint64(1))[0]
        if hit.size == 0:
            continue
        piv = row + int(hit[0])
        if piv != row:
            work[[row, piv]] = work[[piv, row]]
            b[[row, piv]] = b[[piv, row]]
        # eliminate everywhere else for direct read-off
        mask = ((work[:, limb] >> bit) & np.uint64(1)).astype(bool)
        mask[row] = False
        work[mask] ^= work[row]
        b[mask] ^= b[row]
        pivot_of_col[col] = row
        row += 1
    # inconsistent rows: all-zero coefficients with rhs 1
    zero_rows = ~np.any(work, axis=1)
    if np.any(b[zero_rows] & np.uint64(1)):
        return None
    solution = 0
    for col, r in pivot_of_col.items():
        if b[r] & np.uint64(1):
            solution |= 1 << col
    if not _verify(m, rhs, solution):  # pragma: no cover - indexing bug trap
        raise AssertionError("GF(2) solution failed substitution")
    return solution


def _verify(m: BinaryMatrix, rhs, solution: int) -> bool:
    limbs = m.bits.shape[1]
    sol = np.array(int_to_limbs(solution, limbs), dtype=np.uint64)
    dots = np.bitwise_count(m.bits & sol[None, :]).sum(axis=1)
    return bool(np.all((dots & 1) == (np.asarray(rhs) & np.uint64(1))))


def solve_for_words(x_vectors, n_q: int):
    """Anticommuting odd-y words for the given flips, or None."""
    req = AnticomRequest(tuple(x_vectors), n_q)
    matrix, rhs = build_constraint_matrix(req)
    sol = solve_gf2(matrix, rhs)
    if sol is None:
        return None
    words = []
    mask = (1 << n_q) - 1
    for k, x in enumerate(req.x_vectors):
        z = (sol >> (k * n_q)) & mask
        words.append(PauliWord(n_q, x, z))
    _assert_valid_set(words)
    return words


def _assert_valid_set(words):  # pragma: no cover - solver bug trap
    for w in words:
        if w.y_count % 2 != 1:
            raise AssertionError("entangler lost odd y-parity")
    for a, b in combinations(words, 2):
        if a.commutes_with(b):
            raise AssertionError("entangler pair commutes")


def find_anticommuting_set(partitions, n_select: int,
                           brute_force: bool = False,
                           max_combinations: int = 20000):
    """N pairwise-anticommuting odd-y words, one per DIS partition.

    Top-ranked partitions are preferred. On infeasibility the lowest-
    gradient selected partition is swapped for the next candidate; when
    candidates run out the set size shrinks. brute_force additionally
    tries partition combinations (rank-lexicographic, capped by
    max_combinations) before shrinking.

    Returns (words, partitions used). Raises InfeasibleError when even
    a single-word set cannot be formed.
    """
    if not partitions:
        raise InfeasibleError("no DIS partitions available", tried=[])
    n_q = partitions[0].representative.n_qubits
    if n_select < 1:
        raise ContractError("set size must be >= 1")
    if n_select > 2 * n_q - 1:
        raise ContractError(
            f"set size {n_select} exceeds the {MAX_SET_SIZE_FACTOR} bound "
            f"({2 * n_q - 1} for {n_q} qubits)"
        )
    tried = []
    for target in range(min(n_select, len(partitions)), 0, -1):
        selected = list(partitions[:target])
        pool = list(partitions[target:])
        while True:
            flips = [p.flip_x for p in selected]
            words = solve_for_words(flips, n_q)
            if words is not None:
                return words, list(selected)
            tried.append(tuple(flips))
            if not pool:
                break
            selected[-1] = pool.pop(0)
        if brute_force and len(partitions) > target:
            budget = max_combinations
            for combo in combinations(range(len(partitions)), target):
                budget -= 1
                if budget < 0:
                    break
                chosen = [partitions[i] for i in combo]
                flips = [p.flip_x for p in chosen]
                if tuple(flips) in tried:
                    continue
                words = solve_for_words(flips, n_q)
                if words is not None:
                    return words, chosen
                tried.append(tuple(flips))
    raise InfeasibleError(
        f"no anticommuting set found down to size 1 "
        f"({len(tried)} candidate selections tried)",
        tried=tried,
    )
