"""Linear variational optimization over the reference + entangler subspace.

The ansatz state cos(tau)|Phi> - i sin(tau) sum_j alpha_j T_j|Phi> lives
in the span of {|Phi>, T_j|Phi>}, so the optimal (tau, alpha) follow from
one (N+1)-dimensional eigenproblem instead of a nonlinear search. The
basis carries -i factors on the entangler kets, implemented as an
element-wise phase mask on the raw matrix elements; this makes the
problem real symmetric whenever the Hamiltonian has real coefficients.

Basis-state references give an orthonormal subspace (every T_j flips at
least one qubit); product-state references need the generalized problem
with the overlap matrix built the same way.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ilcdress import kernels
from ilcdress.ansatz import IlcAnsatz
from ilcdress.bits import parse_bitstring
from ilcdress.errors import ContractError, DimensionError, ExtractionError
from ilcdress.meanfield import (
    HERMITIAN_ATOL,
    QmfState,
    optimize_qmf,
    product_state_expectation,
)
from ilcdress.pauli import PauliWord, SparsePauliOp, word_multiply

OVERLAP_COND_MAX = 1e12
SIN_TAU_MIN = 1e-10
SUBSPACE_HERMITICITY_ATOL = 1e-10


@dataclass(frozen=True)
class SubspaceProblem:
    hbar: np.ndarray
    sbar: np.ndarray
    reference: object  # bitmask or QmfState
    entanglers: tuple
    orthonormal: bool

    @property
    def size(self) -> int:
        return self.hbar.shape[0]


def _as_reference(ref, n_qubits: int):
    """Normalize to (bitmask, None) or (None, QmfState)."""
    if isinstance(ref, QmfState):
        if ref.n_qubits != n_qubits:
            raise DimensionError("reference qubit count mismatch")
        if ref.is_collinear():
            return ref.nearest_basis_state(), None
        return None, ref
    if isinstance(ref, str):
        mask, n = parse_bitstring(ref)
        if n != n_qubits:
            raise DimensionError("reference bitstring length mismatch")
        return mask, None
    mask = int(ref)
    if not (0 <= mask < (1 << n_qubits)):
        raise DimensionError("reference bitmask out of range")
    return mask, None


def _validate_entanglers(ents, n_qubits: int):
    for w in ents:
        if w.n_qubits != n_qubits:
            raise DimensionError("entangler qubit count mismatch")
        if w.y_count % 2 != 1:
            raise ContractError(f"entangler {w.label} has even y-count")
    for i in range(len(ents)):
        for j in range(i):
            if ents[i].commutes_with(ents[j]):
                raise ContractError(
                    f"entanglers {ents[i].label} and {ents[j].label} commute"
                )


def _sandwich_rows(h: SparsePauliOp, t1: PauliWord | None,
                   t2: PauliWord | None):
    """Raw (x, z, coeff) rows of t1*h*t2 without merging."""
    ident = np.zeros(h.x.shape[1], dtype=np.uint64)
    x1 = t1.x_limbs() if t1 is not None else ident
    z1 = t1.z_limbs() if t1 is not None else ident
    x2 = t2.x_limbs() if t2 is not None else ident
    z2 = t2.z_limbs() if t2 is not None else ident
    xc, zc, k = kernels.sandwich_term(h.x, h.z, x1, z1, x2, z2)
    return xc, zc, kernels.phase_apply(h.coeffs.copy(), k)


def build_subspace(h: SparsePauliOp, ref, ents) -> SubspaceProblem:
    """Masked matrices over the basis {|Phi>, -i T_j|Phi>}."""
    if not h.is_hermitian(HERMITIAN_ATOL):
        raise ContractError("subspace requires a Hermitian Hamiltonian")
    ents = tuple(ents)
    _validate_entanglers(ents, h.n_qubits)
    mask, qstate = _as_reference(ref, h.n_qubits)
    n = len(ents)
    dim = n + 1
    hbar = np.zeros((dim, dim), dtype=complex)
    sbar = np.eye(dim, dtype=complex)

    if qstate is None:
        from ilcdress import bits

        phi = bits.int_to_limbs(mask, bits.n_limbs(h.n_qubits))

        def expect(t1, t2):
            xc, zc, cc = _sandwich_rows(h, t1, t2)
            return kernels.diag_basis_sum(xc, zc, cc, phi)
    else:
        def expect(t1, t2):
            xc, zc, cc = _sandwich_rows(h, t1, t2)
            op = SparsePauliOp.from_arrays(h.n_qubits, xc, zc, cc, 0.0)
            return product_state_expectation(op, qstate)

    words = [None] + list(ents)
    for i in range(dim):
        for j in range(i, dim):
            hbar[i, j] = expect(words[i], words[j])
            if i != j:
                hbar[j, i] = np.conj(hbar[i, j])

    if qstate is not None:
        # overlap entries: <Phi|T_i T_j|Phi>, single-word products
        for j in range(1, dim):
            sbar[0, j] = _word_expectation(ents[j - 1], qstate)
            sbar[j, 0] = np.conj(sbar[0, j])
        for i in range(1, dim):
            for j in range(i + 1, dim):
                ph, w = word_multiply(ents[i - 1], ents[j - 1])
                val = ph.value * _word_expectation(w, qstate)
                sbar[i, j] = val
                sbar[j, i] = np.conj(val)

    # -i phases on entangler kets: mask row 0 by -i, column 0 by +i
    phase = np.ones(dim, dtype=complex)
    phase[1:] = -1j
    mask_m = np.outer(np.conj(phase), phase)
    hbar = hbar * mask_m
    sbar = sbar * mask_m
    if np.max(np.abs(hbar - hbar.conj().T)) > SUBSPACE_HERMITICITY_ATOL:
        raise ContractError("masked subspace matrix lost Hermiticity")
    return SubspaceProblem(hbar, sbar, ref, ents, orthonormal=qstate is None)


def _word_expectation(w: PauliWord, state: QmfState) -> complex:
    op = SparsePauliOp.from_arrays(
        w.n_qubits,
        w.x_limbs()[None, :].copy(),
        w.z_limbs()[None, :].copy(),
        np.array([1.0 + 0j]),
        0.0,
    )
    return product_state_expectation(op, state)


def _phase_fix(c: np.ndarray) -> np.ndarray:
    for v in c:
        if abs(v) > 1e-12:
            return c * (np.conj(v) / abs(v))
    return c


def solve_ground(p: SubspaceProblem):
    """(lowest energy, coefficient vector) of hbar c = E sbar c.

    c is normalized against sbar and phase-fixed so its first nonzero
    component is real positive. Ill-conditioned overlaps trigger a
    canonical-orthogonalization cut with a warning.
    """
    if p.orthonormal:
        vals, vecs = scipy.linalg.eigh(p.hbar)
        back = None
    else:
        s_vals, s_vecs = scipy.linalg.eigh(p.sbar)
        smax = float(s_vals[-1])
        if smax <= 0.0:
            raise ContractError("overlap matrix is not positive")
        keep = s_vals > smax / OVERLAP_COND_MAX
        if not np.all(keep):
            warnings.warn(
                f"overlap condition beyond {OVERLAP_COND_MAX:.0e}; "
                f"solving in a reduced subspace ({int(keep.sum())} of "
                f"{p.size} vectors)",
                stacklevel=2,
            )
        back = s_vecs[:, keep] / np.sqrt(s_vals[keep])
        vals, vecs = scipy.linalg.eigh(back.conj().T @ p.hbar @ back)

    ground = vals[0]
    close = np.nonzero(vals <= ground + 1e-12 * max(1.0, abs(ground)))[0]
    best = None
    for idx in close:
        c = vecs[:, idx]
        if back is not None:
            c = back @ c
        norm = np.sqrt(np.real(np.conj(c) @ p.sbar @ c))
        c = _phase_fix(c / norm)
        key = tuple(np.abs(c))
        if best is None or key < best[0]:
            best = (key, c)
    return float(ground), best[1]


def extract_parameters(c: np.ndarray):
    """(tau, alphas) from a subspace ground vector.

    tau = arccos(c0) after phase-fixing c0 real non-negative; alphas are
    the remaining components over sin(tau), renormalized to unit length.
    """
    c = np.asarray(c, dtype=complex)
    if abs(c[0]) > 1e-12:
        c = c * (np.conj(c[0]) / abs(c[0]))
    c0 = float(np.real(c[0]))
    if c0 > 1.0 + 1e-12:
        raise ContractError(f"reference coefficient {c0} exceeds 1")
    c0 = min(c0, 1.0)
    sin_tau = np.sqrt(max(0.0, 1.0 - c0 * c0))
    if sin_tau < SIN_TAU_MIN:
        raise ExtractionError(
            "reference-dominated solution: sin(tau) below "
            f"{SIN_TAU_MIN:.0e}, no entangler direction extractable"
        )
    tau = float(np.arccos(c0))
    raw = c[1:] / sin_tau
    if np.max(np.abs(np.imag(raw)), initial=0.0) > 1e-8:
        raise ExtractionError(
            "subspace coefficients have imaginary parts beyond 1e-8; "
            "the real linear-combination ansatz cannot represent them"
        )
    alphas = np.real(raw)
    norm = float(np.linalg.norm(alphas))
    if norm < 1e-12:
        raise ExtractionError("vanishing entangler amplitudes")
    return tau, alphas / norm


@dataclass(frozen=True)
class IlcOptResult:
    ansatz: IlcAnsatz
    energy: float
    reference: QmfState
    coefficients: np.ndarray
    n_outer: int
    converged: bool


def optimize_ilc(h: SparsePauliOp, ref, ents, relax_qmf: bool = False,
                 max_outer: int = 50, tol: float = 1e-9,
                 seed: int = 0) -> IlcOptResult:
    """Subspace-optimal ansatz, optionally with reference relaxation.

    Relaxation alternates the subspace solve with a Bloch-angle
    minimization of the dressed Hamiltonian (warm-started), stopping when
    the subspace energy settles within tol.
    """
    ents = tuple(ents)
    mask, qstate = _as_reference(ref, h.n_qubits)
    cur_ref = qstate if qstate is not None else QmfState.from_bitstring(
        mask, h.n_qubits
    )
    if not ents:
        e0 = float(np.real(product_state_expectation(h, cur_ref)))
        return IlcOptResult(
            IlcAnsatz.identity(), e0, cur_ref,
            np.array([1.0 + 0j]), 0, True,
        )

    if not relax_qmf:
        e, c = solve_ground(build_subspace(h, cur_ref, ents))
        tau, alphas = extract_parameters(c)
        return IlcOptResult(
            IlcAnsatz(ents, tau, alphas), e, cur_ref, c, 1, True,
        )

    from ilcdress.dressing import dress_ilc

    e_prev = None
    e, c = None, None
    converged = False
    outer = 0
    snap = None  # last iterate whose coefficients were representable
    for outer in range(1, max_outer + 1):
        e, c = solve_ground(build_subspace(h, cur_ref, ents))
        if e_prev is not None and abs(e - e_prev) < tol:
            converged = True
            break
        e_prev = e
        try:
            tau, alphas = extract_parameters(c)
        except ExtractionError:
            converged = True  # transformation is identity; nothing to relax
            break
        snap = (tau, alphas, cur_ref, float(e), c)
        dressed = dress_ilc(h, IlcAnsatz(ents, tau, alphas), "inverse")
        cur_ref = optimize_qmf(dressed, initial=cur_ref, seed=seed).state
    try:
        tau, alphas = extract_parameters(c)
        if snap is not None and snap[4] is c:
            # budget exhausted: pair the ansatz with the reference it
            # was solved at, not the one advanced afterwards
            cur_ref = snap[2]
    except ExtractionError:
        # a relaxed reference can push the optimal coefficients off the
        # real ansatz class; fall back to the last representable iterate
        if snap is None:
            raise
        tau, alphas, cur_ref, e, c = snap
    return IlcOptResult(
        IlcAnsatz(ents, tau, alphas), float(e), cur_ref, c, outer, converged,
    )
