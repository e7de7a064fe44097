"""Dense statevector oracle: exact energies, unitaries, and VQE loops.

Index convention matches the rest of the package: basis index bit k is
qubit k. A Pauli word acts as

    P |b> = i^y (-1)^{|z & b|} |b ^ x>

which gives permutation+phase application without building matrices.
Intended for verification and small systems; capped at 24 qubits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from scipy.optimize import minimize

from ilcdress.errors import ContractError, ConvergenceError, DimensionError
from ilcdress.meanfield import HERMITIAN_ATOL, QmfState
from ilcdress.pauli import PauliWord, SparsePauliOp

MAX_STATEVECTOR_QUBITS = 20
DENSE_EIG_MAX = 12
# lowest-eigenpair queries switch to Lanczos earlier: full dense eigh with
# eigenvectors at 12 qubits costs minutes, the matrix-free path seconds
GROUND_DENSE_MAX = 10
ITERATIVE_EIG_MAX = 20
RESIDUAL_TOL = 1e-9
EXPECTATION_IMAG_TOL = 1e-9


def _check_size(n_qubits: int):
    if n_qubits > MAX_STATEVECTOR_QUBITS:
        raise ContractError(
            f"statevector path capped at {MAX_STATEVECTOR_QUBITS} qubits, "
            f"got {n_qubits}"
        )


def _signs_cache(n_qubits: int):
    return np.arange(1 << n_qubits, dtype=np.uint64)


def prepare_basis_state(bitmask: int, n_qubits: int) -> np.ndarray:
    _check_size(n_qubits)
    if not (0 <= bitmask < (1 << n_qubits)):
        raise DimensionError("bitmask out of range")
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[bitmask] = 1.0
    return psi


def prepare_qmf(state: QmfState) -> np.ndarray:
    _check_size(state.n_qubits)
    return state.statevector()


def apply_word(psi: np.ndarray, word: PauliWord) -> np.ndarray:
    """P |psi>."""
    n = word.n_qubits
    if psi.shape != (1 << n,):
        raise DimensionError("statevector length does not match word")
    idx = _signs_cache(n)
    signs = 1.0 - 2.0 * (
        np.bitwise_count(idx & np.uint64(word.z_bits)) & np.uint64(1)
    ).astype(float)
    phase = (1 + 0j, 1j, -1 + 0j, -1j)[word.y_count % 4]
    out = np.empty_like(psi)
    out[idx ^ np.uint64(word.x_bits)] = phase * signs * psi
    return out


def apply_op(psi: np.ndarray, op: SparsePauliOp) -> np.ndarray:
    """op |psi> as a sum over term applications."""
    n = op.n_qubits
    if psi.shape != (1 << n,):
        raise DimensionError("statevector length does not match operator")
    out = np.zeros_like(psi)
    for coeff, word in op.terms():
        out += coeff * apply_word(psi, word)
    return out


def apply_pauli_exp(psi: np.ndarray, word: PauliWord, angle: float) -> np.ndarray:
    """exp(-i * angle/2 * P) |psi> = cos(a/2) psi - i sin(a/2) P psi."""
    half = 0.5 * angle
    return np.cos(half) * psi - 1j * np.sin(half) * apply_word(psi, word)


def expectation(psi: np.ndarray, op: SparsePauliOp) -> float:
    """<psi|op|psi> for Hermitian op; imaginary residual is checked."""
    val = complex(np.vdot(psi, apply_op(psi, op)))
    if abs(val.imag) >= EXPECTATION_IMAG_TOL:
        raise ContractError(
            f"expectation has imaginary residual {val.imag:.2e}; "
            "operator is not Hermitian"
        )
    return val.real


def overlap(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))


def to_dense(op: SparsePauliOp) -> np.ndarray:
    """Dense matrix; use only for small operators."""
    n = op.n_qubits
    if n > DENSE_EIG_MAX:
        raise ContractError(f"dense matrix capped at {DENSE_EIG_MAX} qubits")
    dim = 1 << n
    idx = _signs_cache(n)
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, word in op.terms():
        signs = 1.0 - 2.0 * (
            np.bitwise_count(idx & np.uint64(word.z_bits)) & np.uint64(1)
        ).astype(float)
        phase = (1 + 0j, 1j, -1 + 0j, -1j)[word.y_count % 4]
        out[idx ^ np.uint64(word.x_bits), idx] += coeff * phase * signs
    return out


def ground_state(op: SparsePauliOp, dense_cutoff: int = GROUND_DENSE_MAX):
    """(energy, statevector) of the lowest eigenpair.

    Dense diagonalization up to dense_cutoff qubits, then matrix-free
    Lanczos up to 20; the Lanczos result must pass a residual check.
    """
    if not op.is_hermitian(HERMITIAN_ATOL):
        raise ContractError("ground_state requires a Hermitian operator")
    n = op.n_qubits
    if op.n_terms == 0:
        return 0.0, prepare_basis_state(0, n)
    if n <= dense_cutoff:
        vals, vecs = scipy.linalg.eigh(to_dense(op))
        return float(vals[0]), np.ascontiguousarray(vecs[:, 0])
    if n > ITERATIVE_EIG_MAX:
        raise ContractError(
            f"ground_state capped at {ITERATIVE_EIG_MAX} qubits, got {n}"
        )
    dim = 1 << n
    linop = scipy.sparse.linalg.LinearOperator(
        (dim, dim), matvec=lambda v: apply_op(v.astype(complex), op),
        dtype=complex,
    )
    vals, vecs = scipy.sparse.linalg.eigsh(
        linop, k=1, which="SA", maxiter=2000, tol=1e-12
    )
    energy, psi = float(vals[0]), vecs[:, 0].astype(complex)
    residual = np.linalg.norm(apply_op(psi, op) - energy * psi)
    if residual >= RESIDUAL_TOL:
        raise ConvergenceError(
            f"Lanczos residual {residual:.2e} above {RESIDUAL_TOL}"
        )
    return energy, psi


def eigenvalues(op: SparsePauliOp, k: int | None = None) -> np.ndarray:
    """Lowest-k (or all, small systems) eigenvalues, ascending."""
    if not op.is_hermitian(HERMITIAN_ATOL):
        raise ContractError("eigenvalues requires a Hermitian operator")
    n = op.n_qubits
    if n <= DENSE_EIG_MAX:
        vals = np.linalg.eigvalsh(to_dense(op))
        return vals if k is None else vals[:k]
    if k is None:
        raise ContractError(
            f"full spectrum needs <= {DENSE_EIG_MAX} qubits; pass k"
        )
    if n > ITERATIVE_EIG_MAX:
        raise ContractError(
            f"eigenvalues capped at {ITERATIVE_EIG_MAX} qubits, got {n}"
        )
    dim = 1 << n
    linop = scipy.sparse.linalg.LinearOperator(
        (dim, dim), matvec=lambda v: apply_op(v.astype(complex), op),
        dtype=complex,
    )
    vals = scipy.sparse.linalg.eigsh(
        linop, k=k, which="SA", maxiter=2000, tol=1e-12,
        return_eigenvectors=False,
    )
    return np.sort(vals)


# -- single-exponential product ansatz ---------------------------------


def apply_qcc_unitary(psi: np.ndarray, entanglers, taus) -> np.ndarray:
    """prod_k exp(-i tau_k P_k / 2) |psi>, entanglers[0] applied first."""
    if len(entanglers) != len(taus):
        raise DimensionError("need one amplitude per entangler")
    out = psi
    for word, tau in zip(entanglers, taus):
        out = apply_pauli_exp(out, word, tau)
    return out


def _as_statevector(reference, n_qubits: int) -> np.ndarray:
    if isinstance(reference, QmfState):
        if reference.n_qubits != n_qubits:
            raise DimensionError("reference qubit count mismatch")
        return reference.statevector()
    if isinstance(reference, (int, np.integer)):
        return prepare_basis_state(int(reference), n_qubits)
    psi = np.asarray(reference, dtype=complex)
    if psi.shape != (1 << n_qubits,):
        raise DimensionError("reference statevector length mismatch")
    return psi


def qcc_energy(h: SparsePauliOp, entanglers, taus, reference) -> float:
    """Energy of prod_k exp(-i tau_k T_k/2)|ref>; ref may be a QmfState,
    a basis bitmask, or a statevector."""
    psi0 = _as_statevector(reference, h.n_qubits)
    psi = apply_qcc_unitary(psi0, entanglers, taus)
    return float(np.real(np.vdot(psi, apply_op(psi, h))))


def _qcc_energy_gradient(h, entanglers, taus, ref: QmfState,
                         with_reference: bool):
    """Adjoint-method gradients for the QCC energy.

    Returns (energy, dE/dtaus, dE/dthetas, dE/dphis); the angle gradients
    are zero arrays when with_reference is False.
    """
    n = h.n_qubits
    psi0 = ref.statevector()
    psi = apply_qcc_unitary(psi0, entanglers, list(taus))
    lam = apply_op(psi, h)
    energy = float(np.real(np.vdot(psi, lam)))
    m = len(entanglers)
    grad_t = np.zeros(m)
    cur_psi, cur_lam = psi, lam
    for k in range(m - 1, -1, -1):
        word = entanglers[k]
        # <lam_k | -i/2 P_k | psi_k>, both vectors carried at step k
        grad_t[k] = 2.0 * float(
            np.real(np.vdot(cur_lam, -0.5j * apply_word(cur_psi, word)))
        )
        cur_psi = apply_pauli_exp(cur_psi, word, -taus[k])
        cur_lam = apply_pauli_exp(cur_lam, word, -taus[k])
    grad_theta = np.zeros(n)
    grad_phi = np.zeros(n)
    if with_reference:
        # cur_lam is now U^dag H U |psi0>
        for q in range(n):
            for which in ("theta", "phi"):
                dpsi = _qmf_partial(ref, q, which)
                g = 2.0 * float(np.real(np.vdot(cur_lam, dpsi)))
                if which == "theta":
                    grad_theta[q] = g
                else:
                    grad_phi[q] = g
    return energy, grad_t, grad_theta, grad_phi


def _qmf_partial(state: QmfState, qubit: int, which: str) -> np.ndarray:
    """Derivative of the product state w.r.t. one Bloch angle."""
    psi = np.array([1.0 + 0.0j])
    for k in range(state.n_qubits):
        t, p = state.thetas[k], state.phis[k]
        if k == qubit and which == "theta":
            amp = np.array(
                [-0.5 * np.sin(t / 2), 0.5 * np.exp(1j * p) * np.cos(t / 2)]
            )
        elif k == qubit and which == "phi":
            amp = np.array([0.0, 1j * np.exp(1j * p) * np.sin(t / 2)])
        else:
            amp = np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)])
        psi = (amp[None, :] * psi[:, None]).reshape(-1, order="F")
    return psi


@dataclass(frozen=True)
class QccOptResult:
    taus: np.ndarray
    reference: QmfState
    energy: float
    converged: bool
    n_iterations: int


def optimize_qcc(h: SparsePauliOp, entanglers, reference,
                 taus0=None, optimize_reference: bool = True,
                 gtol: float = 1e-8, maxiter: int = 1000,
                 restarts: int = 0, seed: int = 0) -> QccOptResult:
    """Minimize <ref| U^dag H U |ref> over amplitudes (and Bloch angles).

    reference: QmfState or basis-state bitmask. entanglers[0] acts on the
    reference first. Gradients are analytic (adjoint method). The result
    never exceeds the initial energy; extra restarts perturb the start.
    """
    if not h.is_hermitian(HERMITIAN_ATOL):
        raise ContractError("optimize_qcc requires a Hermitian operator")
    _check_size(h.n_qubits)
    n = h.n_qubits
    if isinstance(reference, (int, np.integer)):
        reference = QmfState.from_bitstring(int(reference), n)
    if reference.n_qubits != n:
        raise DimensionError("reference qubit count mismatch")
    for w in entanglers:
        if w.n_qubits != n:
            raise DimensionError("entangler qubit count mismatch")
    m = len(entanglers)
    taus0 = np.zeros(m) if taus0 is None else np.asarray(taus0, dtype=float)
    if taus0.shape != (m,):
        raise DimensionError("taus0 length does not match entanglers")

    if optimize_reference:
        x0 = np.concatenate([taus0, reference.thetas, reference.phis])
    else:
        x0 = taus0.copy()

    def unpack(x):
        if optimize_reference:
            return x[:m], QmfState(x[m:m + n], x[m + n:])
        return x, reference

    def objective(x):
        taus, ref = unpack(x)
        e, gt, gth, gph = _qcc_energy_gradient(
            h, entanglers, taus, ref, optimize_reference
        )
        if optimize_reference:
            return e, np.concatenate([gt, gth, gph])
        return e, gt

    e0, _ = objective(x0)
    rng = np.random.default_rng([seed, 0x9E3779B9])
    best = None
    total_nit = 0
    for trial in range(restarts + 1):
        start = x0 if trial == 0 else x0 + rng.normal(0.0, 0.1, x0.shape)
        res = minimize(
            objective, start, jac=True, method="L-BFGS-B",
            options={"maxiter": maxiter, "gtol": gtol, "ftol": 1e-15},
        )
        total_nit += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    if best.fun > e0:
        taus, ref = unpack(x0)
        return QccOptResult(
            taus=np.array(taus, dtype=float), reference=ref, energy=float(e0),
            converged=False, n_iterations=total_nit,
        )
    taus, ref = unpack(best.x)
    _, gt, gth, gph = _qcc_energy_gradient(
        h, entanglers, taus, ref, optimize_reference
    )
    gnorm = float(np.max(np.abs(np.concatenate([gt, gth, gph])), initial=0.0))
    return QccOptResult(
        taus=np.array(taus, dtype=float), reference=ref,
        energy=float(best.fun),
        converged=bool(best.success or gnorm <= gtol),
        n_iterations=total_nit,
    )
