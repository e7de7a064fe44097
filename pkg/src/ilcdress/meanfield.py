"""Unentangled product ("mean-field") states and their optimization.

A state is a list of Bloch angles per qubit:

    |Omega> = prod_k [ cos(theta_k/2)|0> + e^{i phi_k} sin(theta_k/2)|1> ]

Pauli expectations factorize per qubit (X -> sin t cos p, Y -> sin t sin p,
Z -> cos t), which gives closed-form energies and analytic gradients; the
optimizer is plain L-BFGS-B over the angle vector with seeded restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ilcdress import bits, kernels
from ilcdress.errors import ContractError, DimensionError
from ilcdress.pauli import SparsePauliOp

HERMITIAN_ATOL = 1e-10


@dataclass(frozen=True)
class QmfState:
    """Bloch angles; arrays are copied and frozen on construction."""

    thetas: np.ndarray
    phis: np.ndarray

    def __post_init__(self):
        t = np.array(self.thetas, dtype=float)
        p = np.array(self.phis, dtype=float)
        if t.ndim != 1 or t.shape != p.shape or t.shape[0] == 0:
            raise DimensionError("thetas and phis must be equal-length 1d")
        t.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "phis", p)

    @property
    def n_qubits(self) -> int:
        return self.thetas.shape[0]

    @classmethod
    def from_bitstring(cls, bitmask: int, n_qubits: int) -> "QmfState":
        """Collinear state |b>: theta_k = pi * b_k, phi_k = 0."""
        t = np.array(
            [np.pi if (bitmask >> k) & 1 else 0.0 for k in range(n_qubits)]
        )
        return cls(t, np.zeros(n_qubits))

    def nearest_basis_state(self) -> int:
        """Bitmask of the closest computational basis state.

        Qubit k rounds to 1 iff cos(theta_k) < 0; the tie (equal overlap)
        rounds to 0.
        """
        out = 0
        for k in range(self.n_qubits):
            if np.cos(self.thetas[k]) < 0.0:
                out |= 1 << k
        return out

    def is_collinear(self, atol: float = 1e-12) -> bool:
        """True when every qubit points along +-z."""
        return bool(np.all(np.abs(np.sin(self.thetas)) <= atol))

    def statevector(self) -> np.ndarray:
        """Dense 2^n amplitude vector (index bit k = qubit k)."""
        psi = np.array([1.0 + 0.0j])
        for k in range(self.n_qubits):
            amp = np.array(
                [
                    np.cos(self.thetas[k] / 2),
                    np.exp(1j * self.phis[k]) * np.sin(self.thetas[k] / 2),
                ]
            )
            # qubit k is index bit k: new index = old + amp_bit << k
            psi = (amp[None, :] * psi[:, None]).reshape(-1, order="F")
        return psi


def _check_qubits(op: SparsePauliOp, n: int):
    if op.n_qubits != n:
        raise DimensionError(
            f"operator on {op.n_qubits} qubits, state on {n}"
        )


def basis_expectation(op: SparsePauliOp, bitmask: int) -> complex:
    """<b| op |b> for a computational basis state given as a bitmask."""
    if not (0 <= bitmask < (1 << op.n_qubits)):
        raise DimensionError(
            f"bitmask {bitmask} out of range for {op.n_qubits} qubits"
        )
    phi = bits.int_to_limbs(bitmask, bits.n_limbs(op.n_qubits))
    return kernels.diag_basis_sum(op.x, op.z, op.coeffs, phi)


def _axis_factors(op: SparsePauliOp, state: QmfState):
    """(T, n) per-qubit expectation factors and their angle derivatives."""
    n = state.n_qubits
    st, ct = np.sin(state.thetas), np.cos(state.thetas)
    sp, cp = np.sin(state.phis), np.cos(state.phis)
    f = np.empty((op.n_terms, n))
    df_dt = np.empty((op.n_terms, n))
    df_dp = np.empty((op.n_terms, n))
    for k in range(n):
        limb, bit = divmod(k, bits.LIMB_BITS)
        xb = (op.x[:, limb] >> np.uint64(bit)) & np.uint64(1)
        zb = (op.z[:, limb] >> np.uint64(bit)) & np.uint64(1)
        is_x = (xb == 1) & (zb == 0)
        is_y = (xb == 1) & (zb == 1)
        is_z = (xb == 0) & (zb == 1)
        f[:, k] = np.select(
            [is_x, is_y, is_z],
            [st[k] * cp[k], st[k] * sp[k], ct[k]],
            default=1.0,
        )
        df_dt[:, k] = np.select(
            [is_x, is_y, is_z],
            [ct[k] * cp[k], ct[k] * sp[k], -st[k]],
            default=0.0,
        )
        df_dp[:, k] = np.select(
            [is_x, is_y, is_z],
            [-st[k] * sp[k], st[k] * cp[k], 0.0],
            default=0.0,
        )
    return f, df_dt, df_dp


def product_state_expectation(op: SparsePauliOp, state: QmfState) -> complex:
    """<Omega| op |Omega> for an arbitrary (not necessarily Hermitian) op.

    Every Pauli word factorizes over a product state, so this is exact
    and costs O(terms * qubits).
    """
    _check_qubits(op, state.n_qubits)
    if op.n_terms == 0:
        return 0j
    f, _, _ = _axis_factors(op, state)
    return complex(op.coeffs @ np.prod(f, axis=1))


def qmf_expectation(op: SparsePauliOp, state: QmfState) -> float:
    """<Omega| op |Omega> for Hermitian op."""
    if not op.is_hermitian(HERMITIAN_ATOL):
        raise ContractError("qmf_expectation requires a Hermitian operator")
    return float(np.real(product_state_expectation(op, state)))


def qmf_energy_and_gradient(op: SparsePauliOp, state: QmfState):
    """(energy, dE/dthetas, dE/dphis) with analytic derivatives."""
    _check_qubits(op, state.n_qubits)
    if op.n_terms == 0:
        n = state.n_qubits
        return 0.0, np.zeros(n), np.zeros(n)
    f, df_dt, df_dp = _axis_factors(op, state)
    t, n = f.shape
    # prefix/suffix products around each qubit position
    left = np.ones((t, n))
    np.cumprod(f[:, :-1], axis=1, out=left[:, 1:])
    right = np.ones((t, n))
    np.cumprod(f[:, :0:-1], axis=1, out=right[:, -2::-1])
    c = np.real(op.coeffs)
    energy = float(c @ (left[:, -1] * f[:, -1]))
    ring = left * right
    grad_t = (c[:, None] * ring * df_dt).sum(axis=0)
    grad_p = (c[:, None] * ring * df_dp).sum(axis=0)
    return energy, grad_t, grad_p


@dataclass(frozen=True)
class QmfOptResult:
    state: QmfState
    energy: float
    converged: bool
    n_iterations: int


def optimize_qmf(op: SparsePauliOp, initial: QmfState | None = None,
                 seed: int = 0, restarts: int = 4, gtol: float = 1e-8,
                 maxiter: int = 500) -> QmfOptResult:
    """Minimize the product-state energy of a Hermitian operator.

    Runs L-BFGS-B from `initial` (default: all-zeros state) plus
    `restarts` seeded random starts, keeping the best. The result never
    exceeds the initial energy: the initial point is a candidate itself.
    """
    if not op.is_hermitian(HERMITIAN_ATOL):
        raise ContractError("optimize_qmf requires a Hermitian operator")
    n = op.n_qubits
    if initial is None:
        initial = QmfState(np.zeros(n), np.zeros(n))
    _check_qubits(op, initial.n_qubits)

    def objective(angles):
        state = QmfState(angles[:n], angles[n:])
        e, gt, gp = qmf_energy_and_gradient(op, state)
        return e, np.concatenate([gt, gp])

    rng = np.random.default_rng([seed, 0x9E3779B9])
    starts = [np.concatenate([initial.thetas, initial.phis])]
    for _ in range(restarts):
        starts.append(
            np.concatenate(
                [rng.uniform(0, np.pi, n), rng.uniform(0, 2 * np.pi, n)]
            )
        )
    best = None
    for x0 in starts:
        res = minimize(
            objective,
            x0,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": maxiter, "gtol": gtol, "ftol": 1e-14},
        )
        if best is None or res.fun < best.fun:
            best = res
    e0, g0t, g0p = qmf_energy_and_gradient(op, initial)
    if best.fun > e0:
        grad_norm = max(np.abs(g0t).max(), np.abs(g0p).max()) if n else 0.0
        return QmfOptResult(initial, e0, grad_norm <= gtol, 0)
    state = QmfState(best.x[:n], best.x[n:])
    _, gt, gp = qmf_energy_and_gradient(op, state)
    grad_norm = float(np.max(np.abs(np.concatenate([gt, gp]))))
    return QmfOptResult(
        state, float(best.fun), bool(best.success or grad_norm <= gtol),
        int(best.nit),
    )
