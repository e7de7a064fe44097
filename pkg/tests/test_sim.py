"""Statevector engine against dense-matrix oracles."""

import numpy as np
import pytest
import scipy.linalg

from ilcdress.errors import ContractError, DimensionError
from ilcdress.meanfield import QmfState, qmf_expectation
from ilcdress.pauli import PauliWord, SparsePauliOp
from ilcdress.sim import (
    apply_op,
    apply_pauli_exp,
    apply_qcc_unitary,
    apply_word,
    eigenvalues,
    expectation,
    ground_state,
    optimize_qcc,
    prepare_basis_state,
    prepare_qmf,
    qcc_energy,
    to_dense,
)

from oracles import pauli_matrix, sparse_op_matrix


def random_word(n, rng):
    while True:
        x = int(rng.integers(0, 1 << n))
        z = int(rng.integers(0, 1 << n))
        if x or z:
            return PauliWord(n, x, z)


def random_hermitian(n, m, rng):
    m = min(m, 4 ** n)
    rows = set()
    while len(rows) < m:
        rows.add((int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n))))
    rows = sorted(rows)
    xs = np.array([r[0] for r in rows], dtype=np.uint64).reshape(-1, 1)
    zs = np.array([r[1] for r in rows], dtype=np.uint64).reshape(-1, 1)
    cs = rng.uniform(-1, 1, len(rows)).astype(complex)
    return SparsePauliOp(n, xs, zs, cs)


def random_vec(n, rng):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


class TestApply:
    @pytest.mark.parametrize("seed", range(8))
    def test_word_matches_matrix(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 6))
        w = random_word(n, rng)
        psi = random_vec(n, rng)
        want = pauli_matrix(w.label, n) @ psi
        assert np.allclose(apply_word(psi, w), want, atol=1e-14)

    def test_word_phase_examples(self):
        # Y|0> = i|1>, Z|1> = -|1>
        psi = prepare_basis_state(0, 1)
        out = apply_word(psi, PauliWord.from_label("Y0", 1))
        assert out[1] == pytest.approx(1j)
        psi = prepare_basis_state(1, 1)
        out = apply_word(psi, PauliWord.from_label("Z0", 1))
        assert out[1] == pytest.approx(-1.0)

    @pytest.mark.parametrize("seed", range(4))
    def test_op_matches_matrix(self, seed):
        rng = np.random.default_rng(40 + seed)
        n = int(rng.integers(1, 5))
        op = random_hermitian(n, int(rng.integers(1, 12)), rng)
        psi = random_vec(n, rng)
        want = sparse_op_matrix(op) @ psi
        assert np.allclose(apply_op(psi, op), want, atol=1e-13)

    @pytest.mark.parametrize("seed", range(4))
    def test_exp_matches_expm(self, seed):
        rng = np.random.default_rng(60 + seed)
        n = int(rng.integers(1, 4))
        w = random_word(n, rng)
        tau = float(rng.uniform(-2 * np.pi, 2 * np.pi))
        psi = random_vec(n, rng)
        u = scipy.linalg.expm(-0.5j * tau * pauli_matrix(w.label, n))
        assert np.allclose(apply_pauli_exp(psi, w, tau), u @ psi, atol=1e-12)

    def test_exp_is_unitary(self):
        rng = np.random.default_rng(2)
        psi = random_vec(3, rng)
        out = apply_pauli_exp(psi, PauliWord.from_label("X0Y2", 3), 0.7)
        assert np.linalg.norm(out) == pytest.approx(1.0)

    def test_dimension_check(self):
        with pytest.raises(DimensionError):
            apply_word(np.zeros(4, dtype=complex), PauliWord.from_label("X0", 3))


class TestDense:
    def test_matches_oracle(self):
        rng = np.random.default_rng(5)
        op = random_hermitian(3, 10, rng)
        assert np.allclose(to_dense(op), sparse_op_matrix(op), atol=1e-14)

    def test_expectation_vs_qmf(self):
        rng = np.random.default_rng(6)
        op = random_hermitian(3, 9, rng)
        s = QmfState(rng.uniform(0, np.pi, 3), rng.uniform(0, 2 * np.pi, 3))
        psi = prepare_qmf(s)
        assert expectation(psi, op).real == pytest.approx(
            qmf_expectation(op, s), abs=1e-12
        )


class TestGround:
    def test_single_qubit(self):
        op = SparsePauliOp.from_terms(1, [(1.0, "X0"), (1.0, "Z0")])
        e, psi = ground_state(op)
        assert e == pytest.approx(-np.sqrt(2.0), abs=1e-12)
        assert np.linalg.norm(apply_op(psi, op) - e * psi) < 1e-9

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_eigh(self, seed):
        rng = np.random.default_rng(80 + seed)
        n = 4
        op = random_hermitian(n, 20, rng)
        e, psi = ground_state(op)
        want = float(np.linalg.eigvalsh(sparse_op_matrix(op))[0])
        assert e == pytest.approx(want, abs=1e-10)

    def test_iterative_path(self):
        # forced past the dense cutoff to exercise the Lanczos branch
        rng = np.random.default_rng(9)
        op = random_hermitian(6, 25, rng)
        e_dense, _ = ground_state(op)
        e_iter, psi = ground_state(op, dense_cutoff=4)
        assert e_iter == pytest.approx(e_dense, abs=1e-9)
        assert np.linalg.norm(apply_op(psi, op) - e_iter * psi) < 1e-9

    def test_eigenvalues_sorted(self):
        rng = np.random.default_rng(10)
        op = random_hermitian(3, 12, rng)
        vals = eigenvalues(op)
        want = np.linalg.eigvalsh(sparse_op_matrix(op))
        assert np.allclose(vals, want, atol=1e-10)

    def test_rejects_non_hermitian(self):
        op = SparsePauliOp.from_terms(1, [(1j, "Z0")])
        with pytest.raises(ContractError):
            ground_state(op)


class TestQcc:
    def test_energy_matches_dense(self):
        rng = np.random.default_rng(21)
        n = 3
        h = random_hermitian(n, 10, rng)
        ents = [random_word(n, rng) for _ in range(3)]
        taus = rng.uniform(-np.pi, np.pi, 3)
        psi0 = random_vec(n, rng)
        psi = psi0
        for w, t in zip(ents, taus):
            u = scipy.linalg.expm(-0.5j * t * pauli_matrix(w.label, n))
            psi = u @ psi
        want = float(np.real(psi.conj() @ sparse_op_matrix(h) @ psi))
        assert qcc_energy(h, ents, taus, psi0) == pytest.approx(want, abs=1e-12)

    def test_order_first_entangler_first(self):
        # exp(-i pi/2 X/2) then Z-rotation ordering is observable
        n = 1
        psi0 = prepare_basis_state(0, 1)
        ents = [PauliWord.from_label("X0", 1), PauliWord.from_label("Z0", 1)]
        taus = [np.pi / 2, np.pi / 2]
        got = apply_qcc_unitary(psi0, ents, taus)
        ux = scipy.linalg.expm(-0.25j * np.pi * pauli_matrix("X0", 1))
        uz = scipy.linalg.expm(-0.25j * np.pi * pauli_matrix("Z0", 1))
        assert np.allclose(got, uz @ ux @ psi0, atol=1e-14)

    @pytest.mark.parametrize("seed", range(3))
    def test_gradients_fd(self, seed):
        from ilcdress.sim import _qcc_energy_gradient

        rng = np.random.default_rng(200 + seed)
        n = 3
        h = random_hermitian(n, 8, rng)
        ents = [random_word(n, rng) for _ in range(4)]
        taus = rng.uniform(-1, 1, 4)
        ref = QmfState(rng.uniform(0, np.pi, n), rng.uniform(0, 2 * np.pi, n))
        e, gt, gth, gph = _qcc_energy_gradient(h, ents, taus, ref, True)
        eps = 1e-5

        def energy(ts, thetas, phis):
            s = QmfState(thetas, phis)
            return qcc_energy(h, ents, ts, s.statevector())

        assert e == pytest.approx(
            energy(taus, ref.thetas, ref.phis), abs=1e-12
        )
        for k in range(4):
            tp, tm = taus.copy(), taus.copy()
            tp[k] += eps
            tm[k] -= eps
            fd = (energy(tp, ref.thetas, ref.phis)
                  - energy(tm, ref.thetas, ref.phis)) / (2 * eps)
            assert gt[k] == pytest.approx(fd, abs=1e-7)
        for q in range(n):
            for arr, grad in ((ref.thetas, gth), (ref.phis, gph)):
                ap, am = arr.copy(), arr.copy()
                ap[q] += eps
                am[q] -= eps
                if arr is ref.thetas:
                    fd = (energy(taus, ap, ref.phis)
                          - energy(taus, am, ref.phis)) / (2 * eps)
                else:
                    fd = (energy(taus, ref.thetas, ap)
                          - energy(taus, ref.thetas, am)) / (2 * eps)
                assert grad[q] == pytest.approx(fd, abs=1e-7)

    def test_optimize_reaches_exact_when_expressive(self):
        # single qubit: X rotation moves |0> anywhere in the XZ plane
        h = SparsePauliOp.from_terms(1, [(1.0, "X0"), (1.0, "Z0")])
        ents = [PauliWord.from_label("Y0", 1)]
        res = optimize_qcc(h, ents, 0, optimize_reference=False)
        assert res.energy == pytest.approx(-np.sqrt(2.0), abs=1e-8)
        assert res.converged

    def test_optimize_with_reference_angles(self):
        rng = np.random.default_rng(33)
        h = random_hermitian(2, 8, rng)
        ents = [PauliWord.from_label("X0Y1", 2)]
        res = optimize_qcc(h, ents, 0, optimize_reference=True)
        e_exact, _ = ground_state(h)
        assert res.energy >= e_exact - 1e-10
        # adding a variational layer never hurts the mean-field floor
        from ilcdress.meanfield import optimize_qmf

        e_qmf = optimize_qmf(h, seed=0).energy
        assert res.energy <= e_qmf + 1e-7
