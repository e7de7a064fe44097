"""Exact QCC/ILC conjugation, growth accounting, saturation closure."""

from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from ilcdress import dressing
from ilcdress.ansatz import ALPHA_NORM_ATOL, IlcAnsatz
from ilcdress.anticom import solve_for_words
from ilcdress.errors import ContractError, DimensionError
from ilcdress.pauli import PauliWord, SparsePauliOp

from oracles import pauli_matrix, sparse_op_matrix


def ilc_unitary_matrix(a: IlcAnsatz, n_q: int) -> np.ndarray:
    gen = sum(
        al * pauli_matrix(w.label, n_q)
        for al, w in zip(a.alphas, a.entanglers)
    )
    return scipy.linalg.expm(-1j * a.tau * gen)


def random_real_op(n, m, rng):
    m = min(m, 4**n)
    seen = set()
    while len(seen) < m:
        seen.add((int(rng.integers(0, 2**n)), int(rng.integers(0, 2**n))))
    rows = sorted(seen)
    coeffs = rng.uniform(-1.0, 1.0, m)
    return SparsePauliOp.from_terms(
        n, [(c, PauliWord(n, x, z)) for c, (x, z) in zip(coeffs, rows)]
    )


# -- growth formulas ---------------------------------------------------


def test_growth_formulas_exact():
    assert dressing.growth_worst(4) == 11
    assert dressing.growth_avg(8) == 19
    assert dressing.growth_worst(1) == Fraction(2)
    assert dressing.growth_avg(1) == Fraction(3, 2)
    assert dressing.growth_worst(0) == 1
    assert dressing.growth_avg(0) == 1
    assert isinstance(dressing.growth_avg(3), Fraction)
    assert dressing.growth_avg(3) == Fraction(4)
    assert dressing.growth_worst(10) == 56
    with pytest.raises(ContractError):
        dressing.growth_worst(-1)


# -- single-word conjugation -------------------------------------------


def test_dress_qcc_tau_zero_is_identity():
    rng = np.random.default_rng(0)
    h = random_real_op(3, 20, rng)
    out = dressing.dress_qcc(h, PauliWord.from_label("Y0X2", 3), 0.0)
    assert out.allclose(h, atol=1e-15)


def test_dress_qcc_commuting_word_is_identity():
    h = SparsePauliOp.from_terms(2, [(0.7, "Z0Z1")])
    out = dressing.dress_qcc(h, PauliWord.from_label("Y0X1", 2), 1.2)
    assert out.allclose(h, atol=1e-15)


def test_dress_qcc_single_qubit_example():
    # X+Z conjugated by exp(-i tau Y/2): at tau = pi/4 the X component
    # rotates away entirely, leaving sqrt(2) Z
    h = SparsePauliOp.from_terms(1, [(1.0, "X0"), (1.0, "Z0")])
    y0 = PauliWord.from_label("Y0", 1)
    out = dressing.dress_qcc(h, y0, np.pi / 4)
    assert out.n_terms == 1
    ((c, w),) = list(out.terms())
    assert w.label == "Z0"
    assert c == pytest.approx(np.sqrt(2), abs=1e-14)
    # at tau = pi/2 both words survive: Z0 - X0
    out2 = dressing.dress_qcc(h, y0, np.pi / 2)
    d = {w.label: c for c, w in out2.terms()}
    assert d["Z0"] == pytest.approx(1.0, abs=1e-14)
    assert d["X0"] == pytest.approx(-1.0, abs=1e-14)


def test_dress_qcc_tau_pi_flips_anticommuting_signs():
    # exp(-i pi T/2) = -iT, so conjugation is T H T
    rng = np.random.default_rng(1)
    h = random_real_op(3, 25, rng)
    t = PauliWord.from_label("Y1X2", 3)
    out = dressing.dress_qcc(h, t, np.pi, threshold=0.0)
    tm = pauli_matrix(t.label, 3)
    assert np.allclose(
        sparse_op_matrix(out), tm @ sparse_op_matrix(h) @ tm, atol=1e-12
    )


@pytest.mark.parametrize("seed", range(5))
def test_dress_qcc_matches_dense_conjugation(seed):
    rng = np.random.default_rng(seed + 10)
    h = random_real_op(3, 25, rng)
    while True:
        t = PauliWord(3, int(rng.integers(0, 8)), int(rng.integers(0, 8)))
        if t.y_count % 2 == 1:
            break
    tau = float(rng.uniform(0, 2 * np.pi))
    out = dressing.dress_qcc(h, t, tau, threshold=1e-14)
    u = scipy.linalg.expm(-0.5j * tau * pauli_matrix(t.label, 3))
    want = u.conj().T @ sparse_op_matrix(h) @ u
    assert np.allclose(sparse_op_matrix(out), want, atol=1e-12)


def test_dress_qcc_dimension_check():
    h = SparsePauliOp.from_terms(2, [(1.0, "X0")])
    with pytest.raises(DimensionError):
        dressing.dress_qcc(h, PauliWord.from_label("Y0", 3), 0.1)


# -- linear-combination conjugation ------------------------------------


def make_ansatz(n_q, flips, tau, seed=0):
    words = solve_for_words(flips, n_q)
    assert words is not None
    rng = np.random.default_rng(seed)
    alphas = rng.normal(size=len(words))
    alphas /= np.linalg.norm(alphas)
    return IlcAnsatz(tuple(words), tau, alphas)


@pytest.mark.parametrize("n_ents", [1, 2, 3])
def test_dress_ilc_matches_dense_conjugation(n_ents):
    rng = np.random.default_rng(n_ents)
    h = random_real_op(3, 30, rng)
    a = dressing.random_ilc_transform(3, n_ents, rng)
    u = ilc_unitary_matrix(a, 3)
    hm = sparse_op_matrix(h)
    inv = dressing.dress_ilc(h, a, "inverse", threshold=1e-14)
    fwd = dressing.dress_ilc(h, a, "forward", threshold=1e-14)
    assert np.allclose(sparse_op_matrix(inv), u.conj().T @ hm @ u, atol=1e-12)
    assert np.allclose(sparse_op_matrix(fwd), u @ hm @ u.conj().T, atol=1e-12)


def test_dress_ilc_single_entangler_reduces_to_qcc():
    # N=1: exp(-i tau T) equals the product form at angle 2 tau
    rng = np.random.default_rng(4)
    h = random_real_op(3, 20, rng)
    t = PauliWord.from_label("Y0X1", 3)
    a = IlcAnsatz((t,), 0.37, np.array([1.0]))
    out_ilc = dressing.dress_ilc(h, a, "inverse", threshold=0.0)
    out_qcc = dressing.dress_qcc(h, t, 2 * 0.37, threshold=0.0)
    assert out_ilc.allclose(out_qcc, atol=1e-13)


def test_dress_ilc_forward_undoes_inverse():
    rng = np.random.default_rng(5)
    h = random_real_op(4, 40, rng)
    a = dressing.random_ilc_transform(4, 3, rng)
    roundtrip = dressing.dress_ilc(
        dressing.dress_ilc(h, a, "inverse", threshold=0.0),
        a, "forward", threshold=1e-12,
    )
    assert roundtrip.allclose(h, atol=1e-11)


def test_dress_ilc_identity_ansatz():
    rng = np.random.default_rng(6)
    h = random_real_op(3, 10, rng)
    assert dressing.dress_ilc(h, IlcAnsatz.identity()) is h


def test_dress_ilc_rejects_bad_direction():
    h = SparsePauliOp.from_terms(1, [(1.0, "X0")])
    a = IlcAnsatz((PauliWord.from_label("Y0", 1),), 0.1, np.array([1.0]))
    with pytest.raises(ContractError):
        dressing.dress_ilc(h, a, "backward")


def test_dress_ilc_preserves_spectrum():
    rng = np.random.default_rng(7)
    for _ in range(4):
        h = random_real_op(3, 25, rng)
        a = dressing.random_ilc_transform(3, int(rng.integers(1, 5)), rng)
        out = dressing.dress_ilc(h, a, "inverse", threshold=0.0)
        ev_in = np.linalg.eigvalsh(sparse_op_matrix(h))
        ev_out = np.linalg.eigvalsh(sparse_op_matrix(out))
        assert np.allclose(ev_in, ev_out, atol=1e-10)


def test_dress_ilc_growth_bound():
    rng = np.random.default_rng(8)
    for n_ents in (2, 4, 6):
        h = random_real_op(5, 60, rng)
        a = dressing.random_ilc_transform(5, n_ents, rng)
        out = dressing.dress_ilc(h, a, "inverse", threshold=0.0)
        bound = h.n_terms * dressing.growth_worst(n_ents)
        assert out.n_terms <= bound


def test_dressing_report():
    rng = np.random.default_rng(9)
    h = random_real_op(4, 30, rng)
    a = dressing.random_ilc_transform(4, 3, rng)
    out, rep = dressing.dress_ilc_reported(h, a)
    assert rep.input_terms == 30
    assert rep.output_terms == out.n_terms
    assert rep.growth_factor == pytest.approx(out.n_terms / 30)
    assert rep.predicted_avg == 4.0  # (9+3+4)/4
    assert rep.predicted_worst == 7.0
    assert rep.wall_time >= 0.0


# -- closure and reality -----------------------------------------------


def count_even_y(n):
    return sum(
        1
        for x in range(1 << n)
        for z in range(1 << n)
        if bin(x & z).count("1") % 2 == 0
    )


def count_even_y_even_x(n):
    return sum(
        1
        for x in range(1 << n)
        for z in range(1 << n)
        if bin(x & z).count("1") % 2 == 0 and bin(x).count("1") % 2 == 0
    )


def test_even_y_word_counts():
    # (4^n + 2^n) / 2 even-y words; 4^(n-1) + 2^(n-1) with even x too
    assert count_even_y(2) == 10
    assert count_even_y(3) == 36
    assert count_even_y(4) == 136
    assert count_even_y_even_x(3) == 20
    assert count_even_y_even_x(4) == 72


def random_even_y_op(n, m, rng):
    words = [
        (x, z)
        for x in range(1 << n)
        for z in range(1 << n)
        if bin(x & z).count("1") % 2 == 0
    ]
    idx = rng.choice(len(words), size=min(m, len(words)), replace=False)
    return SparsePauliOp.from_terms(
        n,
        [
            (float(rng.uniform(-1, 1)), PauliWord(n, *words[i]))
            for i in sorted(idx)
        ],
    )


def test_repeated_dressing_saturates_even_y_sector():
    # real even-y Hamiltonians close on themselves: term count caps at
    # 136 on 4 qubits and coefficients stay exactly real
    rng = np.random.default_rng(10)
    h = random_even_y_op(4, 40, rng)
    assert h.max_imag() == 0.0
    for _ in range(8):
        a = dressing.random_ilc_transform(4, int(rng.integers(1, 5)), rng)
        h = dressing.dress_ilc(h, a, "inverse", threshold=0.0)
        assert h.n_terms <= 136
        assert h.max_imag() == 0.0
    assert h.n_terms == 136  # generic transforms reach the full sector


def test_even_x_flips_preserve_x_parity_sector():
    rng = np.random.default_rng(11)
    words = [
        (x, z)
        for x in range(16)
        for z in range(16)
        if bin(x & z).count("1") % 2 == 0 and bin(x).count("1") % 2 == 0
    ]
    h = SparsePauliOp.from_terms(
        4,
        [(float(rng.uniform(-1, 1)), PauliWord(4, x, z)) for x, z in words[:30]],
    )
    even_flips = [3, 5, 9, 6]
    for _ in range(6):
        sel = rng.choice(len(even_flips), size=2, replace=False)
        flips = sorted(even_flips[i] for i in sel)
        ents = solve_for_words(flips, 4)
        alphas = rng.normal(size=2)
        alphas /= np.linalg.norm(alphas)
        a = IlcAnsatz(tuple(ents), float(rng.uniform(0, 2 * np.pi)), alphas)
        h = dressing.dress_ilc(h, a, "inverse", threshold=0.0)
        assert h.n_terms <= 72
        assert h.max_imag() == 0.0
        assert not np.any(h.x_parities())


# -- random instance generators ----------------------------------------


def test_random_hermitian_op_properties():
    rng = np.random.default_rng(12)
    h = dressing.random_hermitian_op(6, 50, rng)
    assert h.n_terms == 50
    assert h.is_hermitian()
    assert h.max_imag() == 0.0
    h2 = dressing.random_hermitian_op(6, 50, np.random.default_rng(12))
    assert h2.allclose(h, atol=0.0)
    with pytest.raises(ContractError):
        dressing.random_hermitian_op(1, 5, rng)


def test_random_qcc_transform_properties():
    rng = np.random.default_rng(13)
    chain = dressing.random_qcc_transform(5, 8, rng)
    assert len(chain) == 8
    for w, tau in chain:
        assert w.y_count % 2 == 1
        assert 0.0 <= tau < 2 * np.pi


def test_random_ilc_transform_properties():
    rng = np.random.default_rng(14)
    a = dressing.random_ilc_transform(5, 6, rng)
    assert a.n_entanglers == 6
    assert np.sum(a.alphas**2) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ContractError):
        dressing.random_ilc_transform(3, 6, rng)


# -- ansatz container ---------------------------------------------------


def test_ansatz_validation():
    y0 = PauliWord.from_label("Y0", 2)
    x0y1 = PauliWord.from_label("X0Y1", 2)
    x0 = PauliWord.from_label("X0", 2)
    IlcAnsatz((y0, x0y1), 0.3, np.array([0.6, 0.8]))
    with pytest.raises(ContractError):
        IlcAnsatz((y0, x0y1), 0.3, np.array([0.6, 0.9]))  # norm != 1
    with pytest.raises(ContractError):
        IlcAnsatz((x0,), 0.3, np.array([1.0]))  # even y-count
    with pytest.raises(ContractError):
        # Y0 and Y1 commute
        IlcAnsatz(
            (y0, PauliWord.from_label("Y1", 2)),
            0.3,
            np.array([0.6, 0.8]),
        )
    with pytest.raises(DimensionError):
        IlcAnsatz((y0,), 0.3, np.array([0.6, 0.8]))
    with pytest.raises(ContractError):
        IlcAnsatz((), 0.5)


def test_ansatz_identity():
    a = IlcAnsatz.identity()
    assert a.n_entanglers == 0
    assert a.tau == 0.0
    with pytest.raises(ContractError):
        a.n_qubits


def test_ansatz_alpha_norm_tolerance():
    y0 = PauliWord.from_label("Y0", 1)
    eps = ALPHA_NORM_ATOL / 4
    IlcAnsatz((y0,), 0.1, np.array([np.sqrt(1.0 + eps)]))
