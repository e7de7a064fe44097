"""pauli module: symplectic algebra, canonical storage, text format."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilcdress import bits
from ilcdress.errors import DimensionError, PauliParseError
from ilcdress.pauli import (
    DEFAULT_PRUNE,
    FourthRootPhase,
    PauliWord,
    SparsePauliOp,
    canonical_serialize,
    commutator_with_word,
    commutes,
    op_combine,
    op_product,
    parse_pauli_text,
    sandwich_with_words,
    word_multiply,
)
from oracles import op_matrix, pauli_matrix, sparse_op_matrix


def random_word(rng, n_qubits):
    return PauliWord(
        n_qubits,
        int(rng.integers(0, 1 << n_qubits)),
        int(rng.integers(0, 1 << n_qubits)),
    )


def random_op(rng, n_qubits, n_terms, real=False):
    t = n_terms
    x = rng.integers(0, 1 << n_qubits, size=t)
    z = rng.integers(0, 1 << n_qubits, size=t)
    c = rng.uniform(-1, 1, size=t) + (0 if real else 1j * rng.uniform(-1, 1, size=t))
    nl = bits.n_limbs(n_qubits)
    return SparsePauliOp.from_arrays(
        n_qubits,
        bits.ints_to_limb_rows([int(v) for v in x], nl),
        bits.ints_to_limb_rows([int(v) for v in z], nl),
        np.asarray(c, dtype=complex),
    )


class TestPauliWord:
    def test_label_round_trip(self):
        for label in ["I", "X0", "Y2", "Z1", "X0Y1Z2", "Y0Y3"]:
            w = PauliWord.from_label(label, 4)
            assert w.label == label
            assert PauliWord.from_label(w.label, 4) == w

    def test_from_label_rejects_garbage(self):
        for bad in ["", "A0", "X", "X0X0", "X1X0", "X4", "X0 junk"]:
            with pytest.raises(PauliParseError):
                PauliWord.from_label(bad, 4)

    def test_bounds(self):
        with pytest.raises(DimensionError):
            PauliWord(0, 0, 0)
        with pytest.raises(DimensionError):
            PauliWord(2, 4, 0)

    def test_counts(self):
        w = PauliWord.from_label("X0Y1Z2", 4)
        assert w.y_count == 1
        assert w.weight == 3
        assert not w.is_identity
        assert PauliWord.identity(4).is_identity

    def test_hashable(self):
        a = PauliWord.from_label("X0", 2)
        b = PauliWord.from_label("X0", 2)
        assert len({a, b}) == 1

    def test_immutable(self):
        w = PauliWord.from_label("X0", 2)
        with pytest.raises(AttributeError):
            w.x_bits = 3


class TestWordMultiply:
    def test_phase_table(self):
        cases = {
            ("X0", "Y0"): ("+i", "Z0"),
            ("Y0", "X0"): ("-i", "Z0"),
            ("Z0", "X0"): ("+i", "Y0"),
            ("X0", "Z0"): ("-i", "Y0"),
            ("Y0", "Z0"): ("+i", "X0"),
            ("Z0", "Y0"): ("-i", "X0"),
        }
        for (la, lb), (ph, lc) in cases.items():
            phase, word = word_multiply(
                PauliWord.from_label(la, 1), PauliWord.from_label(lb, 1)
            )
            assert (repr(phase), word.label) == (ph, lc)

    def test_against_dense(self):
        rng = np.random.default_rng(7)
        for n in (1, 2, 3, 5):
            for _ in range(40):
                a, b = random_word(rng, n), random_word(rng, n)
                phase, c = word_multiply(a, b)
                lhs = pauli_matrix(a.label, n) @ pauli_matrix(b.label, n)
                rhs = phase.value * pauli_matrix(c.label, n)
                assert np.allclose(lhs, rhs, atol=1e-14)

    def test_words_square_to_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            w = random_word(rng, 6)
            phase, sq = word_multiply(w, w)
            assert sq.is_identity and phase.k == 0

    def test_commutes_matches_dense(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            a, b = random_word(rng, 3), random_word(rng, 3)
            ma, mb = pauli_matrix(a.label, 3), pauli_matrix(b.label, 3)
            dense_commutes = np.allclose(ma @ mb, mb @ ma)
            assert commutes(a, b) == dense_commutes

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            word_multiply(PauliWord.identity(2), PauliWord.identity(3))


class TestFourthRootPhase:
    def test_values(self):
        assert [FourthRootPhase(k).value for k in range(4)] == [1, 1j, -1, -1j]

    def test_group(self):
        for a in range(4):
            for b in range(4):
                assert (FourthRootPhase(a) * FourthRootPhase(b)).k == (a + b) % 4
        assert FourthRootPhase(3).conjugate().k == 1


class TestSparsePauliOp:
    def test_canonical_order_and_merge(self):
        op = SparsePauliOp.from_terms(
            2, [(1.0, "X0X1"), (0.25, "Z0"), (1.0, "X0X1"), (0.5, "I")]
        )
        labels = [w.label for _, w in op.terms()]
        assert labels == ["I", "Z0", "X0X1"]
        assert op.coefficient(PauliWord.from_label("X0X1", 2)) == 2.0

    def test_cancellation_prunes(self):
        op = SparsePauliOp.from_terms(3, [(1.0, "Y1"), (-1.0, "Y1")])
        assert op.n_terms == 0

    def test_combine_threshold(self):
        a = SparsePauliOp.from_terms(2, [(1.0, "X0"), (1e-9, "Z1")])
        b = SparsePauliOp.from_terms(2, [(1.0, "X0")])
        out = op_combine(a, b, 1.0, -1.0)
        assert out.n_terms == 0  # both the cancellation and the 1e-9 drop
        out0 = op_combine(a, b, 1.0, -1.0, threshold=0.0)
        assert out0.n_terms == 1

    def test_combine_against_dense(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = random_op(rng, 4, 12)
            b = random_op(rng, 4, 9)
            ca, cb = rng.uniform(-2, 2, 2)
            got = sparse_op_matrix(op_combine(a, b, ca, cb, threshold=0.0))
            want = ca * sparse_op_matrix(a) + cb * sparse_op_matrix(b)
            assert np.allclose(got, want, atol=1e-12)

    def test_product_against_dense(self):
        rng = np.random.default_rng(6)
        for _ in range(15):
            a = random_op(rng, 3, 8)
            b = random_op(rng, 3, 8)
            got = sparse_op_matrix(op_product(a, b, threshold=0.0))
            want = sparse_op_matrix(a) @ sparse_op_matrix(b)
            assert np.allclose(got, want, atol=1e-12)

    def test_commutator_with_word_against_dense(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            h = random_op(rng, 4, 15)
            t = random_word(rng, 4)
            got = sparse_op_matrix(commutator_with_word(h, t, threshold=0.0))
            mt = pauli_matrix(t.label, 4)
            mh = sparse_op_matrix(h)
            assert np.allclose(got, mh @ mt - mt @ mh, atol=1e-12)

    def test_sandwich_against_dense(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            h = random_op(rng, 4, 15)
            t1, t2 = random_word(rng, 4), random_word(rng, 4)
            got = sparse_op_matrix(sandwich_with_words(t1, h, t2, threshold=0.0))
            want = (
                pauli_matrix(t1.label, 4)
                @ sparse_op_matrix(h)
                @ pauli_matrix(t2.label, 4)
            )
            assert np.allclose(got, want, atol=1e-12)

    def test_hermiticity_predicate(self):
        h = SparsePauliOp.from_terms(2, [(1.0, "X0"), (0.5, "Z0Z1")])
        assert h.is_hermitian()
        g = SparsePauliOp.from_terms(2, [(1j, "X0")])
        assert not g.is_hermitian()

    def test_parities(self):
        op = SparsePauliOp.from_terms(
            3, [(1.0, "Y0"), (1.0, "Y0Y1"), (1.0, "X0Y1"), (1.0, "Z2")]
        )
        by_label = {
            w.label: (int(yp), int(xp))
            for (_, w), yp, xp in zip(
                op.terms(), op.y_parities(), op.x_parities()
            )
        }
        assert by_label == {
            "Y0": (1, 1),
            "Y0Y1": (0, 0),
            "X0Y1": (1, 0),
            "Z2": (0, 0),
        }

    def test_immutable_storage(self):
        op = SparsePauliOp.from_terms(2, [(1.0, "X0")])
        with pytest.raises(ValueError):
            op.coeffs[0] = 2.0

    def test_dimension_checks(self):
        a = SparsePauliOp.identity(2)
        b = SparsePauliOp.identity(3)
        with pytest.raises(DimensionError):
            op_combine(a, b)

    def test_multi_limb(self):
        # 70 qubits forces two limbs per word
        op = SparsePauliOp.from_terms(
            70, [(1.0, "X0Y69"), (2.0, "Z64"), (3.0, "X0Y69")]
        )
        assert op.n_terms == 2
        w = PauliWord.from_label("X0Y69", 70)
        assert op.coefficient(w) == 4.0
        phase, sq = word_multiply(w, w)
        assert sq.is_identity and phase.k == 0


class TestTextFormat:
    def test_round_trip_exact(self):
        rng = np.random.default_rng(13)
        op = random_op(rng, 5, 20)
        text = canonical_serialize(op)
        assert parse_pauli_text(text) == op

    def test_serialize_shape(self):
        op = SparsePauliOp.from_terms(2, [(0.5, "X0"), (-0.25j, "Z1")])
        lines = canonical_serialize(op).strip().splitlines()
        assert lines[0] == "qubits 2"
        # canonical order is ascending (x, z) as integers: Z1 (x=0) first
        assert lines[1].split() == ["-0", "-0.25", "Z1"]
        assert lines[2].split() == ["0.5", "0", "X0"]
        assert len(lines) == 3

    def test_comments_and_blanks(self):
        text = "# header\nqubits 2\n\n1 0 X0 # inline\n# done\n"
        op = parse_pauli_text(text)
        assert op.n_terms == 1

    def test_duplicates_summed(self):
        op = parse_pauli_text("qubits 1\n1 0 X0\n2 0 X0\n")
        assert op.coefficient(PauliWord.from_label("X0", 1)) == 3.0

    def test_tiny_coefficients_survive(self):
        op = parse_pauli_text("qubits 1\n1e-30 0 X0\n")
        assert op.n_terms == 1

    @pytest.mark.parametrize(
        "text,lineno",
        [
            ("1 0 X0\n", 1),  # missing header
            ("qubits 0\n", 1),
            ("qubits 2\n1 X0\n", 2),
            ("qubits 2\n1 0 X9\n", 2),
            ("qubits 2\nx 0 X0\n", 2),
            ("qubits 2\ninf 0 X0\n", 2),
            ("qubits 2\n1 0 X0Z0\n", 2),
        ],
    )
    def test_parse_errors_carry_line(self, text, lineno):
        with pytest.raises(PauliParseError) as err:
            parse_pauli_text(text)
        assert f"line {lineno}" in str(err.value)

    def test_empty_input(self):
        with pytest.raises(PauliParseError):
            parse_pauli_text("# nothing\n")


@settings(deadline=None, max_examples=60)
@given(
    n=st.integers(1, 8),
    data=st.data(),
)
def test_round_trip_property(n, data):
    t = data.draw(st.integers(0, 12))
    xs = data.draw(st.lists(st.integers(0, 2**n - 1), min_size=t, max_size=t))
    zs = data.draw(st.lists(st.integers(0, 2**n - 1), min_size=t, max_size=t))
    cs = data.draw(
        st.lists(
            st.tuples(
                st.floats(-1e3, 1e3, allow_nan=False),
                st.floats(-1e3, 1e3, allow_nan=False),
            ),
            min_size=t,
            max_size=t,
        )
    )
    nl = bits.n_limbs(n)
    op = SparsePauliOp.from_arrays(
        n,
        bits.ints_to_limb_rows(xs, nl),
        bits.ints_to_limb_rows(zs, nl),
        np.array([complex(a, b) for a, b in cs], dtype=complex).reshape(-1),
    )
    assert parse_pauli_text(canonical_serialize(op)) == op


@settings(deadline=None, max_examples=80)
@given(
    n=st.integers(1, 6),
    xa=st.integers(0, 63),
    za=st.integers(0, 63),
    xb=st.integers(0, 63),
    zb=st.integers(0, 63),
)
def test_multiply_property(n, xa, za, xb, zb):
    mask = (1 << n) - 1
    a = PauliWord(n, xa & mask, za & mask)
    b = PauliWord(n, xb & mask, zb & mask)
    phase, c = word_multiply(a, b)
    lhs = pauli_matrix(a.label, n) @ pauli_matrix(b.label, n)
    assert np.allclose(lhs, phase.value * pauli_matrix(c.label, n), atol=1e-14)
    # anticommutation <-> sign flip of the reversed product
    phase_r, c_r = word_multiply(b, a)
    assert c_r == c
    if commutes(a, b):
        assert phase_r.k == phase.k
    else:
        assert phase_r.k == (phase.k + 2) % 4


def test_default_prune_constant():
    assert DEFAULT_PRUNE == 1e-8
