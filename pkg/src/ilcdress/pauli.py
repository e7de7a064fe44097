"""Pauli words and sparse Pauli-sum operators in symplectic form.

A word on n qubits is a pair of bit vectors (x, z); qubit k carries X when
only x_k is set, Z when only z_k is set, Y when both are. The operator it
denotes is the Hermitian i^{y} X^x Z^z with y = |x & z| (the Y count), so
every stored word squares to the identity. Products pick up fourth roots of
unity tracked exactly as integer exponents.

Operators store their terms as packed uint64 limb matrices in canonical
order: strictly ascending (x, z) read as unsigned integers. Construction
always canonicalizes, so equal operators have equal storage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from ilcdress import bits, kernels
from ilcdress.errors import DimensionError, PauliParseError

#: default magnitude cutoff for combination/dressing results; terms with
#: |coeff| <= threshold are dropped. Parsing and direct construction keep
#: everything (threshold 0), so files round-trip exactly.
DEFAULT_PRUNE = 1e-8

_AXES = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_FACTOR_RE = re.compile(r"([XYZ])(\d+)")


@dataclass(frozen=True)
class FourthRootPhase:
    """i^k with k stored mod 4; multiplication adds exponents."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    @property
    def value(self) -> complex:
        return (1 + 0j, 1j, -1 + 0j, -1j)[self.k]

    def conjugate(self) -> "FourthRootPhase":
        return FourthRootPhase(-self.k)

    def __mul__(self, other):
        if isinstance(other, FourthRootPhase):
            return FourthRootPhase(self.k + other.k)
        return self.value * other

    __rmul__ = __mul__

    def __repr__(self):
        return ("+1", "+i", "-1", "-i")[self.k]


class PauliWord:
    """Single Pauli word; immutable and hashable."""

    __slots__ = ("n_qubits", "x_bits", "z_bits")

    def __init__(self, n_qubits: int, x_bits: int, z_bits: int):
        if n_qubits <= 0:
            raise DimensionError(f"n_qubits must be positive, got {n_qubits}")
        top = 1 << n_qubits
        if not (0 <= x_bits < top and 0 <= z_bits < top):
            raise DimensionError(
                f"bit vectors out of range for {n_qubits} qubits"
            )
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "x_bits", x_bits)
        object.__setattr__(self, "z_bits", z_bits)

    def __setattr__(self, name, value):
        raise AttributeError("PauliWord is immutable")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliWord":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_label(cls, label: str, n_qubits: int) -> "PauliWord":
        """Parse 'X0Y3Z5' (whitespace between factors tolerated) or 'I'.

        Qubit indices must be strictly increasing and below n_qubits.
        """
        text = label.replace(" ", "")
        if text == "I":
            return cls.identity(n_qubits)
        x = z = 0
        pos = 0
        last = -1
        for m in _FACTOR_RE.finditer(text):
            if m.start() != pos:
                raise PauliParseError(f"malformed Pauli label {label!r}")
            pos = m.end()
            axis, k = m.group(1), int(m.group(2))
            if k <= last:
                raise PauliParseError(
                    f"qubit indices must be strictly increasing in {label!r}"
                )
            if k >= n_qubits:
                raise PauliParseError(
                    f"qubit {k} out of range for {n_qubits} qubits"
                )
            last = k
            if axis in ("X", "Y"):
                x |= 1 << k
            if axis in ("Y", "Z"):
                z |= 1 << k
        if pos != len(text) or pos == 0:
            raise PauliParseError(f"malformed Pauli label {label!r}")
        return cls(n_qubits, x, z)

    @property
    def label(self) -> str:
        if self.x_bits == 0 and self.z_bits == 0:
            return "I"
        parts = []
        for k in range(self.n_qubits):
            axis = _AXES[((self.x_bits >> k) & 1, (self.z_bits >> k) & 1)]
            if axis != "I":
                parts.append(f"{axis}{k}")
        return "".join(parts)

    def axis(self, k: int) -> str:
        return _AXES[((self.x_bits >> k) & 1, (self.z_bits >> k) & 1)]

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def x_limbs(self) -> np.ndarray:
        return bits.int_to_limbs(self.x_bits, bits.n_limbs(self.n_qubits))

    def z_limbs(self) -> np.ndarray:
        return bits.int_to_limbs(self.z_bits, bits.n_limbs(self.n_qubits))

    def commutes_with(self, other: "PauliWord") -> bool:
        return commutes(self, other)

    def __mul__(self, other: "PauliWord"):
        return word_multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, PauliWord)
            and self.n_qubits == other.n_qubits
            and self.x_bits == other.x_bits
            and self.z_bits == other.z_bits
        )

    def __hash__(self):
        return hash((self.n_qubits, self.x_bits, self.z_bits))

    def __repr__(self):
        return f"PauliWord({self.n_qubits}, {self.label!r})"


def _check_same_qubits(a, b):
    if a.n_qubits != b.n_qubits:
        raise DimensionError(
            f"operands act on {a.n_qubits} vs {b.n_qubits} qubits"
        )


def phase_exponent(xa: int, za: int, xb: int, zb: int) -> int:
    """i-exponent k of a*b = i^k c for symplectic int pairs."""
    xc, zc = xa ^ xb, za ^ zb
    k = (
        (xa & za).bit_count()
        + (xb & zb).bit_count()
        - (xc & zc).bit_count()
        + 2 * (za & xb).bit_count()
    )
    return k % 4


def word_multiply(a: PauliWord, b: PauliWord):
    """a * b -> (FourthRootPhase, PauliWord)."""
    _check_same_qubits(a, b)
    k = phase_exponent(a.x_bits, a.z_bits, b.x_bits, b.z_bits)
    word = PauliWord(a.n_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits)
    return FourthRootPhase(k), word


def commutes(a: PauliWord, b: PauliWord) -> bool:
    """True iff the words commute (symplectic product is even)."""
    _check_same_qubits(a, b)
    s = (a.x_bits & b.z_bits).bit_count() + (a.z_bits & b.x_bits).bit_count()
    return s % 2 == 0


class SparsePauliOp:
    """Pauli-sum operator with canonical packed storage.

    Do not call the constructor with raw arrays unless they are already
    canonical; use from_terms / from_arrays, which always canonicalize.
    """

    __slots__ = ("n_qubits", "x", "z", "coeffs", "_index")

    def __init__(self, n_qubits: int, x, z, coeffs):
        if n_qubits <= 0:
            raise DimensionError(f"n_qubits must be positive, got {n_qubits}")
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_index", None)
        for arr in (x, z, coeffs):
            arr.flags.writeable = False

    def __setattr__(self, name, value):
        raise AttributeError("SparsePauliOp is immutable")

    # -- construction ------------------------------------------------

    @classmethod
    def from_arrays(cls, n_qubits, x, z, coeffs, threshold=0.0):
        nl = bits.n_limbs(n_qubits)
        x = np.ascontiguousarray(x, dtype=np.uint64).reshape(-1, nl)
        z = np.ascontiguousarray(z, dtype=np.uint64).reshape(-1, nl)
        coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
        if x.shape[0] != coeffs.shape[0]:
            raise DimensionError("coefficient count does not match terms")
        tail = n_qubits % bits.LIMB_BITS
        if tail and x.shape[0]:
            mask = np.uint64((1 << tail) - 1)
            if (x[:, -1] & ~mask).any() or (z[:, -1] & ~mask).any():
                raise DimensionError("bits set beyond n_qubits")
        xm, zm, cm = kernels.merge_canonical(x, z, coeffs, threshold)
        return cls(n_qubits, xm, zm, cm)

    @classmethod
    def from_terms(cls, n_qubits: int, terms: Iterable, threshold=0.0):
        """terms: iterable of (coeff, PauliWord | label str)."""
        xs, zs, cs = [], [], []
        for coeff, word in terms:
            if isinstance(word, str):
                word = PauliWord.from_label(word, n_qubits)
            elif word.n_qubits != n_qubits:
                raise DimensionError(
                    f"term on {word.n_qubits} qubits in {n_qubits}-qubit op"
                )
            xs.append(word.x_bits)
            zs.append(word.z_bits)
            cs.append(coeff)
        nl = bits.n_limbs(n_qubits)
        return cls.from_arrays(
            n_qubits,
            bits.ints_to_limb_rows(xs, nl),
            bits.ints_to_limb_rows(zs, nl),
            np.asarray(cs, dtype=np.complex128),
            threshold,
        )

    @classmethod
    def zero(cls, n_qubits: int) -> "SparsePauliOp":
        return cls.from_terms(n_qubits, [])

    @classmethod
    def identity(cls, n_qubits: int, coeff=1.0) -> "SparsePauliOp":
        return cls.from_terms(n_qubits, [(coeff, PauliWord.identity(n_qubits))])

    # -- inspection --------------------------------------------------

    @property
    def n_terms(self) -> int:
        return self.coeffs.shape[0]

    def __len__(self):
        return self.n_terms

    def terms(self) -> Iterator[tuple[complex, PauliWord]]:
        for i in range(self.n_terms):
            yield complex(self.coeffs[i]), PauliWord(
                self.n_qubits,
                bits.limbs_to_int(self.x[i]),
                bits.limbs_to_int(self.z[i]),
            )

    def words(self) -> Iterator[PauliWord]:
        for _, w in self.terms():
            yield w

    def _build_index(self):
        if self._index is None:
            idx = {
                (bits.limbs_to_int(self.x[i]), bits.limbs_to_int(self.z[i])): i
                for i in range(self.n_terms)
            }
            object.__setattr__(self, "_index", idx)
        return self._index

    def coefficient(self, word: PauliWord) -> complex:
        """Coefficient of a word, 0 if absent."""
        if word.n_qubits != self.n_qubits:
            raise DimensionError("word qubit count mismatch")
        i = self._build_index().get((word.x_bits, word.z_bits))
        return 0j if i is None else complex(self.coeffs[i])

    def y_parities(self) -> np.ndarray:
        """Per-term Y-count parity (0 even, 1 odd)."""
        return (kernels.row_popcount(self.x & self.z) & 1).astype(np.int64)

    def x_parities(self) -> np.ndarray:
        """Per-term parity of the X-type support |x|."""
        return (kernels.row_popcount(self.x) & 1).astype(np.int64)

    def max_imag(self) -> float:
        return 0.0 if self.n_terms == 0 else float(np.abs(self.coeffs.imag).max())

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        # stored words are Hermitian, so hermiticity == real coefficients
        return self.max_imag() <= atol

    # -- algebra -----------------------------------------------------

    def scaled(self, factor) -> "SparsePauliOp":
        return SparsePauliOp(
            self.n_qubits,
            self.x.copy(),
            self.z.copy(),
            self.coeffs * factor,
        )

    def adjoint(self) -> "SparsePauliOp":
        return SparsePauliOp(
            self.n_qubits, self.x.copy(), self.z.copy(), self.coeffs.conj()
        )

    def __add__(self, other):
        return op_combine(self, other)

    def __sub__(self, other):
        return op_combine(self, other, 1.0, -1.0)

    def __matmul__(self, other):
        return op_product(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, SparsePauliOp)
            and self.n_qubits == other.n_qubits
            and self.x.shape == other.x.shape
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def allclose(self, other: "SparsePauliOp", atol: float = 1e-12) -> bool:
        """Equal words and coefficients within atol (canonical order helps)."""
        if self.n_qubits != other.n_qubits:
            return False
        diff = op_combine(self, other, 1.0, -1.0, threshold=0.0)
        if diff.n_terms == 0:
            return True
        return float(np.abs(diff.coeffs).max()) <= atol

    def __repr__(self):
        return (
            f"SparsePauliOp(n_qubits={self.n_qubits}, n_terms={self.n_terms})"
        )


def op_combine(a, b, ca=1.0, cb=1.0, threshold=DEFAULT_PRUNE) -> SparsePauliOp:
    """ca*a + cb*b with canonical merge and pruning."""
    _check_same_qubits(a, b)
    x = np.concatenate([a.x, b.x])
    z = np.concatenate([a.z, b.z])
    c = np.concatenate([a.coeffs * ca, b.coeffs * cb])
    return SparsePauliOp.from_arrays(a.n_qubits, x, z, c, threshold)


def op_product(a, b, threshold=DEFAULT_PRUNE) -> SparsePauliOp:
    """Full operator product a @ b (T_a * T_b intermediate rows)."""
    _check_same_qubits(a, b)
    if a.n_terms == 0 or b.n_terms == 0:
        return SparsePauliOp.zero(a.n_qubits)
    xs, zs, cs = [], [], []
    for i in range(a.n_terms):
        xc, zc, k = kernels.mul_term_word(b.x, b.z, a.x[i], a.z[i], "left")
        xs.append(xc)
        zs.append(zc)
        cs.append(kernels.phase_apply(b.coeffs.copy(), k) * a.coeffs[i])
    return SparsePauliOp.from_arrays(
        a.n_qubits, np.concatenate(xs), np.concatenate(zs),
        np.concatenate(cs), threshold,
    )


def commutator_with_word(h: SparsePauliOp, t: PauliWord,
                         threshold=DEFAULT_PRUNE) -> SparsePauliOp:
    """[h, t] for a single word t.

    Commuting terms of h vanish; each anticommuting term P contributes
    2 * coeff * (P t), phases folded into the coefficient.
    """
    if t.n_qubits != h.n_qubits:
        raise DimensionError("word qubit count mismatch")
    wx, wz = t.x_limbs(), t.z_limbs()
    mask = kernels.anticommute_mask(h.x, h.z, wx, wz)
    if not mask.any():
        return SparsePauliOp.zero(h.n_qubits)
    xa = np.ascontiguousarray(h.x[mask])
    za = np.ascontiguousarray(h.z[mask])
    ca = h.coeffs[mask]
    xc, zc, k = kernels.mul_term_word(xa, za, wx, wz, "right")
    coeffs = kernels.phase_apply(ca * 2.0, k)
    return SparsePauliOp.from_arrays(h.n_qubits, xc, zc, coeffs, threshold)


def sandwich_with_words(t1: PauliWord, h: SparsePauliOp, t2: PauliWord,
                        threshold=DEFAULT_PRUNE) -> SparsePauliOp:
    """t1 h t2 for single words t1, t2."""
    if t1.n_qubits != h.n_qubits or t2.n_qubits != h.n_qubits:
        raise DimensionError("word qubit count mismatch")
    xc, zc, k = kernels.sandwich_term(
        h.x, h.z, t1.x_limbs(), t1.z_limbs(), t2.x_limbs(), t2.z_limbs()
    )
    coeffs = kernels.phase_apply(h.coeffs.copy(), k)
    return SparsePauliOp.from_arrays(h.n_qubits, xc, zc, coeffs, threshold)


# -- text format ----------------------------------------------------
#
# Line 1:        qubits <n>
# Term lines:    <re> <im> <word>     e.g.  -0.25 0 X0Y1Z3   (word 'I' allowed)
# '#' starts a comment; blank lines ignored. Terms serialize in canonical
# order with 17 significant digits, so parse(serialize(op)) == op exactly.


def canonical_serialize(op: SparsePauliOp) -> str:
    lines = [f"qubits {op.n_qubits}"]
    for coeff, word in op.terms():
        lines.append(f"{coeff.real:.17g} {coeff.imag:.17g} {word.label}")
    return "\n".join(lines) + "\n"


def parse_pauli_text(text: str) -> SparsePauliOp:
    n_qubits = None
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n_qubits is None:
            if len(fields) != 2 or fields[0] != "qubits":
                raise PauliParseError(
                    "expected header 'qubits <n>'", line=lineno
                )
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise PauliParseError(
                    f"bad qubit count {fields[1]!r}", line=lineno
                ) from None
            if n_qubits <= 0:
                raise PauliParseError(
                    f"qubit count must be positive, got {n_qubits}",
                    line=lineno,
                )
            continue
        if len(fields) != 3:
            raise PauliParseError(
                "expected '<re> <im> <word>'", line=lineno
            )
        try:
            re_part, im_part = float(fields[0]), float(fields[1])
        except ValueError:
            raise PauliParseError(
                f"bad coefficient {fields[0]!r} {fields[1]!r}", line=lineno
            ) from None
        if not (np.isfinite(re_part) and np.isfinite(im_part)):
            raise PauliParseError("non-finite coefficient", line=lineno)
        try:
            word = PauliWord.from_label(fields[2], n_qubits)
        except PauliParseError as exc:
            raise PauliParseError(str(exc), line=lineno) from None
        terms.append((complex(re_part, im_part), word))
    if n_qubits is None:
        raise PauliParseError("empty input: missing 'qubits <n>' header")
    return SparsePauliOp.from_terms(n_qubits, terms, threshold=0.0)


def load_pauli(path) -> SparsePauliOp:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pauli_text(fh.read())


def save_pauli(op: SparsePauliOp, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_serialize(op))
