"""Second-quantized electronic Hamiltonians and fermion-to-qubit maps.

Spin orbitals are indexed by "modes". For n spatial orbitals:

* blocked ordering (default): alpha_p -> p, beta_p -> n + p
* interleaved ordering:       alpha_p -> 2p, beta_p -> 2p + 1

The electronic Hamiltonian in chemists' notation, g_pqrs = (pq|rs):

    H = E_core + sum_pq h_pq a+_ps a_qs
              + 1/2 sum_pqrs g_pqrs a+_ps a+_rt a_st a_qs

with implicit sums over spins s, t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ilcdress.errors import ContractError, FcidumpParseError
from ilcdress.pauli import PauliWord, SparsePauliOp, op_combine, op_product

#: merge cutoff used when assembling mapped operators; structural
#: cancellations are exact, so this only discards true numerical dust
MAP_PRUNE = 1e-12


@dataclass(frozen=True)
class FermionIntegrals:
    """MO-basis integrals plus system counts from an FCIDUMP file."""

    n_orbitals: int
    n_electrons: int
    ms2: int
    core_energy: float
    h: np.ndarray  # (n, n) one-electron integrals
    g: np.ndarray  # (n, n, n, n) two-electron integrals, chemists' (pq|rs)

    def __post_init__(self):
        n = self.n_orbitals
        if n <= 0:
            raise ContractError(f"n_orbitals must be positive, got {n}")
        if not (0 <= self.n_electrons <= 2 * n):
            raise ContractError(
                f"n_electrons {self.n_electrons} outside [0, {2 * n}]"
            )
        if (self.n_electrons + self.ms2) % 2 or abs(self.ms2) > self.n_electrons:
            raise ContractError(
                f"ms2 {self.ms2} incompatible with {self.n_electrons} electrons"
            )
        if self.h.shape != (n, n) or self.g.shape != (n, n, n, n):
            raise ContractError("integral array shapes do not match n_orbitals")


_HEADER_INT = {
    "NORB": re.compile(r"NORB\s*=\s*(\d+)", re.I),
    "NELEC": re.compile(r"NELEC\s*=\s*(\d+)", re.I),
    "MS2": re.compile(r"MS2\s*=\s*(-?\d+)", re.I),
}


def parse_fcidump(text: str) -> FermionIntegrals:
    """Parse FCIDUMP text (namelist header, then 'value i j k l' lines).

    Index rules per line, 1-based in the file:
      i=j=k=l=0   core energy
      k=l=0       h[i,j] (symmetrized)
      all nonzero g[i,j,k,l], expanded to the full 8-fold symmetry
    Anything else (e.g. 'i 0 0 0' orbital-energy lines) is rejected.
    """
    lines = text.splitlines()
    header = []
    data_start = None
    for lineno, raw in enumerate(lines, start=1):
        header.append(raw)
        if "&END" in raw.upper() or raw.strip() == "/" or raw.strip().endswith("/"):
            data_start = lineno
            break
    if data_start is None:
        raise FcidumpParseError("missing namelist terminator (&END or /)")
    head = " ".join(header)
    fields = {}
    for key, rx in _HEADER_INT.items():
        m = rx.search(head)
        if m:
            fields[key] = int(m.group(1))
    if "NORB" not in fields or "NELEC" not in fields:
        raise FcidumpParseError("header must define NORB and NELEC")
    n = fields["NORB"]
    ms2 = fields.get("MS2", 0)
    h = np.zeros((n, n))
    g = np.zeros((n, n, n, n))
    core = 0.0
    for lineno in range(data_start, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpParseError(
                f"expected 'value i j k l', got {len(parts)} fields",
                line=lineno + 1,
            )
        try:
            val = float(parts[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise FcidumpParseError(
                f"malformed data line {line!r}", line=lineno + 1
            ) from None
        if min(i, j, k, l) < 0 or max(i, j, k, l) > n:
            raise FcidumpParseError(
                f"orbital index outside [0, {n}]", line=lineno + 1
            )
        if i == j == k == l == 0:
            core = val
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpParseError(
                    "one-electron line needs both i and j", line=lineno + 1
                )
            h[i - 1, j - 1] = val
            h[j - 1, i - 1] = val
        elif min(i, j, k, l) > 0:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in (
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            ):
                g[a, b, c, d] = val
        else:
            raise FcidumpParseError(
                f"unsupported index pattern {i} {j} {k} {l}", line=lineno + 1
            )
    return FermionIntegrals(
        n_orbitals=n, n_electrons=fields["NELEC"], ms2=ms2,
        core_energy=core, h=h, g=g,
    )


def load_fcidump(path) -> FermionIntegrals:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_fcidump(fh.read())


# -- symbolic fermion operators ---------------------------------------


class FermionOp:
    """Sum of ladder-operator strings, kept in normal order.

    Terms map tuple((mode, is_creation), ...) -> coefficient, with
    creations first (ascending mode), then annihilations (descending
    mode). Construction normal-orders, so algebra is canonical.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None, *, _normal=False):
        if terms is None:
            self.terms = {}
        elif _normal:
            self.terms = dict(terms)
        else:
            acc = {}
            for ops, coeff in dict(terms).items():
                _normal_order_into(acc, complex(coeff), list(ops))
            self.terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def from_term(cls, ops, coeff=1.0) -> "FermionOp":
        return cls({tuple(ops): coeff})

    @classmethod
    def zero(cls) -> "FermionOp":
        return cls()

    @classmethod
    def identity(cls, coeff=1.0) -> "FermionOp":
        return cls({(): coeff})

    def n_modes(self) -> int:
        """1 + highest mode index appearing (0 for pure scalars)."""
        top = -1
        for ops in self.terms:
            for mode, _ in ops:
                top = max(top, mode)
        return top + 1

    def __add__(self, other):
        acc = dict(self.terms)
        for ops, coeff in other.terms.items():
            acc[ops] = acc.get(ops, 0) + coeff
        return FermionOp(
            {k: v for k, v in acc.items() if v != 0}, _normal=True
        )

    def scaled(self, factor) -> "FermionOp":
        return FermionOp(
            {k: v * factor for k, v in self.terms.items()}, _normal=True
        )

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def __mul__(self, other):
        acc = {}
        for ops_a, ca in self.terms.items():
            for ops_b, cb in other.terms.items():
                _normal_order_into(acc, ca * cb, list(ops_a) + list(ops_b))
        return FermionOp({k: v for k, v in acc.items() if v != 0}, _normal=True)

    def adjoint(self) -> "FermionOp":
        out = {}
        for ops, coeff in self.terms.items():
            rev = tuple((m, not c) for m, c in reversed(ops))
            _normal_order_into(out, complex(coeff).conjugate(), list(rev))
        return FermionOp({k: v for k, v in out.items() if v != 0}, _normal=True)

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"FermionOp(n_terms={len(self.terms)})"


def _normal_order_into(acc: dict, coeff: complex, ops: list) -> None:
    """Normal-order one ladder string into an accumulator dict."""
    stack = [(coeff, ops)]
    while stack:
        c, seq = stack.pop()
        i = 0
        killed = False
        while i < len(seq) - 1:
            (m1, c1), (m2, c2) = seq[i], seq[i + 1]
            if not c1 and c2:
                # a_m1 a+_m2 = delta - a+_m2 a_m1
                if m1 == m2:
                    stack.append((c, seq[:i] + seq[i + 2:]))
                seq = seq[:i] + [(m2, c2), (m1, c1)] + seq[i + 2:]
                c = -c
                i = max(i - 1, 0)
            elif c1 and c2 and m1 > m2:
                seq = seq[:i] + [(m2, c2), (m1, c1)] + seq[i + 2:]
                c = -c
                i = max(i - 1, 0)
            elif not c1 and not c2 and m1 < m2:
                seq = seq[:i] + [(m2, c2), (m1, c1)] + seq[i + 2:]
                c = -c
                i = max(i - 1, 0)
            elif (c1 == c2) and m1 == m2:
                killed = True  # a+a+ or aa on the same mode
                break
            else:
                i += 1
        if not killed:
            key = tuple(seq)
            acc[key] = acc.get(key, 0) + c


def mode_index(p: int, spin: int, n_orbitals: int, ordering: str) -> int:
    """Spin orbital (p, spin) -> mode index. spin: 0 = alpha, 1 = beta."""
    if ordering == "blocked":
        return p + spin * n_orbitals
    if ordering == "interleaved":
        return 2 * p + spin
    raise ContractError(f"unknown ordering {ordering!r}")


def build_hamiltonian(fi: FermionIntegrals, ordering: str = "blocked") -> FermionOp:
    """Second-quantized Hamiltonian over 2*n_orbitals modes."""
    n = fi.n_orbitals
    acc = {(): complex(fi.core_energy)} if fi.core_energy != 0 else {}
    for p in range(n):
        for q in range(n):
            v = fi.h[p, q]
            if v == 0.0:
                continue
            for s in range(2):
                mp = mode_index(p, s, n, ordering)
                mq = mode_index(q, s, n, ordering)
                _normal_order_into(
                    acc, complex(v), [(mp, True), (mq, False)]
                )
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s_orb in range(n):
                    v = fi.g[p, q, r, s_orb]
                    if v == 0.0:
                        continue
                    for s1 in range(2):
                        for s2 in range(2):
                            mp = mode_index(p, s1, n, ordering)
                            mq = mode_index(q, s1, n, ordering)
                            mr = mode_index(r, s2, n, ordering)
                            ms = mode_index(s_orb, s2, n, ordering)
                            _normal_order_into(
                                acc,
                                0.5 * complex(v),
                                [(mp, True), (mr, True), (ms, False), (mq, False)],
                            )
    return FermionOp({k: v for k, v in acc.items() if v != 0}, _normal=True)


# -- fermion-to-qubit maps ---------------------------------------------


def _jw_ladder(mode: int, n_modes: int, creating: bool) -> SparsePauliOp:
    zmask = (1 << mode) - 1
    sign = -0.5j if creating else 0.5j
    return SparsePauliOp.from_terms(
        n_modes,
        [
            (0.5, PauliWord(n_modes, 1 << mode, zmask)),
            (sign, PauliWord(n_modes, 1 << mode, zmask | (1 << mode))),
        ],
    )


def _parity_ladder(mode: int, n_modes: int, creating: bool) -> SparsePauliOp:
    chain = ((1 << n_modes) - 1) & ~((1 << (mode + 1)) - 1)  # X on modes above
    zprev = (1 << (mode - 1)) if mode > 0 else 0
    sign = -0.5j if creating else 0.5j
    return SparsePauliOp.from_terms(
        n_modes,
        [
            (0.5, PauliWord(n_modes, chain | (1 << mode), zprev)),
            (sign, PauliWord(n_modes, chain | (1 << mode), 1 << mode)),
        ],
    )


_LADDERS = {"jw": _jw_ladder, "parity": _parity_ladder}


def map_to_qubits(fop: FermionOp, n_modes: int, mapping: str = "jw",
                  threshold: float = MAP_PRUNE) -> SparsePauliOp:
    """Map a fermion operator to an n_modes-qubit SparsePauliOp.

    mapping 'jw': qubit k stores the occupation of mode k.
    mapping 'parity': qubit k stores the occupation parity of modes 0..k.
    """
    if mapping not in _LADDERS:
        raise ContractError(f"unknown mapping {mapping!r}")
    if fop.n_modes() > n_modes:
        raise ContractError(
            f"operator touches mode {fop.n_modes() - 1}, "
            f"but n_modes is {n_modes}"
        )
    ladder = _LADDERS[mapping]
    cache: dict = {}
    xs, zs, cs = [], [], []
    for ops, coeff in fop.items():
        acc = None
        for mode, creating in ops:
            key = (mode, creating)
            if key not in cache:
                cache[key] = ladder(mode, n_modes, creating)
            img = cache[key]
            acc = img if acc is None else op_product(acc, img, threshold=0.0)
        if acc is None:
            acc = SparsePauliOp.identity(n_modes)
        xs.append(acc.x)
        zs.append(acc.z)
        cs.append(acc.coeffs * coeff)
    if not xs:
        return SparsePauliOp.zero(n_modes)
    return SparsePauliOp.from_arrays(
        n_modes,
        np.concatenate(xs),
        np.concatenate(zs),
        np.concatenate(cs),
        threshold,
    )


def map_integrals(fi: FermionIntegrals, mapping: str = "jw",
                  ordering: str = "blocked",
                  threshold: float = MAP_PRUNE) -> SparsePauliOp:
    """FCIDUMP integrals -> qubit Hamiltonian on 2*n_orbitals qubits."""
    fop = build_hamiltonian(fi, ordering)
    return map_to_qubits(fop, 2 * fi.n_orbitals, mapping, threshold)


# -- spin operators and penalties --------------------------------------


def s_squared_operator(n_orbitals: int, ordering: str = "blocked") -> FermionOp:
    """Total-spin operator S^2 = S-S+ + Sz(Sz+1) over 2n modes."""
    sz = FermionOp.zero()
    sp = FermionOp.zero()
    for p in range(n_orbitals):
        ma = mode_index(p, 0, n_orbitals, ordering)
        mb = mode_index(p, 1, n_orbitals, ordering)
        sz = sz + FermionOp.from_term([(ma, True), (ma, False)], 0.5)
        sz = sz + FermionOp.from_term([(mb, True), (mb, False)], -0.5)
        sp = sp + FermionOp.from_term([(ma, True), (mb, False)], 1.0)
    sm = sp.adjoint()
    return sm * sp + sz * sz + sz


def add_spin_penalty(h: SparsePauliOp, s2: SparsePauliOp,
                     mu: float = 0.5) -> SparsePauliOp:
    """H + (mu/2) S^2; shifts spin-contaminated states up by mu*S(S+1)/2."""
    return op_combine(h, s2, 1.0, 0.5 * mu, threshold=MAP_PRUNE)


def hartree_fock_bitstring(n_orbitals: int, n_electrons: int, ms2: int = 0,
                           ordering: str = "blocked",
                           mapping: str = "jw") -> int:
    """Qubit bitmask of the aufbau determinant under a mapping.

    Under 'jw' bit k is the occupation of mode k; under 'parity' bit k is
    the parity of occupations of modes 0..k.
    """
    if (n_electrons + ms2) % 2 or abs(ms2) > n_electrons:
        raise ContractError(
            f"ms2 {ms2} incompatible with {n_electrons} electrons"
        )
    n_alpha = (n_electrons + ms2) // 2
    n_beta = n_electrons - n_alpha
    if max(n_alpha, n_beta) > n_orbitals:
        raise ContractError("more electrons of one spin than orbitals")
    occ = 0
    for p in range(n_alpha):
        occ |= 1 << mode_index(p, 0, n_orbitals, ordering)
    for p in range(n_beta):
        occ |= 1 << mode_index(p, 1, n_orbitals, ordering)
    if mapping == "jw":
        return occ
    if mapping == "parity":
        bits = 0
        parity = 0
        for k in range(2 * n_orbitals):
            parity ^= (occ >> k) & 1
            bits |= parity << k
        return bits
    raise ContractError(f"unknown mapping {mapping!r}")
