"""Built-in Gaussian basis sets and their expansion into contracted AOs.

Every atomic orbital is stored as a flat list of primitive Cartesian
Gaussians c * x^i y^j z^k exp(-a r^2) on a common center; spherical d
functions are linear combinations of Cartesian components.  Contraction
coefficients in the tables below follow the published convention of
multiplying individually normalized primitives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ExportError

ATOMIC_NUMBER = {"H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6,
                 "N": 7, "O": 8, "F": 9, "Ne": 10}

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092

# (l, exponents, coefficients); sp shells appear as separate s and p rows
# sharing exponents.
_STO3G_SP_S = [-0.09996723, 0.39951283, 0.70011547]
_STO3G_SP_P = [0.15591627, 0.60768372, 0.39195739]
_STO3G_1S = [0.15432897, 0.53532814, 0.44463454]

BASES = {
    "sto-3g": {
        "H": [
            (0, [3.42525091, 0.62391373, 0.16885540], _STO3G_1S),
        ],
        "Li": [
            (0, [16.1195750, 2.9362007, 0.7946505], _STO3G_1S),
            (0, [0.6362897, 0.1478601, 0.0480887], _STO3G_SP_S),
            (1, [0.6362897, 0.1478601, 0.0480887], _STO3G_SP_P),
        ],
        "N": [
            (0, [99.1061690, 18.0523120, 4.8856602], _STO3G_1S),
            (0, [3.7804559, 0.8784966, 0.2857144], _STO3G_SP_S),
            (1, [3.7804559, 0.8784966, 0.2857144], _STO3G_SP_P),
        ],
        "O": [
            (0, [130.7093200, 23.8088610, 6.4436083], _STO3G_1S),
            (0, [5.0331513, 1.1695961, 0.3803890], _STO3G_SP_S),
            (1, [5.0331513, 1.1695961, 0.3803890], _STO3G_SP_P),
        ],
    },
    "6-31g": {
        "H": [
            (0, [18.7311370, 2.8253937, 0.6401217],
             [0.03349460, 0.23472695, 0.81375733]),
            (0, [0.1612778], [1.0]),
        ],
        "O": [
            (0, [5484.6717, 825.23495, 188.04696, 52.9645, 16.89757,
                 5.7996353],
             [0.0018311, 0.0139501, 0.0684451, 0.2327143, 0.4701930,
              0.3585209]),
            (0, [15.539616, 3.5999336, 1.0137618],
             [-0.1107775, -0.1480263, 1.1307670]),
            (1, [15.539616, 3.5999336, 1.0137618],
             [0.0708743, 0.3397528, 0.7271586]),
            (0, [0.2700058], [1.0]),
            (1, [0.2700058], [1.0]),
        ],
    },
    "cc-pvdz": {
        "N": [
            (0, [9046.0, 1357.0, 309.3, 87.73, 28.56, 10.21, 3.838,
                 0.7466, 0.2248],
             [0.000700, 0.005389, 0.027406, 0.103207, 0.278723, 0.448540,
              0.278238, 0.015440, -0.002864]),
            (0, [9046.0, 1357.0, 309.3, 87.73, 28.56, 10.21, 3.838,
                 0.7466, 0.2248],
             [-0.000153, -0.001208, -0.005992, -0.024544, -0.067459,
              -0.158078, -0.121831, 0.549003, 0.578815]),
            (0, [0.2248], [1.0]),
            (1, [13.55, 2.917, 0.7973, 0.2185],
             [0.039919, 0.217169, 0.510319, 0.462214]),
            (1, [0.2185], [1.0]),
            (2, [0.817], [1.0]),
        ],
    },
}

# Cartesian component combos per angular momentum; d shells carry the five
# real harmonics as integer-weighted Cartesian combinations, normalized
# numerically afterwards.
_COMPONENTS = {
    0: [[(1.0, (0, 0, 0))]],
    1: [[(1.0, (1, 0, 0))], [(1.0, (0, 1, 0))], [(1.0, (0, 0, 1))]],
    2: [
        [(1.0, (1, 1, 0))],
        [(1.0, (1, 0, 1))],
        [(1.0, (0, 1, 1))],
        [(1.0, (2, 0, 0)), (-1.0, (0, 2, 0))],
        [(2.0, (0, 0, 2)), (-1.0, (2, 0, 0)), (-1.0, (0, 2, 0))],
    ],
}


@dataclass(frozen=True)
class AtomicOrbital:
    center: tuple
    coefs: tuple      # contraction * combo * normalization factors
    exponents: tuple
    powers: tuple     # one (i, j, k) per primitive term


def _double_fact(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _axis_overlap(n: int, p: float) -> float:
    # integral of x^n exp(-p x^2); zero for odd n
    if n % 2:
        return 0.0
    return _double_fact(n - 1) / (2.0 * p) ** (n // 2) * math.sqrt(math.pi / p)


def _same_center_overlap(pw1, a1, pw2, a2) -> float:
    p = a1 + a2
    out = 1.0
    for n in (pw1[0] + pw2[0], pw1[1] + pw2[1], pw1[2] + pw2[2]):
        out *= _axis_overlap(n, p)
    return out


def _primitive_norm(alpha: float, l: int) -> float:
    # norm of the (l, 0, 0) component; shared across the shell so that
    # harmonic combinations keep their raw monomial weights
    pw = (l, 0, 0)
    return 1.0 / math.sqrt(_same_center_overlap(pw, alpha, pw, alpha))


def build_basis(symbols, coords_bohr, basis_name: str):
    """Expand (symbols, coordinates in bohr) into a list of AtomicOrbital.

    Order: atoms in input order, shells in table order, p components
    x, y, z; d components xy, xz, yz, x2-y2, z2.
    """
    key = basis_name.lower()
    if key not in BASES:
        raise ExportError(f"basis {basis_name!r} not available")
    table = BASES[key]
    aos = []
    for sym, xyz in zip(symbols, coords_bohr):
        if sym not in table:
            raise ExportError(f"basis {basis_name!r} has no element {sym!r}")
        center = tuple(float(c) for c in xyz)
        for l, exps, coefs in table[sym]:
            for combo in _COMPONENTS[l]:
                cs, es, pws = [], [], []
                for alpha, c in zip(exps, coefs):
                    n = _primitive_norm(alpha, l)
                    for w, pw in combo:
                        cs.append(c * n * w)
                        es.append(alpha)
                        pws.append(pw)
                s = 0.0
                for c1, a1, p1 in zip(cs, es, pws):
                    for c2, a2, p2 in zip(cs, es, pws):
                        s += c1 * c2 * _same_center_overlap(p1, a1, p2, a2)
                scale = 1.0 / math.sqrt(s)
                aos.append(AtomicOrbital(
                    center=center,
                    coefs=tuple(c * scale for c in cs),
                    exponents=tuple(es),
                    powers=tuple(pws),
                ))
    return aos
