"""Restricted Hartree-Fock with DIIS acceleration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ScfError
from .integrals import (eri_tensor, kinetic_matrix, nuclear_matrix,
                        overlap_matrix)


@dataclass
class ScfResult:
    energy: float           # total, including nuclear repulsion
    e_nuclear: float
    mo_coeff: np.ndarray    # AO x MO
    mo_energy: np.ndarray
    h_core: np.ndarray
    eri: np.ndarray
    overlap: np.ndarray
    n_electrons: int
    iterations: int


def nuclear_repulsion(charges, centers) -> float:
    e = 0.0
    centers = [np.asarray(c, dtype=float) for c in centers]
    for i in range(len(charges)):
        for j in range(i + 1, len(charges)):
            e += charges[i] * charges[j] / np.linalg.norm(
                centers[i] - centers[j])
    return e


def _fix_phases(c: np.ndarray) -> np.ndarray:
    # deterministic MO signs: largest-magnitude AO coefficient positive
    out = c.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        if out[idx, k] < 0:
            out[:, k] = -out[:, k]
    return out


def rhf(aos, charges, centers, n_electrons, max_iter=200, conv=1e-11):
    """Closed-shell SCF; returns ScfResult or raises ScfError."""
    if n_electrons % 2:
        raise ScfError(f"closed-shell RHF needs an even electron count, "
                       f"got {n_electrons}")
    n_occ = n_electrons // 2
    if n_occ > len(aos):
        raise ScfError("more electron pairs than basis functions")
    s = overlap_matrix(aos)
    h = kinetic_matrix(aos) + nuclear_matrix(aos, charges, centers)
    g = eri_tensor(aos)
    e_nn = nuclear_repulsion(charges, centers)

    w, u = np.linalg.eigh(s)
    if w.min() < 1e-10:
        raise ScfError("overlap matrix is numerically singular")
    x = u @ np.diag(w ** -0.5) @ u.T

    def fock(d):
        j = np.einsum("pqrs,rs->pq", g, d)
        k = np.einsum("prqs,rs->pq", g, d)
        return h + j - 0.5 * k

    def density(f):
        fp = x.T @ f @ x
        eps, cp = np.linalg.eigh(fp)
        c = x @ cp
        cocc = c[:, :n_occ]
        return 2.0 * cocc @ cocc.T, c, eps

    d, c, eps = density(h)
    e_prev = None
    focks, errs = [], []
    for it in range(1, max_iter + 1):
        f = fock(d)
        err = f @ d @ s - s @ d @ f
        focks.append(f)
        errs.append(err)
        if len(focks) > 8:
            focks.pop(0)
            errs.pop(0)
        if len(focks) > 1:
            m = len(focks)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = np.sum(errs[i] * errs[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                coef = np.linalg.solve(b, rhs)[:m]
                f = sum(cf * fk for cf, fk in zip(coef, focks))
            except np.linalg.LinAlgError:
                pass
        d, c, eps = density(f)
        e_elec = 0.5 * np.sum(d * (h + fock(d)))
        e_tot = e_elec + e_nn
        err_norm = float(np.max(np.abs(err)))
        if e_prev is not None and abs(e_tot - e_prev) < conv \
                and err_norm < 1e-8:
            return ScfResult(
                energy=float(e_tot), e_nuclear=e_nn,
                mo_coeff=_fix_phases(c), mo_energy=eps, h_core=h, eri=g,
                overlap=s, n_electrons=n_electrons, iterations=it,
            )
        e_prev = e_tot
    raise ScfError(f"SCF did not converge in {max_iter} iterations")
