"""Active-space reduction of converged SCF solutions."""

from __future__ import annotations

import numpy as np

from .errors import ExportError


def select_active(scf, n_active_electrons: int, n_active_orbitals: int,
                  rule=None):
    """Pick active MO indices; returns (core_indices, active_indices).

    Default rule centers the window on the Fermi level: the occupied half
    takes the highest-energy occupied MOs, the rest the lowest virtuals.
    An explicit rule {"indices": [...]} selects 0-based MO indices; core
    orbitals are then the lowest-energy occupied MOs not selected.
    """
    if n_active_electrons > 2 * n_active_orbitals:
        raise ExportError(
            f"active space ({n_active_electrons}e, {n_active_orbitals}o) "
            f"cannot hold the electrons")
    if n_active_electrons % 2:
        raise ExportError("active electron count must be even for RHF")
    n_occ = scf.n_electrons // 2
    n_core = n_occ - n_active_electrons // 2
    if n_core < 0:
        raise ExportError("more active electrons than the molecule has")
    n_mo = scf.mo_coeff.shape[1]
    if rule is None or rule == "homo-lumo-window":
        active = list(range(n_core, n_core + n_active_orbitals))
        if active and active[-1] >= n_mo:
            raise ExportError("active window exceeds the MO space")
        core = list(range(n_core))
        return core, active
    if isinstance(rule, dict) and "indices" in rule:
        active = sorted(int(i) for i in rule["indices"])
        if len(active) != n_active_orbitals:
            raise ExportError(
                f"rule selects {len(active)} orbitals, spec says "
                f"{n_active_orbitals}")
        if len(set(active)) != len(active):
            raise ExportError("duplicate active orbital index")
        if active[0] < 0 or active[-1] >= n_mo:
            raise ExportError("active orbital index outside the MO space")
        core = [i for i in range(n_mo)
                if i not in set(active)][:n_core]
        if len(core) != n_core:
            raise ExportError("not enough non-active orbitals for the core")
        return core, active
    raise ExportError(f"unknown orbital rule {rule!r}")


def active_integrals(scf, core, active):
    """(core_energy, h_active, g_active) in the active MO basis.

    The effective one-body part folds in the frozen-core Coulomb and
    exchange fields; core_energy includes nuclear repulsion.
    """
    c_core = scf.mo_coeff[:, core]
    c_act = scf.mo_coeff[:, active]
    d_core = 2.0 * c_core @ c_core.T
    j = np.einsum("pqrs,rs->pq", scf.eri, d_core)
    k = np.einsum("prqs,rs->pq", scf.eri, d_core)
    h_eff = scf.h_core + j - 0.5 * k
    e_core = scf.e_nuclear + 0.5 * np.sum(d_core * (scf.h_core + h_eff))
    h_act = c_act.T @ h_eff @ c_act
    g_act = np.einsum("pqrs,pi->iqrs", scf.eri, c_act, optimize=True)
    g_act = np.einsum("iqrs,qj->ijrs", g_act, c_act, optimize=True)
    g_act = np.einsum("ijrs,rk->ijks", g_act, c_act, optimize=True)
    g_act = np.einsum("ijks,sl->ijkl", g_act, c_act, optimize=True)
    return float(e_core), h_act, g_act
