"""Determinant-basis CI oracle."""

import numpy as np
import pytest

from integral_exporter import diatomic, run_scf, select_active
from integral_exporter.active import active_integrals
from integral_exporter.casci import casci_ground

H2_FCI = -1.1372701746609231  # frozen after the first export


def _integrals(spec, ne, no):
    scf = run_scf(spec)
    core, active = select_active(scf, ne, no)
    return active_integrals(scf, core, active)


def test_h2_full_ci(h2_spec):
    e_core, h, g = _integrals(h2_spec, 2, 2)
    vals = casci_ground(e_core, h, g, 2, k=2)
    assert vals[0] == pytest.approx(H2_FCI, abs=1e-12)
    assert vals[0] < vals[1]


def test_h2_correlation_negative(h2_spec, h2_scf):
    e_core, h, g = _integrals(h2_spec, 2, 2)
    e = casci_ground(e_core, h, g, 2, k=1)[0]
    assert e < h2_scf.energy


def test_lih_cas23():
    spec = diatomic("lih", "Li", "H", 1.5949, "sto-3g", 2, 3)
    e = casci_ground(*_integrals(spec, 2, 3), 2, k=1)[0]
    # matches the qubit-side exact diagonalization of the same export
    assert e == pytest.approx(-7.86308084013655, abs=1e-10)


def test_subspace_monotone_in_active_size():
    # growing the variational space cannot raise the ground energy
    spec23 = diatomic("lih", "Li", "H", 1.5949, "sto-3g", 2, 3)
    spec22 = diatomic("lih", "Li", "H", 1.5949, "sto-3g", 2, 2)
    e23 = casci_ground(*_integrals(spec23, 2, 3), 2, k=1)[0]
    e22 = casci_ground(*_integrals(spec22, 2, 2), 2, k=1)[0]
    assert e23 <= e22 + 1e-12


def test_one_electron_limit():
    # single electron in two orbitals: CI matrix is h itself
    h = np.array([[-1.0, 0.2], [0.2, -0.3]])
    g = np.zeros((2, 2, 2, 2))
    vals = casci_ground(0.5, h, g, 1, ms2=1, k=2)
    want = np.linalg.eigvalsh(h) + 0.5
    assert np.allclose(vals, want, atol=1e-12)
