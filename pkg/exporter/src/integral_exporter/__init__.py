"""Active-space electron-integral exporter (FCIDUMP format)."""

from .active import active_integrals, select_active
from .basis import ANGSTROM_TO_BOHR, build_basis
from .casci import casci_ground
from .errors import ExportError, ScfError
from .fcidump import file_sha256, write_fcidump
from .geometry import GeometrySpec, bent, diatomic, load_manifest
from .scf import ScfResult, rhf
from .suite import export_fcidump, export_suite, run_scf

__version__ = "0.1.0"

__all__ = [
    "ANGSTROM_TO_BOHR",
    "ExportError",
    "GeometrySpec",
    "ScfError",
    "ScfResult",
    "active_integrals",
    "bent",
    "build_basis",
    "casci_ground",
    "diatomic",
    "export_fcidump",
    "export_suite",
    "file_sha256",
    "load_manifest",
    "rhf",
    "run_scf",
    "select_active",
    "write_fcidump",
]
