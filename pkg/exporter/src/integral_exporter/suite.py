"""End-to-end export: geometry -> SCF -> active space -> FCIDUMP file."""

from __future__ import annotations

import json
from pathlib import Path

from .active import active_integrals, select_active
from .basis import build_basis, ATOMIC_NUMBER
from .errors import ExportError
from .fcidump import file_sha256, write_fcidump
from .geometry import GeometrySpec, load_manifest
from .scf import ScfResult, rhf


def run_scf(spec: GeometrySpec) -> ScfResult:
    coords = spec.coords_bohr()
    charges = [float(ATOMIC_NUMBER[s]) for s in spec.symbols]
    aos = build_basis(spec.symbols, coords, spec.basis)
    return rhf(aos, charges, coords, spec.n_electrons())


def export_fcidump(spec: GeometrySpec, out_path) -> dict:
    """Export one molecule; returns a summary dict for the manifest."""
    scf = run_scf(spec)
    core, active = select_active(
        scf, spec.active_electrons, spec.active_orbitals, spec.orbital_rule)
    e_core, h_act, g_act = active_integrals(scf, core, active)
    write_fcidump(out_path, e_core, h_act, g_act, spec.active_electrons)
    return {
        "name": spec.name,
        "file": Path(out_path).name,
        "basis": spec.basis,
        "n_orbitals": len(active),
        "n_electrons": spec.active_electrons,
        "scf_energy": scf.energy,
        "core_energy": e_core,
        "sha256": file_sha256(out_path),
    }


def export_suite(manifest_path, out_dir) -> dict:
    """Export every manifest entry into out_dir.

    Per-entry failures are collected, not fatal; the summary manifest
    (with checksums) is always written.
    """
    specs = load_manifest(manifest_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = []
    errors = []
    for spec in specs:
        target = out / f"{spec.name}.fcidump"
        try:
            results.append(export_fcidump(spec, target))
        except ExportError as exc:
            errors.append({"name": spec.name, "error": str(exc)})
    summary = {"exports": results, "errors": errors}
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary


__all__ = ["run_scf", "export_fcidump", "export_suite"]
