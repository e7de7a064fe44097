"""Geometry specs and JSON manifest parsing."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .basis import ANGSTROM_TO_BOHR, ATOMIC_NUMBER
from .errors import ExportError


@dataclass(frozen=True)
class GeometrySpec:
    """One molecule to export: geometry in angstrom plus active space."""

    name: str
    symbols: tuple
    coords: tuple  # (n_atoms, 3) angstrom
    basis: str
    active_electrons: int
    active_orbitals: int
    orbital_rule: dict | None = None
    charge: int = 0

    def coords_bohr(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float) * ANGSTROM_TO_BOHR

    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBER[s] for s in self.symbols) - self.charge


def diatomic(name: str, sym1: str, sym2: str, r: float, basis: str,
             active_electrons: int, active_orbitals: int,
             orbital_rule=None) -> GeometrySpec:
    return GeometrySpec(
        name=name,
        symbols=(sym1, sym2),
        coords=((0.0, 0.0, 0.0), (0.0, 0.0, float(r))),
        basis=basis,
        active_electrons=active_electrons,
        active_orbitals=active_orbitals,
        orbital_rule=orbital_rule,
    )


def bent(name: str, center_sym: str, outer_sym: str, r: float,
         angle_deg: float, basis: str, active_electrons: int,
         active_orbitals: int, orbital_rule=None) -> GeometrySpec:
    """Symmetric XY2 molecule, center at the origin, arms in the xz plane."""
    half = math.radians(angle_deg) / 2.0
    x = float(r) * math.sin(half)
    z = float(r) * math.cos(half)
    return GeometrySpec(
        name=name,
        symbols=(center_sym, outer_sym, outer_sym),
        coords=((0.0, 0.0, 0.0), (x, 0.0, z), (-x, 0.0, z)),
        basis=basis,
        active_electrons=active_electrons,
        active_orbitals=active_orbitals,
        orbital_rule=orbital_rule,
    )


def _require(entry: dict, key: str, idx: int):
    if key not in entry:
        raise ExportError(f"manifest entry {idx}: missing key '{key}'")
    return entry[key]


def _entry_to_spec(entry: dict, idx: int, name: str,
                   coords) -> GeometrySpec:
    symbols = tuple(_require(entry, "symbols", idx))
    unknown = [s for s in symbols if s not in ATOMIC_NUMBER]
    if unknown:
        raise ExportError(f"manifest entry {idx}: unknown element {unknown[0]}")
    try:
        coords = tuple(tuple(float(x) for x in row) for row in coords)
    except (TypeError, ValueError) as exc:
        raise ExportError(
            f"manifest entry {idx}: bad coordinate value ({exc})") from exc
    if any(len(row) != 3 for row in coords) or len(coords) != len(symbols):
        raise ExportError(f"manifest entry {idx}: bad coordinate shape")
    return GeometrySpec(
        name=name,
        symbols=symbols,
        coords=coords,
        basis=str(_require(entry, "basis", idx)).lower(),
        active_electrons=int(_require(entry, "active_electrons", idx)),
        active_orbitals=int(_require(entry, "active_orbitals", idx)),
        orbital_rule=entry.get("orbital_rule"),
        charge=int(entry.get("charge", 0)),
    )


def _scan_values(scan: dict, idx: int) -> list:
    try:
        start = float(scan["start"])
        stop = float(scan["stop"])
        step = float(scan["step"])
    except KeyError as exc:
        raise ExportError(f"manifest entry {idx}: scan missing {exc}") from exc
    if step <= 0 or stop < start:
        raise ExportError(f"manifest entry {idx}: bad scan range")
    count = int(round((stop - start) / step)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def load_manifest(path) -> list:
    """Parse a manifest JSON file into a flat list of GeometrySpec.

    Scan entries ({"scan": {"param": "r", ...}}) expand to one spec per
    grid point with the value substituted into coordinate templates, where
    a coordinate may be the string "r" or "-r" instead of a number.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ExportError(f"cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ExportError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ExportError("manifest must be an object with an 'entries' list")
    entries = doc["entries"]
    if not isinstance(entries, list):
        raise ExportError("manifest 'entries' must be a list")
    specs = []
    for idx, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ExportError(f"manifest entry {idx}: not an object")
        base_name = str(_require(entry, "name", idx))
        raw_coords = _require(entry, "coords", idx)
        scan = entry.get("scan")
        if scan is None:
            specs.append(_entry_to_spec(entry, idx, base_name, raw_coords))
            continue
        param = str(scan.get("param", "r"))
        for value in _scan_values(scan, idx):
            coords = []
            for row in raw_coords:
                out = []
                for x in row:
                    if x == param:
                        out.append(value)
                    elif x == "-" + param:
                        out.append(-value)
                    else:
                        out.append(float(x))
                coords.append(out)
            tag = f"{value:.4f}".rstrip("0")
            if tag.endswith("."):
                tag += "0"
            specs.append(_entry_to_spec(
                entry, idx, f"{base_name}_{tag}", coords))
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise ExportError(f"duplicate output name '{dup}' in manifest")
    return specs
