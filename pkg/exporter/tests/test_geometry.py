"""Manifest parsing and scan expansion."""

import json
import math

import numpy as np
import pytest

from integral_exporter import ExportError, bent, diatomic, load_manifest


def _write(tmp_path, doc):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    return p


BASE = {
    "name": "x",
    "symbols": ["H", "H"],
    "coords": [[0.0, 0.0, 0.0], [0.0, 0.0, 0.7]],
    "basis": "sto-3g",
    "active_electrons": 2,
    "active_orbitals": 2,
}


def test_single_entry(tmp_path):
    specs = load_manifest(_write(tmp_path, {"entries": [BASE]}))
    assert len(specs) == 1
    assert specs[0].name == "x"
    assert specs[0].n_electrons() == 2
    assert specs[0].coords_bohr()[1, 2] == pytest.approx(0.7 * 1.8897261246,
                                                         abs=1e-8)


def test_scan_expansion(tmp_path):
    doc = {"entries": [dict(
        BASE,
        coords=[[0.0, 0.0, 0.0], [0.0, 0.0, "r"]],
        scan={"param": "r", "start": 1.0, "stop": 5.0, "step": 0.1},
    )]}
    specs = load_manifest(_write(tmp_path, doc))
    assert len(specs) == 41
    assert specs[0].name == "x_1.0"
    assert specs[-1].name == "x_5.0"
    assert specs[17].coords[1][2] == pytest.approx(2.7, abs=1e-12)


def test_negative_param_substitution(tmp_path):
    doc = {"entries": [dict(
        BASE,
        coords=[[0.0, 0.0, "-r"], [0.0, 0.0, "r"]],
        scan={"param": "r", "start": 0.5, "stop": 0.5, "step": 0.1},
    )]}
    (spec,) = load_manifest(_write(tmp_path, doc))
    assert spec.coords[0][2] == -0.5
    assert spec.coords[1][2] == 0.5


TEMPLATE = [[0.0, 0.0, 0.0], [0.0, 0.0, "r"]]


@pytest.mark.parametrize("mutate,match", [
    (lambda d: d.pop("name"), "missing key"),
    (lambda d: d.pop("basis"), "missing key"),
    (lambda d: d.update(symbols=["H", "Xx"]), "unknown element"),
    (lambda d: d.update(coords=[[0.0, 0.0]]), "bad coordinate"),
    (lambda d: d.update(coords=TEMPLATE), "bad coordinate value"),
    (lambda d: d.update(coords=TEMPLATE,
                        scan={"param": "r", "start": 2.0, "stop": 1.0,
                              "step": 0.1}), "bad scan range"),
    (lambda d: d.update(coords=TEMPLATE,
                        scan={"start": 1.0, "stop": 2.0}), "scan missing"),
])
def test_invalid_entries_rejected(tmp_path, mutate, match):
    doc = {"entries": [dict(BASE)]}
    mutate(doc["entries"][0])
    with pytest.raises(ExportError, match=match):
        load_manifest(_write(tmp_path, doc))


def test_duplicate_names_rejected(tmp_path):
    doc = {"entries": [BASE, BASE]}
    with pytest.raises(ExportError, match="duplicate"):
        load_manifest(_write(tmp_path, doc))


def test_not_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("{nope")
    with pytest.raises(ExportError, match="JSON"):
        load_manifest(p)


def test_missing_file(tmp_path):
    with pytest.raises(ExportError, match="cannot read"):
        load_manifest(tmp_path / "absent.json")


def test_builders():
    d = diatomic("d", "N", "N", 1.1, "cc-pvdz", 6, 6)
    assert d.coords[1] == (0.0, 0.0, 1.1)
    assert d.n_electrons() == 14
    w = bent("w", "O", "H", 0.9578, 107.6, "6-31g", 4, 4)
    (ox, oy, oz), h1, h2 = np.asarray(w.coords)
    assert (ox, oy, oz) == (0.0, 0.0, 0.0)
    r1 = np.linalg.norm(h1)
    r2 = np.linalg.norm(h2)
    assert r1 == pytest.approx(0.9578, abs=1e-12)
    assert r2 == pytest.approx(0.9578, abs=1e-12)
    cosang = float(h1 @ h2) / (r1 * r2)
    assert math.degrees(math.acos(cosang)) == pytest.approx(107.6, abs=1e-9)
