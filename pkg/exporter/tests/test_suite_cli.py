"""Batch driver and command line behavior."""

import json
import subprocess
import sys

import pytest

from conftest import read_fcidump
from integral_exporter import export_suite
from integral_exporter.fcidump import file_sha256

GOOD_ENTRY = {
    "name": "h2",
    "symbols": ["H", "H"],
    "coords": [[0.0, 0.0, 0.0], [0.0, 0.0, 0.7414]],
    "basis": "sto-3g",
    "active_electrons": 2,
    "active_orbitals": 2,
}
BAD_ENTRY = dict(GOOD_ENTRY, name="broken", basis="nope-9z")


def _manifest(tmp_path, entries):
    p = tmp_path / "manifest.json"
    p.write_text(json.dumps({"entries": entries}))
    return p


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "integral_exporter.cli", *args],
        capture_output=True, text=True)


def test_one_entry_manifest(tmp_path):
    out = tmp_path / "out"
    summary = export_suite(_manifest(tmp_path, [GOOD_ENTRY]), out)
    assert [e["name"] for e in summary["exports"]] == ["h2"]
    assert summary["errors"] == []
    target = out / "h2.fcidump"
    assert target.is_file()
    assert summary["exports"][0]["sha256"] == file_sha256(target)
    e_core, h, g, norb, nelec = read_fcidump(target)
    assert (norb, nelec) == (2, 2)
    written = json.loads((out / "manifest.json").read_text())
    assert written == summary


def test_empty_manifest(tmp_path):
    out = tmp_path / "out"
    summary = export_suite(_manifest(tmp_path, []), out)
    assert summary == {"exports": [], "errors": []}
    assert sorted(p.name for p in out.iterdir()) == ["manifest.json"]


def test_corrupt_entry_reported_not_fatal(tmp_path):
    out = tmp_path / "out"
    summary = export_suite(_manifest(tmp_path, [GOOD_ENTRY, BAD_ENTRY]), out)
    assert [e["name"] for e in summary["exports"]] == ["h2"]
    assert [e["name"] for e in summary["errors"]] == ["broken"]
    assert "basis" in summary["errors"][0]["error"]
    assert (out / "h2.fcidump").is_file()
    assert not (out / "broken.fcidump").exists()


def test_cli_success(tmp_path):
    man = _manifest(tmp_path, [GOOD_ENTRY])
    res = run_cli("export", "--spec", str(man), "--out",
                  str(tmp_path / "out"))
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"exported": 1, "failed": 0}
    assert (tmp_path / "out" / "h2.fcidump").is_file()


def test_cli_partial_failure_exit_one(tmp_path):
    man = _manifest(tmp_path, [GOOD_ENTRY, BAD_ENTRY])
    res = run_cli("export", "--spec", str(man), "--out",
                  str(tmp_path / "out"))
    assert res.returncode == 1
    assert json.loads(res.stdout) == {"exported": 1, "failed": 1}
    assert "broken" in res.stderr


def test_cli_bad_manifest_exit_two(tmp_path):
    res = run_cli("export", "--spec", str(tmp_path / "missing.json"),
                  "--out", str(tmp_path / "out"))
    assert res.returncode == 2
    assert "error:" in res.stderr


def test_cli_rejects_malformed_json(tmp_path):
    man = tmp_path / "m.json"
    man.write_text("{oops")
    res = run_cli("export", "--spec", str(man), "--out",
                  str(tmp_path / "out"))
    assert res.returncode == 2


def test_cli_no_abbreviations(tmp_path):
    # --sp must not bind to --spec
    man = _manifest(tmp_path, [])
    res = run_cli("export", "--sp", str(man), "--out",
                  str(tmp_path / "out"))
    assert res.returncode == 2
    assert "--spec" in res.stderr
    assert not (tmp_path / "out").exists()
