"""FCIDUMP writer (chemist notation, canonical unique entries)."""

from __future__ import annotations

import hashlib

import numpy as np


def _fmt(val: float, i: int, j: int, k: int, l: int) -> str:
    return f" {val: .16f} {i} {j} {k} {l}"


def write_fcidump(path, core_energy: float, h: np.ndarray, g: np.ndarray,
                  n_electrons: int, ms2: int = 0,
                  threshold: float = 1e-12) -> None:
    """Write integrals with one canonical representative per 8-fold class.

    Entries below threshold are dropped (the reader zero-fills), the core
    energy line comes last.
    """
    n = h.shape[0]
    lines = [
        f"&FCI NORB={n},NELEC={n_electrons},MS2={ms2},",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        "&END",
    ]
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                for l in range(k, n):
                    if (k, l) < (i, j):
                        continue
                    val = g[i, j, k, l]
                    if abs(val) > threshold:
                        lines.append(_fmt(val, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i, n):
            if abs(h[i, j]) > threshold:
                lines.append(_fmt(h[i, j], i + 1, j + 1, 0, 0))
    lines.append(_fmt(core_energy, 0, 0, 0, 0))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
