import re
import sys
from pathlib import Path

import numpy as np
import pytest

PKG_ROOT = Path(__file__).parent.parent
FIXTURES = PKG_ROOT / "fixtures"
MANIFESTS = PKG_ROOT / "manifests"

PRIMARY_CLI = [sys.executable, "-m", "ilcdress.cli"]


def read_fcidump(path):
    """Minimal reader for files this package writes, with 8-fold expansion.

    Test-side independent decode; deliberately not imported from the
    package under test.
    """
    text = Path(path).read_text(encoding="utf-8")
    header = re.search(r"NORB\s*=\s*(\d+)", text)
    nelec = re.search(r"NELEC\s*=\s*(\d+)", text)
    assert header and nelec, "missing FCIDUMP header fields"
    n = int(header.group(1))
    h = np.zeros((n, n))
    g = np.zeros((n, n, n, n))
    e_core = 0.0
    body = text.split("&END", 1)[1]
    for line in body.strip().splitlines():
        parts = line.split()
        assert len(parts) == 5, f"bad data line: {line!r}"
        val = float(parts[0])
        i, j, k, l = (int(p) for p in parts[1:])
        if i == j == k == l == 0:
            e_core = val
        elif k == l == 0:
            h[i - 1, j - 1] = val
            h[j - 1, i - 1] = val
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in ((a, b, c, d), (b, a, c, d), (a, b, d, c),
                               (b, a, d, c), (c, d, a, b), (d, c, a, b),
                               (c, d, b, a), (d, c, b, a)):
                g[p, q, r, s] = val
    return e_core, h, g, n, int(nelec.group(1))


@pytest.fixture(scope="session")
def h2_spec():
    from integral_exporter import diatomic

    return diatomic("h2", "H", "H", 0.7414, "sto-3g", 2, 2)


@pytest.fixture(scope="session")
def h2_scf(h2_spec):
    from integral_exporter import run_scf

    return run_scf(h2_spec)
