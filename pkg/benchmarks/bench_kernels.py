"""Compiled-extension vs numpy-fallback timing comparison.

Run twice by default: once with whatever backend imports naturally and
once with ILCDRESS_NO_EXT=1 forced in a subprocess, then print both
columns. A single-backend run (inside the subprocess) prints one column.

Usage: python3 benchmarks/bench_kernels.py [--repeat K]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def bench_once(repeat):
    from ilcdress.dis import build_dis, expand_entanglers
    from ilcdress.dressing import (
        dress_ilc,
        dress_qcc,
        random_hermitian_op,
        random_ilc_transform,
        random_qcc_transform,
    )
    from ilcdress.kernels import BACKEND
    from ilcdress.pauli import op_product

    results = {"backend": BACKEND}
    rng = np.random.default_rng(7)
    h = random_hermitian_op(12, 247, rng)
    g = random_hermitian_op(12, 247, rng)
    ansatz = random_ilc_transform(12, 10, rng)
    qcc = random_qcc_transform(12, 4, rng)

    def timeit(name, fn):
        best = min(
            (lambda t0: (fn(), time.perf_counter() - t0)[1])(
                time.perf_counter()
            )
            for _ in range(repeat)
        )
        results[name] = best

    timeit("op_product_247x247", lambda: op_product(h, g, threshold=0.0))
    timeit("ilc_dressing_N10", lambda: dress_ilc(h, ansatz, "inverse", 0.0))

    def qcc_chain():
        d = h
        for word, tau in qcc:
            d = dress_qcc(d, word, tau, 0.0)
        return d

    timeit("qcc_chain_N4", qcc_chain)

    def screening():
        parts = build_dis(h, 0b101010101010)
        if parts:
            expand_entanglers(parts, min(8, len(parts)))
        return parts

    timeit("dis_screening", screening)
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--single", action="store_true",
                        help="print this process's backend only, as JSON")
    args = parser.parse_args()

    if args.single:
        print(json.dumps(bench_once(args.repeat)))
        return

    rows = []
    for force_py in (False, True):
        env = dict(os.environ)
        env["ILCDRESS_NO_EXT"] = "1" if force_py else "0"
        out = subprocess.run(
            [sys.executable, __file__, "--single",
             "--repeat", str(args.repeat)],
            capture_output=True, text=True, env=env, check=True,
        )
        rows.append(json.loads(out.stdout))

    names = [k for k in rows[0] if k != "backend"]
    width = max(len(n) for n in names)
    header = (f"{'kernel':<{width}}  "
              f"{rows[0]['backend']:>12}  {rows[1]['backend']:>12}  speedup")
    print(header)
    print("-" * len(header))
    for name in names:
        a, b = rows[0][name], rows[1][name]
        print(f"{name:<{width}}  {a * 1e3:>10.2f}ms  {b * 1e3:>10.2f}ms  "
              f"{b / a:>6.2f}x")


if __name__ == "__main__":
    main()
