"""Run provenance and small process-level helpers.

Outputs of the command-line tool are byte-identical across reruns with
the same inputs and seed. Anything volatile (wall-clock timings) lives
in a sidecar manifest next to the output file, never inside it.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ilcdress.errors import ContractError

TOOL_VERSION = "0.1.0"
THREADS_ENV = "ILCDRESS_THREADS"


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def thread_count() -> int:
    """Worker count: ILCDRESS_THREADS when set, else the CPU count."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ContractError(f"{THREADS_ENV}={raw!r} is not an integer")
        if n < 1:
            raise ContractError(f"{THREADS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def parallel_map(fn, items, threads: int | None = None) -> list:
    """Map fn over items on a worker pool, results in input order.

    Tasks must not depend on shared mutable state; any writing happens
    after collection, by the caller, in input order.
    """
    items = list(items)
    n = thread_count() if threads is None else threads
    if n < 1:
        raise ContractError(f"thread count must be >= 1, got {n}")
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass
class RunManifest:
    """Provenance record accompanying every file a command writes."""

    command: str
    config: dict
    input_hashes: dict = field(default_factory=dict)
    seed: int | None = None
    version: str = TOOL_VERSION
    wall_seconds: float = 0.0

    def add_input(self, path) -> None:
        self.input_hashes[str(path)] = file_sha256(path)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "input_hashes": self.input_hashes,
            "seed": self.seed,
            "version": self.version,
            "wall_seconds": self.wall_seconds,
        }

    def write_sidecar(self, out_path) -> str:
        """Write <out_path>.manifest.json and return its path."""
        sidecar = str(out_path) + ".manifest.json"
        with open(sidecar, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        return sidecar
