"""Linear-combination ansatz container shared by the optimizer and dresser."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ilcdress.errors import ContractError, DimensionError

ALPHA_NORM_ATOL = 1e-12


@dataclass(frozen=True)
class IlcAnsatz:
    """Entanglers T_i, one amplitude tau, unit direction vector alpha.

    The represented unitary is exp(-i tau sum_i alpha_i T_i); the
    anticommutation and odd-y constraints make the generator involutory,
    so the exponential closes after one application.

    An empty entangler list is the identity transformation (tau fixed 0).
    """

    entanglers: tuple
    tau: float
    alphas: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        ents = tuple(self.entanglers)
        object.__setattr__(self, "entanglers", ents)
        alphas = np.asarray(self.alphas, dtype=float).copy()
        alphas.flags.writeable = False
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "tau", float(self.tau))
        if alphas.shape != (len(ents),):
            raise DimensionError("need one alpha per entangler")
        if not ents:
            if self.tau != 0.0:
                raise ContractError("empty ansatz must have tau = 0")
            return
        n = ents[0].n_qubits
        for w in ents:
            if w.n_qubits != n:
                raise DimensionError("entangler qubit counts differ")
            if w.y_count % 2 != 1:
                raise ContractError(f"entangler {w.label} has even y-count")
        for a, b in combinations(ents, 2):
            if a.commutes_with(b):
                raise ContractError(
                    f"entanglers {a.label} and {b.label} commute"
                )
        norm = float(np.sum(alphas ** 2))
        if abs(norm - 1.0) > ALPHA_NORM_ATOL:
            raise ContractError(
                f"alpha norm {norm} deviates from 1 beyond {ALPHA_NORM_ATOL}"
            )

    @property
    def n_entanglers(self) -> int:
        return len(self.entanglers)

    @property
    def n_qubits(self) -> int:
        if not self.entanglers:
            raise ContractError("empty ansatz has no qubit count")
        return self.entanglers[0].n_qubits

    @classmethod
    def identity(cls) -> "IlcAnsatz":
        return cls((), 0.0)
