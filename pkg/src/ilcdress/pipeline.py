"""Iterative dress-and-reoptimize driver and the frozen-ansatz scan.

One round: pick the reference, rank the DIS, solve for an anticommuting
entangler set, optimize the linear ansatz, conjugate the Hamiltonian by
the optimized unitary. The dressed operator's reference expectation
equals the subspace energy, so every round can only lower (or keep) the
reachable reference energy.

The reference for round k is the better of (a) the basis state nearest
the fresh mean-field minimum of the current Hamiltonian and (b) the
previous round's reference, compared under the current Hamiltonian.
Keeping (b) as a candidate makes the reference-energy sequence
non-increasing even when the mean-field search lands in a worse basin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ilcdress.anticom import find_anticommuting_set
from ilcdress.dis import build_dis, expand_entanglers
from ilcdress.dressing import dress_ilc, growth_avg, growth_worst
from ilcdress.errors import ContractError, ExtractionError
from ilcdress.ilc import optimize_ilc
from ilcdress.meanfield import QmfState, basis_expectation, optimize_qmf
from ilcdress.pauli import DEFAULT_PRUNE, SparsePauliOp


@dataclass(frozen=True)
class PipelineConfig:
    d: int = 1
    n_entanglers: int = 4
    m_final: int = 0
    relax_qmf: bool = False
    energy_threshold: float = 1e-6
    gradient_threshold: float = 1e-6
    prune_threshold: float = DEFAULT_PRUNE
    min_flip_weight: int = 1
    brute_force: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.d < 0:
            raise ContractError("dressing count must be >= 0")
        if self.n_entanglers < 1:
            raise ContractError("need at least one entangler per round")
        if self.m_final < 0:
            raise ContractError("final entangler count must be >= 0")
        if self.energy_threshold <= 0 or self.gradient_threshold <= 0:
            raise ContractError("thresholds must be positive")
        if self.prune_threshold < 0:
            raise ContractError("prune threshold must be non-negative")
        if self.min_flip_weight < 1:
            raise ContractError("flip weight floor must be >= 1")


@dataclass(frozen=True)
class RoundRecord:
    index: int
    reference_mask: int
    e_ref: float
    max_gradient: float
    e_ilc: float
    n_set: int
    tau: float
    alphas: tuple
    entanglers: tuple  # labels
    terms_in: int
    terms_out: int
    predicted_avg_terms: float
    predicted_worst_terms: float


@dataclass(frozen=True)
class FinalQcc:
    energy: float
    taus: tuple
    entanglers: tuple  # labels
    reference: QmfState
    converged: bool


@dataclass(frozen=True)
class PipelineResult:
    hamiltonians: list
    rounds: list
    stop_reason: str
    reference_mask: int
    e_ref_final: float
    final_qcc: FinalQcc | None = None
    config: PipelineConfig = field(default_factory=PipelineConfig)

    @property
    def energies(self):
        return [(r.e_ref, r.e_ilc) for r in self.rounds]


def _pick_reference(h: SparsePauliOp, prev_mask: int | None, seed: int):
    """Basis reference: fresh mean-field minimum vs previous round's pick."""
    qmf = optimize_qmf(h, seed=seed)
    mask = qmf.state.nearest_basis_state()
    e = float(np.real(basis_expectation(h, mask)))
    if prev_mask is not None and prev_mask != mask:
        e_prev = float(np.real(basis_expectation(h, prev_mask)))
        if e_prev <= e:
            return prev_mask, e_prev
    return mask, e


def run_pipeline(h: SparsePauliOp, cfg: PipelineConfig,
                 reference: int | None = None) -> PipelineResult:
    """Up to cfg.d dressing rounds, then an optional final product-ansatz
    optimization with cfg.m_final entanglers.

    reference: starting basis bitmask; None lets the mean-field search
    choose. Stops early on an empty DIS, a converged energy, or a
    converged gradient.
    """
    hams = [h]
    rounds = []
    cur = h
    prev_mask = reference
    stop = "rounds-exhausted" if cfg.d > 0 else "no-rounds-requested"
    e_prev_ilc = None
    mask, e_ref = _pick_reference(cur, prev_mask, cfg.seed)

    for k in range(1, cfg.d + 1):
        dis = build_dis(cur, mask, cfg.min_flip_weight)
        if not dis:
            stop = "empty-dis"
            break
        if dis[0].gradient_magnitude < cfg.gradient_threshold:
            stop = "gradient-converged"
            break
        n_q = cur.n_qubits
        want = min(cfg.n_entanglers, 2 * n_q - 1, len(dis))
        words, _ = find_anticommuting_set(
            dis, want, brute_force=cfg.brute_force
        )
        try:
            res = optimize_ilc(cur, mask, words, relax_qmf=cfg.relax_qmf,
                               seed=cfg.seed)
        except ExtractionError:
            stop = "reference-dominated"
            break
        dressed = dress_ilc(cur, res.ansatz, "inverse", cfg.prune_threshold)
        n_used = res.ansatz.n_entanglers
        rounds.append(RoundRecord(
            index=k,
            reference_mask=mask,
            e_ref=e_ref,
            max_gradient=dis[0].gradient_magnitude,
            e_ilc=res.energy,
            n_set=n_used,
            tau=res.ansatz.tau,
            alphas=tuple(res.ansatz.alphas.tolist()),
            entanglers=tuple(w.label for w in words),
            terms_in=cur.n_terms,
            terms_out=dressed.n_terms,
            predicted_avg_terms=cur.n_terms * float(growth_avg(n_used)),
            predicted_worst_terms=cur.n_terms * float(growth_worst(n_used)),
        ))
        hams.append(dressed)
        cur = dressed
        mask, e_ref = _pick_reference(cur, mask, cfg.seed)
        if e_prev_ilc is not None and abs(res.energy - e_prev_ilc) < cfg.energy_threshold:
            stop = "energy-converged"
            break
        e_prev_ilc = res.energy

    final = None
    if cfg.m_final > 0:
        final = _final_qcc(cur, mask, cfg)
    return PipelineResult(
        hamiltonians=hams,
        rounds=rounds,
        stop_reason=stop,
        reference_mask=mask,
        e_ref_final=e_ref,
        final_qcc=final,
        config=cfg,
    )


def _final_qcc(h: SparsePauliOp, mask: int, cfg: PipelineConfig,
               frozen_words=None) -> FinalQcc:
    from ilcdress.sim import MAX_STATEVECTOR_QUBITS, optimize_qcc

    if h.n_qubits > MAX_STATEVECTOR_QUBITS:
        raise ContractError(
            "final product-ansatz optimization needs the statevector path "
            f"(<= {MAX_STATEVECTOR_QUBITS} qubits)"
        )
    if frozen_words is None:
        dis = build_dis(h, mask, cfg.min_flip_weight)
        words = expand_entanglers(dis, cfg.m_final) if dis else []
    else:
        words = list(frozen_words)
    if not words:
        state = QmfState.from_bitstring(mask, h.n_qubits)
        res = optimize_qmf(h, initial=state, seed=cfg.seed)
        return FinalQcc(res.energy, (), (), res.state, res.converged)
    res = optimize_qcc(h, words, mask, optimize_reference=True,
                       seed=cfg.seed)
    return FinalQcc(
        res.energy, tuple(res.taus.tolist()),
        tuple(w.label for w in words), res.reference, res.converged,
    )


@dataclass(frozen=True)
class PointResult:
    index: int
    e_ref: float
    e_ilc_rounds: tuple
    e_final: float | None
    e_exact: float | None
    terms_final: int
    identity_rounds: tuple  # round indices where extraction fell back


def freeze_ansatz_scan(h_list, cfg: PipelineConfig, select_index: int = 0,
                       compute_exact: bool = False,
                       with_base: bool = False):
    """Scan over Hamiltonians reusing one geometry's entangler structure.

    The pipeline runs fully at h_list[select_index]; its per-round
    entangler words and the final product-ansatz words are then frozen
    and reapplied at every other point with amplitudes re-optimized.
    Identical operator structure across points avoids discontinuities in
    scanned energy curves. Rounds whose subspace solution degenerates to
    the reference fall back to the identity transformation at that point.

    with_base additionally returns the select point's PipelineResult,
    whose round records carry the shared entangler words.
    """
    if not h_list:
        raise ContractError("empty Hamiltonian list")
    n_q = h_list[0].n_qubits
    for op in h_list:
        if op.n_qubits != n_q:
            raise ContractError("scan Hamiltonians must share qubit count")
    if not (0 <= select_index < len(h_list)):
        raise ContractError("select index out of bounds")

    base = run_pipeline(h_list[select_index], cfg)
    from ilcdress.pauli import PauliWord

    frozen_rounds = [
        tuple(PauliWord.from_label(lbl, n_q) for lbl in r.entanglers)
        for r in base.rounds
    ]
    frozen_final = None
    if base.final_qcc is not None:
        frozen_final = tuple(
            PauliWord.from_label(lbl, n_q) for lbl in base.final_qcc.entanglers
        )

    out = []
    for idx, h in enumerate(h_list):
        cur = h
        mask, e_ref = _pick_reference(cur, None, cfg.seed)
        e_ref_first = e_ref
        e_rounds = []
        identity_rounds = []
        for rnd, words in enumerate(frozen_rounds, start=1):
            try:
                res = optimize_ilc(cur, mask, words,
                                   relax_qmf=cfg.relax_qmf, seed=cfg.seed)
                cur = dress_ilc(cur, res.ansatz, "inverse",
                                cfg.prune_threshold)
                e_rounds.append(res.energy)
            except ExtractionError:
                identity_rounds.append(rnd)
                e_rounds.append(e_ref)
            mask, e_ref = _pick_reference(cur, mask, cfg.seed)
        e_final = None
        if frozen_final is not None:
            e_final = _final_qcc(cur, mask, cfg, frozen_words=frozen_final).energy
        e_exact = None
        if compute_exact:
            from ilcdress.sim import DENSE_EIG_MAX, ground_state

            cutoff = min(DENSE_EIG_MAX, 8)
            e_exact = ground_state(h, dense_cutoff=cutoff)[0]
        out.append(PointResult(
            index=idx,
            e_ref=e_ref_first,
            e_ilc_rounds=tuple(e_rounds),
            e_final=e_final,
            e_exact=e_exact,
            terms_final=cur.n_terms,
            identity_rounds=tuple(identity_rounds),
        ))
    return (out, base) if with_base else out
