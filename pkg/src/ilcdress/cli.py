"""Command-line front end: mapping, screening, dressing, scans, benchmarks.

Every command is deterministic given (inputs, seed): reruns emit
byte-identical CSV/JSON. Wall-clock timings go to the .manifest.json
sidecar written next to each output file, never into the output itself.

Exit codes: 0 ok, 2 bad input, 3 infeasible anticommuting set,
4 numerical non-convergence.

Option precedence: command-line flags > --config JSON file > built-in
defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from ilcdress.anticom import find_anticommuting_set, solve_for_words
from ilcdress.dis import build_dis, expand_entanglers
from ilcdress.dressing import (
    dress_ilc,
    dress_ilc_reported,
    dress_qcc,
    growth_avg,
    growth_worst,
    random_hermitian_op,
    random_ilc_transform,
    random_qcc_transform,
)
from ilcdress.errors import (
    ContractError,
    ConvergenceError,
    DimensionError,
    FcidumpParseError,
    InfeasibleError,
    PauliParseError,
)
from ilcdress.fermion import (
    MAP_PRUNE,
    add_spin_penalty,
    load_fcidump,
    map_integrals,
    map_to_qubits,
    s_squared_operator,
)
from ilcdress.ilc import optimize_ilc
from ilcdress.meanfield import basis_expectation, optimize_qmf
from ilcdress.pauli import (
    DEFAULT_PRUNE,
    PauliWord,
    load_pauli,
    save_pauli,
)
from ilcdress.pipeline import PipelineConfig, freeze_ansatz_scan, run_pipeline
from ilcdress.util import RunManifest, parallel_map

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_NONCONVERGED = 4

ENERGY_MONO_TOL = 1e-10

_T0 = time.perf_counter()


# -- plumbing -----------------------------------------------------------


def _py(x):
    """JSON-ready copy: numpy scalars/arrays to plain Python."""
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_py(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_py(v) for v in x]
    if isinstance(x, dict):
        return {k: _py(v) for k, v in x.items()}
    return x


def _json_text(doc) -> str:
    return json.dumps(_py(doc), indent=2, sort_keys=True) + "\n"


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _manifest(cfg: dict, inputs=()) -> RunManifest:
    man = RunManifest(
        command=cfg["cmd"],
        config=_py({k: v for k, v in cfg.items() if k not in ("cmd",)}),
        seed=cfg.get("seed"),
    )
    for path in inputs:
        man.add_input(path)
    return man


def _emit(text: str, out, man: RunManifest) -> None:
    """Write text to the out path (stdout when empty) plus its sidecar."""
    if not out or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w") as f:
        f.write(text)
    man.wall_seconds = time.perf_counter() - _T0
    man.write_sidecar(out)


def _finish_file(path, man: RunManifest) -> None:
    man.wall_seconds = time.perf_counter() - _T0
    man.write_sidecar(path)


def _bits_to_mask(s: str, n_qubits: int) -> int:
    """Bitstring with qubit 0 leftmost -> bitmask."""
    if len(s) != n_qubits or any(c not in "01" for c in s):
        raise ContractError(
            f"bit vector must be {n_qubits} characters of 0/1, got {s!r}"
        )
    return sum(1 << k for k, c in enumerate(s) if c == "1")


def _mask_to_bits(mask: int, n_qubits: int) -> str:
    return "".join("1" if (mask >> k) & 1 else "0" for k in range(n_qubits))


def _reference_mask(h, spec: str, seed: int) -> int:
    """'auto' picks the mean-field minimum's nearest basis state."""
    if spec == "auto":
        return optimize_qmf(h, seed=seed).state.nearest_basis_state()
    return _bits_to_mask(spec, h.n_qubits)


def _pipeline_config(cfg: dict) -> PipelineConfig:
    return PipelineConfig(
        d=cfg["d"],
        n_entanglers=cfg["n_entanglers"],
        m_final=cfg["m_final"],
        relax_qmf=cfg["relax_qmf"],
        energy_threshold=cfg["energy_threshold"],
        gradient_threshold=cfg["gradient_threshold"],
        prune_threshold=cfg["prune"],
        min_flip_weight=cfg["min_weight"],
        brute_force=cfg["brute_force"],
        seed=cfg["seed"],
    )


def _default_out(input_path: str, suffix: str) -> str:
    base = os.path.basename(str(input_path))
    stem = base.rsplit(".", 1)[0] if "." in base else base
    return stem + suffix


# -- commands -----------------------------------------------------------


def cmd_map(cfg: dict) -> int:
    fi = load_fcidump(cfg["fcidump"])
    h = map_integrals(fi, cfg["mapping"], cfg["ordering"], cfg["threshold"])
    if cfg["spin_penalty"] != 0.0:
        s2 = map_to_qubits(
            s_squared_operator(fi.n_orbitals, cfg["ordering"]),
            2 * fi.n_orbitals, cfg["mapping"], cfg["threshold"],
        )
        h = add_spin_penalty(h, s2, cfg["spin_penalty"])
    out = cfg["out"] or _default_out(cfg["fcidump"], ".pauli")
    man = _manifest(cfg, [cfg["fcidump"]])
    save_pauli(h, out)
    _finish_file(out, man)
    print(f"wrote {out}: {h.n_qubits} qubits, {h.n_terms} terms")
    return EXIT_OK


def cmd_qmf_opt(cfg: dict) -> int:
    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    res = optimize_qmf(h, seed=cfg["seed"], restarts=cfg["restarts"])
    doc = {
        "n_qubits": h.n_qubits,
        "energy": res.energy,
        "thetas": res.state.thetas,
        "phis": res.state.phis,
        "nearest_basis_state": _mask_to_bits(
            res.state.nearest_basis_state(), h.n_qubits
        ),
        "converged": res.converged,
    }
    _emit(_json_text(doc), cfg["out"], man)
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_dis(cfg: dict) -> int:
    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    mask = _reference_mask(h, cfg["reference"], cfg["seed"])
    parts = build_dis(h, mask, cfg["min_weight"])
    if cfg["limit"] > 0:
        parts = parts[:cfg["limit"]]
    rows = [
        (
            rank,
            _mask_to_bits(p.flip_x, h.n_qubits),
            p.gradient_magnitude,
            p.representative.label,
        )
        for rank, p in enumerate(parts, start=1)
    ]
    _emit(_csv_text(("rank", "flip", "gradient", "representative"), rows),
          cfg["out"], man)
    return EXIT_OK


def cmd_anticom(cfg: dict) -> int:
    flips = cfg["flips"]
    if not flips:
        raise ContractError("need at least one flip vector")
    n_q = cfg["n_qubits"] or len(flips[0])
    masks = [_bits_to_mask(s, n_q) for s in flips]
    words = solve_for_words(masks, n_q)
    if words is None:
        print("infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    man = _manifest(cfg)
    _emit("\n".join(w.label for w in words) + "\n", cfg["out"], man)
    return EXIT_OK


def cmd_ilc_opt(cfg: dict) -> int:
    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    mask = _reference_mask(h, cfg["reference"], cfg["seed"])
    e_ref = float(np.real(basis_expectation(h, mask)))
    parts = build_dis(h, mask, cfg["min_weight"])
    want = min(cfg["n_entanglers"], 2 * h.n_qubits - 1, max(len(parts), 1))
    words, _ = find_anticommuting_set(parts, want,
                                      brute_force=cfg["brute_force"])
    res = optimize_ilc(h, mask, words, relax_qmf=cfg["relax_qmf"],
                       max_outer=cfg["max_outer"], tol=cfg["tol"],
                       seed=cfg["seed"])
    doc = {
        "n_qubits": h.n_qubits,
        "reference": _mask_to_bits(mask, h.n_qubits),
        "e_ref": e_ref,
        "energy": res.energy,
        "tau": res.ansatz.tau,
        "alphas": res.ansatz.alphas,
        "entanglers": [w.label for w in res.ansatz.entanglers],
        "iterations": res.n_outer,
        "converged": res.converged,
    }
    _emit(_json_text(doc), cfg["out"], man)
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_dress(cfg: dict) -> int:
    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    out = cfg["out"] or _default_out(cfg["pauli"], ".dressed.pauli")
    if cfg["word"]:
        if cfg["tau"] is None:
            raise ContractError("--word requires --tau")
        word = PauliWord.from_label(cfg["word"], h.n_qubits)
        dressed = dress_qcc(h, word, cfg["tau"], cfg["prune"])
        report = {
            "mode": "qcc",
            "input_terms": h.n_terms,
            "output_terms": dressed.n_terms,
        }
    else:
        mask = _reference_mask(h, cfg["reference"], cfg["seed"])
        parts = build_dis(h, mask, cfg["min_weight"])
        want = min(cfg["n_entanglers"], 2 * h.n_qubits - 1,
                   max(len(parts), 1))
        words, _ = find_anticommuting_set(parts, want,
                                          brute_force=cfg["brute_force"])
        res = optimize_ilc(h, mask, words, relax_qmf=cfg["relax_qmf"],
                           seed=cfg["seed"])
        dressed, rep = dress_ilc_reported(h, res.ansatz, cfg["direction"],
                                          cfg["prune"])
        report = {
            "mode": "ilc",
            "input_terms": rep.input_terms,
            "output_terms": rep.output_terms,
            "growth_factor": rep.growth_factor,
            "predicted_avg": rep.predicted_avg,
            "predicted_worst": rep.predicted_worst,
            "energy": res.energy,
            "entanglers": [w.label for w in res.ansatz.entanglers],
        }
    save_pauli(dressed, out)
    _finish_file(out, man)
    sys.stdout.write(_json_text({"out": out, **report}))
    return EXIT_OK


def _qcc_statevector(h, final):
    """Dense state of the optimized product ansatz, dressed frame."""
    from ilcdress.sim import apply_qcc_unitary, prepare_qmf

    words = [PauliWord.from_label(lbl, h.n_qubits)
             for lbl in final.entanglers]
    psi = prepare_qmf(final.reference)
    return apply_qcc_unitary(psi, words, np.asarray(final.taus))


def cmd_pipeline(cfg: dict) -> int:
    from ilcdress.sim import ITERATIVE_EIG_MAX, ground_state

    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    pc = _pipeline_config(cfg)
    ref = (None if cfg["reference"] == "auto"
           else _bits_to_mask(cfg["reference"], h.n_qubits))
    res = run_pipeline(h, pc, reference=ref)

    e_refs = [r.e_ref for r in res.rounds] + [res.e_ref_final]
    monotone = all(b <= a + ENERGY_MONO_TOL
                   for a, b in zip(e_refs, e_refs[1:]))
    assert monotone, "reference energy increased across dressings"

    rounds_doc = []
    pred_cum = float(h.n_terms)
    for r in res.rounds:
        pred_cum *= float(growth_avg(r.n_set))
        rounds_doc.append({
            "index": r.index,
            "reference": _mask_to_bits(r.reference_mask, h.n_qubits),
            "e_ref": r.e_ref,
            "max_gradient": r.max_gradient,
            "e_ilc": r.e_ilc,
            "n_set": r.n_set,
            "tau": r.tau,
            "alphas": r.alphas,
            "entanglers": list(r.entanglers),
            "terms_in": r.terms_in,
            "terms_out": r.terms_out,
            "terms_predicted_avg": r.predicted_avg_terms,
            "terms_predicted_worst": r.predicted_worst_terms,
            "terms_predicted_cumulative": pred_cum,
        })

    final_doc = None
    energy = res.e_ref_final
    if res.final_qcc is not None:
        f = res.final_qcc
        energy = f.energy
        final_doc = {
            "energy": f.energy,
            "taus": f.taus,
            "entanglers": list(f.entanglers),
            "thetas": f.reference.thetas,
            "phis": f.reference.phis,
            "converged": f.converged,
        }

    exact_energy = None
    overlap = None
    if h.n_qubits <= ITERATIVE_EIG_MAX:
        last = res.hamiltonians[-1]
        exact_energy, gs = ground_state(last)
        if res.final_qcc is not None:
            psi = _qcc_statevector(last, res.final_qcc)
            overlap = float(abs(np.vdot(gs, psi)) ** 2)

    doc = {
        "n_qubits": h.n_qubits,
        "terms_initial": h.n_terms,
        "stop_reason": res.stop_reason,
        "reference_monotone": monotone,
        "rounds": rounds_doc,
        "e_ref_final": res.e_ref_final,
        "final": final_doc,
        "exact_energy": exact_energy,
        "overlap_with_exact": overlap,
        "energy": energy,
    }
    _emit(_json_text(doc), cfg["out"], man)

    if cfg["dump_steps"]:
        os.makedirs(cfg["dump_steps"], exist_ok=True)
        for k, ham in enumerate(res.hamiltonians):
            path = os.path.join(cfg["dump_steps"], f"step{k}.pauli")
            save_pauli(ham, path)
            _finish_file(path, man)

    if res.final_qcc is not None and not res.final_qcc.converged:
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_scan(cfg: dict) -> int:
    from ilcdress.sim import ITERATIVE_EIG_MAX

    paths = cfg["paulis"]
    hs = [load_pauli(p) for p in paths]
    man = _manifest(cfg, paths)
    pc = _pipeline_config(cfg)
    compute_exact = (not cfg["no_exact"]
                     and hs[0].n_qubits <= ITERATIVE_EIG_MAX)
    points, base = freeze_ansatz_scan(hs, pc, cfg["select"],
                                      compute_exact=compute_exact,
                                      with_base=True)
    for r in base.rounds:
        print(f"round {r.index} entanglers: {' '.join(r.entanglers)}",
              file=sys.stderr)
    if base.final_qcc is not None:
        print(f"final entanglers: {' '.join(base.final_qcc.entanglers)}",
              file=sys.stderr)
    rows = [
        (
            p.index,
            p.e_ref,
            p.e_ilc_rounds[-1] if p.e_ilc_rounds else None,
            p.e_final,
            p.e_exact,
            p.terms_final,
        )
        for p in points
    ]
    _emit(_csv_text(
        ("point", "E_ref", "E_ilc", "E_final", "E_exact", "terms"), rows,
    ), cfg["out"], man)
    return EXIT_OK


def cmd_vqe(cfg: dict) -> int:
    from ilcdress.sim import (
        ITERATIVE_EIG_MAX,
        MAX_STATEVECTOR_QUBITS,
        apply_qcc_unitary,
        ground_state,
        optimize_qcc,
        prepare_qmf,
    )

    h = load_pauli(cfg["pauli"])
    if h.n_qubits > MAX_STATEVECTOR_QUBITS:
        raise ContractError(
            f"statevector path capped at {MAX_STATEVECTOR_QUBITS} qubits"
        )
    man = _manifest(cfg, [cfg["pauli"]])
    qmf = optimize_qmf(h, seed=cfg["seed"])
    mask = (qmf.state.nearest_basis_state() if cfg["reference"] == "auto"
            else _bits_to_mask(cfg["reference"], h.n_qubits))
    words = []
    if cfg["m"] > 0:
        parts = build_dis(h, mask, cfg["min_weight"])
        if parts:
            words = expand_entanglers(parts, cfg["m"])
    res = optimize_qcc(h, words, qmf.state, optimize_reference=True,
                       restarts=cfg["restarts"], seed=cfg["seed"])
    overlap = None
    if h.n_qubits <= ITERATIVE_EIG_MAX:
        _, gs = ground_state(h)
        psi = apply_qcc_unitary(prepare_qmf(res.reference),
                                words, res.taus)
        overlap = float(abs(np.vdot(gs, psi)) ** 2)
    doc = {
        "n_qubits": h.n_qubits,
        "e_ref": qmf.energy,
        "energy": res.energy,
        "overlap_with_fci": overlap,
        "taus": res.taus,
        "angles": {"thetas": res.reference.thetas,
                   "phis": res.reference.phis},
        "entanglers": [w.label for w in words],
        "converged": res.converged,
    }
    _emit(_json_text(doc), cfg["out"], man)
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_spectrum(cfg: dict) -> int:
    from ilcdress.sim import eigenvalues

    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    k = cfg["k"] if cfg["k"] > 0 else None
    vals = eigenvalues(h, k)
    doc = {
        "n_qubits": h.n_qubits,
        "k": len(vals),
        "ground_energy": float(vals[0]),
        "eigenvalues": vals,
    }
    _emit(_json_text(doc), cfg["out"], man)
    return EXIT_OK


def cmd_bench_growth(cfg: dict) -> int:
    n_list = [int(s) for s in str(cfg["n_list"]).split(",") if s.strip()]
    if not n_list or cfg["trials"] < 1:
        raise ContractError("need a nonempty N list and trials >= 1")
    h0 = None
    inputs = []
    if cfg["hamiltonian"]:
        h0 = load_pauli(cfg["hamiltonian"])
        inputs.append(cfg["hamiltonian"])
    n_q = h0.n_qubits if h0 is not None else cfg["n_qubits"]
    m = h0.n_terms if h0 is not None else cfg["m_terms"]
    man = _manifest(cfg, inputs)

    # per-task RNG streams keyed by (seed, N, trial): pool size cannot
    # change the counts, only the wall time
    def run(task):
        n_set, trial = task
        rng = np.random.default_rng([cfg["seed"], n_set, trial])
        h = h0 if h0 is not None else random_hermitian_op(n_q, m, rng)
        if cfg["kind"] == "ilc":
            ans = random_ilc_transform(n_q, n_set, rng)
            return dress_ilc(h, ans, "inverse", cfg["prune"]).n_terms
        d = h
        for word, tau in random_qcc_transform(n_q, n_set, rng):
            d = dress_qcc(d, word, tau, cfg["prune"])
        return d.n_terms

    tasks = [(n_set, t) for n_set in n_list for t in range(cfg["trials"])]
    counts = parallel_map(run, tasks, cfg["threads"])

    header = ("n_entanglers", "trial", "terms", "mean_terms", "std_terms",
              "predicted_avg", "predicted_worst", "predicted_qcc")
    rows = []
    pos = 0
    for n_set in n_list:
        chunk = counts[pos:pos + cfg["trials"]]
        pos += cfg["trials"]
        pa = m * float(growth_avg(n_set))
        pw = m * float(growth_worst(n_set))
        pq = m * 1.5 ** n_set
        for t, c in enumerate(chunk):
            rows.append((n_set, t, c, None, None, pa, pw, pq))
        mean = float(np.mean(chunk))
        std = float(np.std(chunk, ddof=1)) if len(chunk) > 1 else 0.0
        rows.append((n_set, "mean", None, mean, std, pa, pw, pq))
    _emit(_csv_text(header, rows), cfg["out"], man)
    return EXIT_OK


def cmd_bench_qcc_sample(cfg: dict) -> int:
    h = load_pauli(cfg["pauli"])
    man = _manifest(cfg, [cfg["pauli"]])
    mask = _reference_mask(h, cfg["reference"], cfg["seed"])
    parts = build_dis(h, mask, cfg["min_weight"])
    if not parts:
        raise InfeasibleError("empty DIS: nothing to sample")
    words = expand_entanglers(parts, cfg["n_entanglers"])
    m0 = h.n_terms

    def run(sample):
        rng = np.random.default_rng([cfg["seed"], sample])
        taus = rng.uniform(0.0, 2.0 * np.pi, len(words))
        d = h
        for word, tau in zip(words, taus):
            d = dress_qcc(d, word, tau, cfg["prune"])
        return d.n_terms

    counts = parallel_map(run, range(cfg["samples"]), cfg["threads"])
    rows = [(s, c, c / m0) for s, c in enumerate(counts)]
    _emit(_csv_text(("sample", "terms", "ratio"), rows), cfg["out"], man)
    mean = float(np.mean(counts))
    std = float(np.std(counts, ddof=1)) if len(counts) > 1 else 0.0
    print(
        f"N={len(words)} samples={len(counts)} mean={mean!r} std={std!r} "
        f"reference_qcc_avg={m0 * 1.5 ** len(words)!r}",
        file=sys.stderr,
    )
    return EXIT_OK


# -- argument parsing ---------------------------------------------------

# hard defaults; a --config JSON file overrides these, explicit flags
# override both
DEFAULTS = {
    "map": {
        "out": "", "mapping": "jw", "ordering": "blocked",
        "spin_penalty": 0.0, "threshold": MAP_PRUNE,
    },
    "qmf-opt": {"out": "", "seed": 0, "restarts": 4},
    "dis": {
        "out": "", "reference": "auto", "min_weight": 1, "limit": 0,
        "seed": 0,
    },
    "anticom": {"out": "", "n_qubits": 0},
    "ilc-opt": {
        "out": "", "reference": "auto", "n_entanglers": 4,
        "min_weight": 1, "relax_qmf": False, "brute_force": False,
        "max_outer": 50, "tol": 1e-9, "seed": 0,
    },
    "dress": {
        "out": "", "word": "", "tau": None, "reference": "auto",
        "n_entanglers": 4, "min_weight": 1, "relax_qmf": False,
        "brute_force": False, "direction": "inverse",
        "prune": DEFAULT_PRUNE, "seed": 0,
    },
    "pipeline": {
        "out": "", "d": 1, "n_entanglers": 4, "m_final": 0,
        "reference": "auto", "relax_qmf": False, "brute_force": False,
        "energy_threshold": 1e-6, "gradient_threshold": 1e-6,
        "prune": DEFAULT_PRUNE, "min_weight": 1, "seed": 0,
        "dump_steps": "",
    },
    "scan": {
        "out": "", "select": 0, "d": 1, "n_entanglers": 4, "m_final": 0,
        "relax_qmf": False, "brute_force": False,
        "energy_threshold": 1e-6, "gradient_threshold": 1e-6,
        "prune": DEFAULT_PRUNE, "min_weight": 1, "seed": 0,
        "no_exact": False,
    },
    "vqe": {
        "out": "", "m": 4, "reference": "auto", "min_weight": 1,
        "restarts": 0, "seed": 0,
    },
    "spectrum": {"out": "", "k": 0},
    "bench-growth": {
        "out": "", "n_qubits": 12, "m_terms": 247, "n_list": "4,8,10",
        "trials": 10, "kind": "ilc", "prune": 0.0, "hamiltonian": "",
        "seed": 0, "threads": None,
    },
    "bench-qcc-sample": {
        "out": "", "n_entanglers": 4, "samples": 500,
        "reference": "auto", "min_weight": 1, "prune": DEFAULT_PRUNE,
        "seed": 0, "threads": None,
    },
}

COMMANDS = {
    "map": cmd_map,
    "qmf-opt": cmd_qmf_opt,
    "dis": cmd_dis,
    "anticom": cmd_anticom,
    "ilc-opt": cmd_ilc_opt,
    "dress": cmd_dress,
    "pipeline": cmd_pipeline,
    "scan": cmd_scan,
    "vqe": cmd_vqe,
    "spectrum": cmd_spectrum,
    "bench-growth": cmd_bench_growth,
    "bench-qcc-sample": cmd_bench_qcc_sample,
}

S = argparse.SUPPRESS


class _SubParser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)


def _add_common(p):
    p.add_argument("--config", default=None,
                   help="JSON file with option defaults")
    p.add_argument("--out", default=S,
                   help="output path (default: stdout, or derived)")
    p.add_argument("--seed", type=int, default=S, help="RNG seed")


def build_parser() -> argparse.ArgumentParser:
    # optionals default to SUPPRESS so the config file can tell
    # explicitly-passed flags from absent ones; abbreviations are off so
    # a typo like --d cannot silently bind to --dump-steps
    parser = argparse.ArgumentParser(
        prog="ilcdress",
        description="Pauli-Hamiltonian dressing toolkit",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_SubParser)

    p = sub.add_parser("map", help="FCIDUMP to qubit operator file")
    p.add_argument("fcidump")
    _add_common(p)
    p.add_argument("--mapping", choices=("jw", "parity"), default=S)
    p.add_argument("--ordering", choices=("blocked", "interleaved"),
                   default=S)
    p.add_argument("--spin-penalty", dest="spin_penalty", type=float,
                   default=S, help="mu for an added (mu/2) S^2 term")
    p.add_argument("--threshold", type=float, default=S,
                   help="coefficient prune threshold")

    p = sub.add_parser("qmf-opt", help="product-state energy minimum")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("--restarts", type=int, default=S)

    p = sub.add_parser("dis", help="gradient rank table")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("--reference", default=S,
                   help="basis bitstring, qubit 0 leftmost, or 'auto'")
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--limit", type=int, default=S,
                   help="print at most this many rows (0: all)")

    p = sub.add_parser("anticom",
                       help="anticommuting words for flip vectors")
    p.add_argument("flips", nargs="+",
                   help="flip bit vectors, qubit 0 leftmost")
    _add_common(p)
    p.add_argument("--n-qubits", dest="n_qubits", type=int, default=S,
                   help="qubit count (default: vector length)")

    p = sub.add_parser("ilc-opt",
                       help="linear-combination subspace optimum")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("--reference", default=S)
    p.add_argument("-N", "--n-entanglers", dest="n_entanglers", type=int,
                   default=S)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--relax-qmf", dest="relax_qmf", action="store_true",
                   default=S)
    p.add_argument("--brute-force", dest="brute_force",
                   action="store_true", default=S)
    p.add_argument("--max-outer", dest="max_outer", type=int, default=S)
    p.add_argument("--tol", type=float, default=S)

    p = sub.add_parser("dress", help="one exact dressing round")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("--word", default=S,
                   help="single-exponential generator label (QCC mode)")
    p.add_argument("--tau", type=float, default=S)
    p.add_argument("--reference", default=S)
    p.add_argument("-N", "--n-entanglers", dest="n_entanglers", type=int,
                   default=S)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--relax-qmf", dest="relax_qmf", action="store_true",
                   default=S)
    p.add_argument("--brute-force", dest="brute_force",
                   action="store_true", default=S)
    p.add_argument("--direction", choices=("forward", "inverse"),
                   default=S)
    p.add_argument("--prune", type=float, default=S)

    p = sub.add_parser("pipeline", help="iterative dressing pipeline")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("-d", type=int, default=S, help="dressing rounds")
    p.add_argument("-N", "--n-entanglers", dest="n_entanglers", type=int,
                   default=S)
    p.add_argument("-M", "--m-final", dest="m_final", type=int, default=S,
                   help="entanglers in the final product-ansatz step")
    p.add_argument("--reference", default=S)
    p.add_argument("--relax-qmf", dest="relax_qmf", action="store_true",
                   default=S)
    p.add_argument("--brute-force", dest="brute_force",
                   action="store_true", default=S)
    p.add_argument("--energy-threshold", dest="energy_threshold",
                   type=float, default=S)
    p.add_argument("--gradient-threshold", dest="gradient_threshold",
                   type=float, default=S)
    p.add_argument("--prune", type=float, default=S)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--dump-steps", dest="dump_steps", default=S,
                   help="directory for per-step operator files")

    p = sub.add_parser("scan",
                       help="frozen-ansatz scan over operator files")
    p.add_argument("paulis", nargs="+")
    _add_common(p)
    p.add_argument("--select", type=int, default=S,
                   help="index of the point that fixes the ansatz")
    p.add_argument("-d", type=int, default=S)
    p.add_argument("-N", "--n-entanglers", dest="n_entanglers", type=int,
                   default=S)
    p.add_argument("-M", "--m-final", dest="m_final", type=int, default=S)
    p.add_argument("--relax-qmf", dest="relax_qmf", action="store_true",
                   default=S)
    p.add_argument("--brute-force", dest="brute_force",
                   action="store_true", default=S)
    p.add_argument("--energy-threshold", dest="energy_threshold",
                   type=float, default=S)
    p.add_argument("--gradient-threshold", dest="gradient_threshold",
                   type=float, default=S)
    p.add_argument("--prune", type=float, default=S)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--no-exact", dest="no_exact", action="store_true",
                   default=S, help="skip the exact-energy column")

    p = sub.add_parser("vqe", help="product-ansatz statevector VQE")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("-M", "--entanglers", dest="m", type=int, default=S,
                   help="entangler count drawn from the gradient ranking")
    p.add_argument("--reference", default=S)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--restarts", type=int, default=S)

    p = sub.add_parser("spectrum", help="lowest eigenvalues")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("-k", type=int, default=S,
                   help="eigenvalue count (0: full spectrum)")

    p = sub.add_parser("bench-growth",
                       help="term growth of random dressings")
    _add_common(p)
    p.add_argument("--n-qubits", dest="n_qubits", type=int, default=S)
    p.add_argument("--m-terms", dest="m_terms", type=int, default=S)
    p.add_argument("--n-list", dest="n_list", default=S,
                   help="comma-separated entangler set sizes")
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--kind", choices=("ilc", "qcc"), default=S)
    p.add_argument("--prune", type=float, default=S)
    p.add_argument("--hamiltonian", default=S,
                   help="operator file instead of random instances")
    p.add_argument("--threads", type=int, default=S)

    p = sub.add_parser("bench-qcc-sample",
                       help="term growth over sampled amplitudes")
    p.add_argument("pauli")
    _add_common(p)
    p.add_argument("-N", "--n-entanglers", dest="n_entanglers", type=int,
                   default=S)
    p.add_argument("--samples", type=int, default=S)
    p.add_argument("--reference", default=S)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=S)
    p.add_argument("--prune", type=float, default=S)
    p.add_argument("--threads", type=int, default=S)

    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """flags > config file > DEFAULTS, as one flat dict."""
    cmd = args.cmd
    cfg = dict(DEFAULTS[cmd])
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path) as f:
            file_cfg = json.load(f)
        if not isinstance(file_cfg, dict):
            raise ContractError("config file must hold a JSON object")
        unknown = sorted(set(file_cfg) - set(cfg))
        if unknown:
            raise ContractError(
                f"unknown config keys for {cmd}: {', '.join(unknown)}"
            )
        cfg.update(file_cfg)
    explicit = {k: v for k, v in vars(args).items()
                if k not in ("cmd", "config")}
    cfg.update(explicit)
    cfg["cmd"] = cmd
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.cmd](cfg)
    except (PauliParseError, FcidumpParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ContractError, DimensionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as e:
        print(f"not converged: {e}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
