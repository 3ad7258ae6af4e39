"""Command-line front end: generate circuits, simulate them, run the experiments.

Every subcommand accepts ``--config FILE`` (a JSON object whose keys are the
long flag names with dashes turned into underscores) and explicit flags,
which win over the file.  Circuit generators print a JSON document to
stdout so they can be piped into ``simulate``; experiment subcommands write
their artifacts into the output directory (``--out-dir``, then the config
file, then ``$APPBENCH_OUTPUT_DIR``, then the working directory).

Exit codes: 0 success, 2 configuration error, 3 capacity error,
4 engine mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import sim_clifford, sim_dense, sim_spd, studies
from .analysis import FitError, fit_quadratic, records_from_csv, records_to_csv
from .bench_gen import GenerationError, generate_benchmark_circuit
from .circuit import Circuit, CircuitError, build_ansatz, build_kicked_ising
from .hard_gen import DEFAULT_MEMBER_CAP, generate_hard_circuit
from .layout import (DeviceLayout, LayoutError, QubitSubset, lightcone_volume, load_layout,
                     sample_connected_subset, two_qubit_gate_count)
from .noise import NoiseModel
from .pauli import PauliDomainError, PauliString
from .sim_clifford import EngineMismatchError
from .sim_dense import CapacityError

OUTPUT_ENV = "APPBENCH_OUTPUT_DIR"
EXIT_CONFIG, EXIT_CAPACITY, EXIT_ENGINE = 2, 3, 4


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


# ---------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default values for the flags")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--layout", help="bundled layout name or path (default heavy-hex-127)")
    p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or .)")


def _region_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--N", type=int, help="number of qubits in the connected region")
    p.add_argument("--L", type=int, help="number of ansatz layers")
    p.add_argument("--anchor", type=int, help="qubit contained in the region (default 62)")
    p.add_argument("--obs", help="observable, e.g. Z62, 'X0 Y3' or a full letter string")


def _noise(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, help="two-qubit depolarizing probability")
    p.add_argument("--eps1", type=float, help="single-qubit depolarizing probability")
    p.add_argument("--trajectories", type=int, help="Monte Carlo trajectories")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="appbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-bench", help="Clifford benchmark circuit with <O> = 1")
    _common(p)
    _region_flags(p)

    p = sub.add_parser("gen-hard", help="circuit with fast Heisenberg-set growth")
    _common(p)
    _region_flags(p)
    p.add_argument("--brute-layers", type=int, help="layers fixed greedily (default 1)")
    p.add_argument("--theta", type=float, help="rotation angle of every gate (default pi/4)")
    p.add_argument("--member-cap", type=int, help=f"set-size cap (default {DEFAULT_MEMBER_CAP})")

    p = sub.add_parser("gen-ki", help="kicked-Ising circuit")
    _common(p)
    _region_flags(p)
    p.add_argument("--theta-J", type=float, help="ZZ angle (default -pi/2)")
    p.add_argument("--theta-h", type=float, help="X angle (default pi/4)")

    p = sub.add_parser("simulate", help="expectation value of a circuit")
    _common(p)
    _noise(p)
    p.add_argument("circuit", nargs="?", help="circuit JSON file (default stdin)")
    p.add_argument("--engine", choices=("stabilizer", "dense", "spd"), help="default stabilizer")
    p.add_argument("--obs", help="override the circuit's observable")
    p.add_argument("--threshold", type=float, help="SPD truncation threshold (default 0)")
    p.add_argument("--cap", type=int, help=f"dense qubit cap (default {sim_dense.DEFAULT_CAP})")

    p = sub.add_parser("lightcone", help="lightcone volume and two-qubit gate count")
    _common(p)
    p.add_argument("circuit", nargs="?", help="circuit JSON file (omit with --ki)")
    p.add_argument("--ki", action="store_true", default=None, help="build a kicked-Ising circuit")
    p.add_argument("--N", type=int, help="region size for --ki (default whole device)")
    p.add_argument("--L", type=int, help="layers for --ki")
    p.add_argument("--anchor", type=int)
    p.add_argument("--obs")

    p = sub.add_parser("fit", help="quadratic fit with 3-sigma bands from a records CSV")
    _common(p)
    p.add_argument("records", nargs="?", help="records CSV (default stdin)")

    p = sub.add_parser("validate", help="fit benchmark records, score kicked-Ising records")
    _common(p)
    _noise(p)
    p.add_argument("--bench-N", type=_int_list, help="benchmark sizes (default 2,4,8,12)")
    p.add_argument("--bench-L", type=_int_list, help="benchmark depths (default 1-10)")
    p.add_argument("--per-cell", type=int, help="benchmark circuits per (N, L) (default 10)")
    p.add_argument("--ki-count", type=int, help="kicked-Ising records (default 300)")
    p.add_argument("--ki-N-max", type=int, help="largest kicked-Ising region (default 12)")
    p.add_argument("--ki-L-max", type=int, help="deepest kicked-Ising circuit (default 10)")
    p.add_argument("--anchor", type=int)

    p = sub.add_parser("entropy-study", help="pair entropy of hard vs kicked-Ising circuits")
    _common(p)
    p.add_argument("--N", type=_int_list, help="region sizes (default 4,6,8,10,12)")
    p.add_argument("--L", type=int, help="layers (default 5)")
    p.add_argument("--instances", type=int, help="instances per N (default 200)")
    p.add_argument("--brute-layers", type=int, help="greedy layers of the hard family (default 1)")

    p = sub.add_parser("growth-profile", help="SPD term count after each gate")
    _common(p)
    p.add_argument("circuit", nargs="?", help="circuit JSON file (default stdin)")
    p.add_argument("--obs")
    p.add_argument("--threshold", type=float, help="truncation threshold (default 0)")
    p.add_argument("--term-cap", type=int, help=f"stop beyond this many terms (default {sim_spd.DEFAULT_TERM_CAP})")
    return parser


DEFAULTS = {
    "seed": 0, "layout": "heavy-hex-127", "anchor": None, "obs": None,
    "N": None, "L": None,
    "brute_layers": 1, "theta": math.pi / 4, "member_cap": DEFAULT_MEMBER_CAP,
    "theta_J": -math.pi / 2, "theta_h": math.pi / 4,
    "engine": "stabilizer", "threshold": 0.0, "cap": sim_dense.DEFAULT_CAP,
    "eps": 0.0, "eps1": 0.0, "trajectories": 2000,
    "ki": False, "term_cap": sim_spd.DEFAULT_TERM_CAP,
    "bench_N": [2, 4, 8, 12], "bench_L": list(range(1, 11)), "per_cell": 10,
    "ki_count": 300, "ki_N_max": 12, "ki_L_max": 10, "instances": 200,
}
SUBCOMMAND_DEFAULTS = {
    "validate": {"eps": 0.01},
    "entropy-study": {"N": [4, 6, 8, 10, 12], "L": 5},
}


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over the config file over built-in defaults."""
    file_cfg = {}
    if args.config:
        try:
            file_cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    known = set(vars(args)) - {"command", "config"}
    unknown = set(file_cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys for {args.command}: {sorted(unknown)}")
    cfg = {k: DEFAULTS.get(k) for k in sorted(known)}
    cfg.update({k: v for k, v in SUBCOMMAND_DEFAULTS.get(args.command, {}).items() if k in known})
    cfg.update(file_cfg)
    cfg.update({k: v for k, v in vars(args).items() if k in known and v is not None})
    for key in ("bench_N", "bench_L") + (("N",) if args.command == "entropy-study" else ()):
        if isinstance(cfg.get(key), (str, int)):
            cfg[key] = _int_list(str(cfg[key]))
    cfg["out_dir"] = cfg.get("out_dir") or os.environ.get(OUTPUT_ENV) or None
    cfg["command"] = args.command
    return cfg


# ---------------------------------------------------------------- helpers

def _layout(cfg) -> DeviceLayout:
    return load_layout(cfg["layout"])


def _anchor(cfg, layout) -> int:
    if cfg.get("anchor") is not None:
        return int(cfg["anchor"])
    return studies.DEFAULT_ANCHOR if layout.num_qubits > studies.DEFAULT_ANCHOR else 0


def _observable(text, n, anchor) -> PauliString:
    if not text:
        return PauliString.from_sites(n, {anchor: "Z"})
    try:
        return PauliString.from_label(text, n)
    except (ValueError, PauliDomainError) as exc:
        raise ConfigError(f"bad observable {text!r}: {exc}") from exc


def _sample_region(cfg, layout, rng) -> QubitSubset:
    anchor = _anchor(cfg, layout)
    n = cfg["N"] if cfg["N"] is not None else layout.num_qubits
    if cfg.get("L") is None:
        raise ConfigError("--L is required")
    return sample_connected_subset(layout, int(n), anchor, rng)


def _public_cfg(cfg) -> dict:
    return {k: v for k, v in cfg.items() if k != "out_dir"}


def _read_text(path) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text()


def _load_circuit(path) -> tuple[Circuit, dict]:
    """Circuit from a file or stdin; accepts bare circuit JSON or a generator document."""
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"input is not JSON: {exc}") from exc
    body = doc.get("circuit", doc)
    return Circuit.from_dict(body), doc


def _emit_circuit(cfg, circuit: Circuit, record: dict, extra_files: dict | None = None) -> None:
    doc = {"config": _public_cfg(cfg), "seed": cfg["seed"], "record": record,
           "circuit": circuit.to_dict()}
    text = json.dumps(doc)
    print(text)
    if cfg["out_dir"]:
        out = _out_dir(cfg)
        stem = f"{cfg['command']}-seed{cfg['seed']}"
        _atomic_write(out / f"{stem}.json", text + "\n")
        for name, content in (extra_files or {}).items():
            _atomic_write(out / f"{stem}-{name}", content)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _csv_with_header(cfg, body: str) -> str:
    return f"# config: {json.dumps(_public_cfg(cfg))}\n# seed: {cfg['seed']}\n" + body


def _out_dir(cfg) -> Path:
    out = Path(cfg["out_dir"] or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------- commands

def cmd_gen_bench(cfg) -> int:
    layout = _layout(cfg)
    rng = np.random.default_rng(cfg["seed"])
    q = _sample_region(cfg, layout, rng)
    obs = _observable(cfg["obs"], layout.num_qubits, q.anchor)
    c = generate_benchmark_circuit(build_ansatz(layout, q, cfg["L"], math.pi / 2), obs, rng)
    record = {"seed": cfg["seed"], "N": len(q), "L": cfg["L"],
              "observable": obs.to_sparse_label(), "V_lc": lightcone_volume(c, obs)}
    _emit_circuit(cfg, c, record)
    return 0


def cmd_gen_hard(cfg) -> int:
    layout = _layout(cfg)
    rng = np.random.default_rng(cfg["seed"])
    q = _sample_region(cfg, layout, rng)
    obs = _observable(cfg["obs"], layout.num_qubits, q.anchor)
    sk = build_ansatz(layout, q, cfg["L"], cfg["theta"])
    hard = generate_hard_circuit(sk, obs, cfg["brute_layers"], rng, cfg["member_cap"])
    c = hard.circuit()
    record = {"seed": cfg["seed"], "N": len(q), "L": cfg["L"], "observable": obs.to_sparse_label(),
              "V_lc": lightcone_volume(c, obs), "final_set_size": hard.final_set_size,
              "cap_hit": hard.cap_hit, "switch_point": hard.switch_point}
    _emit_circuit(cfg, c, record, {"trace.csv": _csv_with_header(cfg, hard.trace_csv())})
    return 0


def cmd_gen_ki(cfg) -> int:
    layout = _layout(cfg)
    rng = np.random.default_rng(cfg["seed"])
    q = _sample_region(cfg, layout, rng)
    obs = _observable(cfg["obs"], layout.num_qubits, q.anchor)
    c = build_kicked_ising(layout, q, cfg["L"], cfg["theta_J"], cfg["theta_h"], obs)
    record = {"seed": cfg["seed"], "N": len(q), "L": cfg["L"],
              "observable": obs.to_sparse_label(), "V_lc": lightcone_volume(c, obs)}
    _emit_circuit(cfg, c, record)
    return 0


def cmd_simulate(cfg) -> int:
    c, _ = _load_circuit(cfg["circuit"])
    obs = _observable(cfg["obs"], c.num_qubits, c.qubits.anchor) if cfg["obs"] else c.observable
    noise = NoiseModel(cfg["eps"], cfg["eps1"])
    engine = cfg["engine"]
    result = {"engine": engine, "observable": obs.to_sparse_label(), "seed": cfg["seed"]}
    if noise.is_noiseless:
        if engine == "stabilizer":
            value = float(sim_clifford.expectation(c, obs))
        elif engine == "dense":
            value = sim_dense.expectation_dense(c, obs, cfg["cap"])
        else:
            value = sim_spd.expectation_spd(c, obs, cfg["threshold"])
        result["expectation"] = value
    else:
        if engine == "stabilizer":
            mean, err = sim_clifford.noisy_expectation(c, obs, noise, cfg["trajectories"], cfg["seed"])
        elif engine == "dense":
            mean, err = sim_dense.noisy_expectation_dense(c, obs, noise, cfg["trajectories"],
                                                          cfg["seed"], cfg["cap"])
        else:
            raise ConfigError("the spd engine has no noise model; use stabilizer or dense")
        result.update(expectation=mean, std_error=err, eps=noise.two_qubit_eps,
                      eps1=noise.single_qubit_eps, trajectories=cfg["trajectories"])
    print(json.dumps(result))
    return 0


def cmd_lightcone(cfg) -> int:
    if cfg["ki"]:
        layout = _layout(cfg)
        q = _sample_region(cfg, layout, np.random.default_rng(cfg["seed"]))
        obs = _observable(cfg["obs"], layout.num_qubits, q.anchor)
        c = build_kicked_ising(layout, q, cfg["L"], -math.pi / 2, math.pi / 4, obs)
    else:
        c, _ = _load_circuit(cfg["circuit"])
        obs = _observable(cfg["obs"], c.num_qubits, c.qubits.anchor) if cfg["obs"] else c.observable
    print(f"V_lc {lightcone_volume(c, obs)}")
    print(f"two_qubit_gates {two_qubit_gate_count(c)}")
    return 0


def _read_records(path):
    text = _read_text(path)
    return records_from_csv("\n".join(line for line in text.splitlines() if not line.startswith("#")))


def cmd_fit(cfg) -> int:
    records = [r for r in _read_records(cfg["records"]) if not r.flag]
    fit = fit_quadratic(records)
    doc = {"config": _public_cfg(cfg), "seed": cfg["seed"], **fit.to_dict()}
    _atomic_write(_out_dir(cfg) / "fit.json", json.dumps(doc, indent=1) + "\n")
    print(json.dumps({"coefficients": list(fit.coefficients), "records": len(records)}))
    return 0


def cmd_validate(cfg) -> int:
    layout = _layout(cfg)
    noise = NoiseModel(cfg["eps"], cfg["eps1"])
    anchor = _anchor(cfg, layout)
    bench = studies.benchmark_records(layout, cfg["bench_N"], cfg["bench_L"], cfg["per_cell"],
                                      noise, cfg["trajectories"], cfg["seed"], anchor)
    ki = studies.kicked_ising_records(layout, cfg["ki_count"], cfg["ki_N_max"], cfg["ki_L_max"],
                                      noise, cfg["trajectories"], cfg["seed"], anchor=anchor)
    result = studies.validate(bench, ki)
    out = _out_dir(cfg)
    _atomic_write(out / "benchmark_records.csv", _csv_with_header(cfg, records_to_csv(bench)))
    _atomic_write(out / "kicked_ising_records.csv", _csv_with_header(cfg, records_to_csv(ki)))
    fit_doc = {"config": _public_cfg(cfg), "seed": cfg["seed"], **result.fit.to_dict()}
    _atomic_write(out / "fit.json", json.dumps(fit_doc, indent=1) + "\n")
    report = {"config": _public_cfg(cfg), "seed": cfg["seed"], "coverage": result.coverage,
              "benchmark_records": len(bench), "kicked_ising_records": len(ki),
              "flagged": sum(1 for r in ki if r.flag)}
    _atomic_write(out / "coverage.json", json.dumps(report, indent=1) + "\n")
    print(f"coverage {result.coverage:.4f}")
    return 0


def cmd_entropy_study(cfg) -> int:
    rows = studies.entropy_study(_layout(cfg), cfg["N"], cfg["L"], cfg["instances"], cfg["seed"],
                                 brute_layers=cfg["brute_layers"])
    lines = ["family,N,mean_entropy,std,instances"]
    lines += [f"{r.family},{r.N},{r.mean!r},{r.std!r},{r.instances}" for r in rows]
    body = "\n".join(lines) + "\n"
    _atomic_write(_out_dir(cfg) / "entropy.csv", _csv_with_header(cfg, body))
    print(body, end="")
    return 0


def cmd_growth_profile(cfg) -> int:
    c, _ = _load_circuit(cfg["circuit"])
    obs = _observable(cfg["obs"], c.num_qubits, c.qubits.anchor) if cfg["obs"] else c.observable
    prof = sim_spd.term_growth_profile(c, obs, cfg["threshold"], cfg["term_cap"])
    _atomic_write(_out_dir(cfg) / "growth_profile.csv", _csv_with_header(cfg, prof.to_csv()))
    print(json.dumps({"gates_processed": len(prof.num_terms),
                      "final_terms": prof.num_terms[-1] if prof.num_terms else 1,
                      "capped": prof.capped}))
    return 0


COMMANDS = {
    "gen-bench": cmd_gen_bench, "gen-hard": cmd_gen_hard, "gen-ki": cmd_gen_ki,
    "simulate": cmd_simulate, "lightcone": cmd_lightcone, "fit": cmd_fit,
    "validate": cmd_validate, "entropy-study": cmd_entropy_study,
    "growth-profile": cmd_growth_profile,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except EngineMismatchError as exc:
        print(f"appbench: engine mismatch: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    except CapacityError as exc:
        print(f"appbench: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigError, LayoutError, CircuitError, GenerationError, FitError, PauliDomainError,
            ValueError, KeyError, OSError) as exc:
        print(f"appbench: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
