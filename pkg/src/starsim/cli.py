"""Command-line entry point: ``starsim {generate,decompose,simulate,benchmark,verify}``.

Exit codes: 0 pass, 1 invariant or accuracy failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import sweep, to_csv
from .coloring import rounds
from .core_model import DENSE_LIMIT, InvalidHamiltonianError, basis_state, dumps, load_json, random_state
from .galaxy import GalaxyDecomposition
from .instances import random_sparse_hermitian
from .oracle import BlackBox
from .recombination import simulate
from .reference import compare_states, dense_expm
from .verification import verify_decomposition

SCHEMA = "starsim.report/1"
EXIT_OK, EXIT_FAIL, EXIT_BAD_INPUT = 0, 1, 2


class BadInput(Exception):
    pass


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load(path: str):
    try:
        return load_json(path)
    except (OSError, ValueError, KeyError, TypeError, InvalidHamiltonianError) as exc:
        raise BadInput(f"cannot load matrix file {path}: {exc}") from exc


def _positive(name: str, value: float) -> None:
    if value <= 0:
        raise BadInput(f"--{name} must be positive, got {value}")


def cmd_generate(args) -> int:
    _positive("n", args.n)
    _positive("d", args.d)
    try:
        h = random_sparse_hermitian(args.n, args.d, seed=args.seed, density=args.density,
                                    diagonal=args.diagonal, ring=args.ring)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    text = dumps(h) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def decomposition_report(h, decomp: GalaxyDecomposition, checks: dict[str, list[str]]) -> dict:
    forests = {}
    for c, par in decomp.parents.items():
        edges = [[p, v] for v, p in enumerate(par) if p is not None]
        if edges:
            forests[str(c)] = {"edges": sorted(edges), "colors": decomp.colors[c]}
    galaxies = []
    for g in decomp.terms:
        if g.is_diagonal:
            continue
        stars = decomp.stars(g)
        if stars:
            galaxies.append({"c": g.c, "t": g.t, "stars": [{"center": s.center, "leaves": list(s.leaves)} for s in stars]})
    return {
        "schema": SCHEMA,
        "n": h.n,
        "d": h.d,
        "rounds": rounds(max(h.n, 2)),
        "m": len(decomp.terms),
        "n_forests_nonempty": len(forests),
        "n_galaxies_nonempty": len(galaxies),
        "forests": forests,
        "galaxies": galaxies,
        "checks": {name: {"pass": not fails, "failures": fails[:20]} for name, fails in checks.items()},
        "pass": not any(checks.values()),
    }


def cmd_decompose(args) -> int:
    h = _load(args.matrix)
    decomp = GalaxyDecomposition(BlackBox(h))
    sample = None if h.n <= 128 else range(0, h.n, max(1, h.n // 64))
    report = decomposition_report(h, decomp, verify_decomposition(h, decomp, sample))
    _emit(report, args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def _initial_state(n: int, kind: str, seed: int) -> np.ndarray:
    if kind == "basis":
        return basis_state(n)
    return random_state(n, np.random.default_rng(seed))


def run_simulation(h, t: float, epsilon: float, k: int, norm_mode: str, state_kind: str, seed: int,
                   execution: str = "auto") -> dict:
    start = time.perf_counter()
    psi = _initial_state(h.n, state_kind, seed)
    result = simulate(BlackBox(h), psi, t, epsilon, k, norm_mode, execution)
    errors = None
    if h.n <= DENSE_LIMIT:
        errors = compare_states(result.state, dense_expm(h, t) @ psi).as_dict()
    rep = result.report.as_dict()
    return {
        "schema": SCHEMA,
        "config": {"n": h.n, "d": h.d, "t": t, "epsilon": epsilon, "k": k, "seed": seed,
                   "norm_mode": norm_mode, "state": state_kind, "execution": execution},
        **{key: rep[key] for key in ("m", "r", "n_exp", "circuit_cost", "predicted_circuit_cost",
                                     "classical_calls", "norms", "norm_value", "n_exp_bound",
                                     "precondition_ok", "bound_eq2", "bound_eq1", "execution")},
        "errors": errors,
        "final_norm": float(np.linalg.norm(result.state)),
        "pass": errors is None or errors["trace_distance"] <= epsilon,
        "wall_time": time.perf_counter() - start,
    }


def _check_sim_args(args) -> None:
    if args.t < 0:
        raise BadInput("--t must be non-negative")
    _positive("epsilon", args.epsilon)
    _positive("k", args.k)


def cmd_simulate(args) -> int:
    _check_sim_args(args)
    h = _load(args.matrix)
    report = run_simulation(h, args.t, args.epsilon, args.k, args.norm, args.state, args.seed, args.execution)
    _emit(report, args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_verify(args) -> int:
    _check_sim_args(args)
    h = _load(args.matrix)
    decomp = GalaxyDecomposition(BlackBox(h))
    sample = None if h.n <= 128 else range(0, h.n, max(1, h.n // 64))
    checks = verify_decomposition(h, decomp, sample)
    sim = run_simulation(h, args.t, args.epsilon, args.k, args.norm, args.state, args.seed)
    circuit_ok = sim["circuit_cost"] == sim["predicted_circuit_cost"]
    ok = not any(checks.values()) and sim["pass"] and circuit_ok
    _emit({
        "schema": SCHEMA,
        "checks": {name: {"pass": not fails, "failures": fails[:20]} for name, fails in checks.items()},
        "simulation": sim,
        "circuit_cost_matches_closed_form": circuit_ok,
        "pass": ok,
    }, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_benchmark(args) -> int:
    _positive("epsilon", args.epsilon)
    _positive("norm-t", args.norm_t)
    try:
        values = [int(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise BadInput(f"--values must be comma-separated integers: {exc}") from exc
    if not values or min(values) < 1:
        raise BadInput("--values must be positive integers")
    start = time.perf_counter()
    points, summary = sweep(args.sweep, values, n=args.n, d=args.d, k=args.k, epsilon=args.epsilon,
                            norm_t=args.norm_t, seed=args.seed, norm_mode=args.norm,
                            check_error=not args.no_reference)
    csv_text = to_csv(points)
    payload = {"schema": SCHEMA, "summary": summary, "points": [p.row() for p in points],
               "wall_time": time.perf_counter() - start}
    if args.out:
        prefix = Path(args.out)
        prefix.with_suffix(".csv").write_text(csv_text)
        prefix.with_suffix(".json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(csv_text)
        print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK if summary["all_within_epsilon"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starsim", description="Sparse Hamiltonian simulation by star decomposition.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random d-sparse Hermitian matrix file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--density", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--diagonal", action="store_true", help="add a random real diagonal")
    g.add_argument("--ring", action="store_true", help="cycle topology 0-1-...-(n-1)-0")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    dcp = sub.add_parser("decompose", help="report forests, colors and galaxies with structural checks")
    dcp.add_argument("matrix")
    dcp.add_argument("--out")
    dcp.set_defaults(func=cmd_decompose)

    def sim_flags(sp):
        sp.add_argument("matrix")
        sp.add_argument("--t", type=float, default=1.0)
        sp.add_argument("--epsilon", type=float, default=1e-3)
        sp.add_argument("--k", type=int, default=1)
        sp.add_argument("--norm", choices=("spectral", "mcn"), default="spectral")
        sp.add_argument("--state", choices=("basis", "random"), default="basis")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")

    s = sub.add_parser("simulate", help="run the simulation and compare with the dense reference")
    sim_flags(s)
    s.add_argument("--execution", choices=("auto", "replay", "periodic"), default="auto")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="structural checks plus a reference-checked simulation")
    sim_flags(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("benchmark", help="sweep d, n or k and fit log-log slopes of circuit cost")
    b.add_argument("--sweep", choices=("d", "n", "k"), default="d")
    b.add_argument("--values", default="2,4,8,16")
    b.add_argument("--n", type=int, default=256)
    b.add_argument("--d", type=int, default=4)
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--epsilon", type=float, default=1e-3)
    b.add_argument("--norm-t", dest="norm_t", type=float, default=1.0, help="fixed ||H|| t across points")
    b.add_argument("--norm", choices=("spectral", "mcn"), default="spectral")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--no-reference", action="store_true", help="skip dense-reference error checks")
    b.add_argument("--out", help="path prefix; writes <prefix>.csv and <prefix>.json")
    b.set_defaults(func=cmd_benchmark)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
