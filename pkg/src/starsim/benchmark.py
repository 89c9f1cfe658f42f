"""Parameter sweeps comparing measured circuit cost against the two published bound shapes."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .core_model import basis_state
from .instances import random_sparse_hermitian
from .oracle import BlackBox
from .recombination import QueryReport, hamiltonian_norms, simulate
from .reference import compare_states, dense_expm

CSV_FIELDS = (
    "n", "d", "k", "t", "norm_t", "epsilon", "m", "r", "n_exp", "circuit_cost",
    "predicted_circuit_cost", "classical_calls", "spectral", "max_column", "max_entry",
    "trace_distance", "bound_eq2", "bound_eq1",
)


@dataclass(frozen=True)
class SweepPoint:
    n: int
    d: int
    k: int
    t: float
    norm_t: float
    epsilon: float
    report: QueryReport
    trace_distance: float | None

    def row(self) -> dict:
        rep = self.report
        return {
            "n": self.n, "d": self.d, "k": self.k, "t": self.t, "norm_t": self.norm_t,
            "epsilon": self.epsilon, "m": rep.m, "r": rep.r, "n_exp": rep.n_exp,
            "circuit_cost": rep.circuit_cost, "predicted_circuit_cost": rep.predicted_circuit_cost,
            "classical_calls": rep.classical_calls, "spectral": rep.norms["spectral"],
            "max_column": rep.norms["max_column"], "max_entry": rep.norms["max_entry"],
            "trace_distance": self.trace_distance, "bound_eq2": rep.bound_eq2, "bound_eq1": rep.bound_eq1,
        }


def run_point(
    n: int,
    d: int,
    k: int,
    epsilon: float,
    norm_t: float = 1.0,
    seed: int = 0,
    norm_mode: str = "spectral",
    check_error: bool = True,
) -> SweepPoint:
    """One instance at fixed ``||H|| t``: ``t`` is rescaled by the instance's own norm."""
    h = random_sparse_hermitian(n, d, seed=seed)
    oracle = BlackBox(h)
    nrm = hamiltonian_norms(oracle)
    norm_value = nrm.spectral if norm_mode == "spectral" else nrm.max_column
    t = norm_t / norm_value
    psi = basis_state(n)
    result = simulate(oracle, psi, t, epsilon, k, norm_mode)
    td = None
    if check_error:
        td = compare_states(result.state, dense_expm(h, t) @ psi).trace_distance
    return SweepPoint(n, d, k, t, norm_t, epsilon, result.report, td)


def loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def sweep(
    param: str,
    values,
    n: int = 256,
    d: int = 4,
    k: int = 1,
    epsilon: float = 1e-3,
    norm_t: float = 1.0,
    seed: int = 0,
    norm_mode: str = "spectral",
    check_error: bool = True,
) -> tuple[list[SweepPoint], dict]:
    """Run one point per value of ``param`` (``"d"``, ``"n"`` or ``"k"``) and fit log-log slopes."""
    if param not in ("d", "n", "k"):
        raise ValueError("sweep parameter must be d, n or k")
    points = []
    for v in values:
        cfg = {"n": n, "d": d, "k": k}
        cfg[param] = int(v)
        points.append(run_point(cfg["n"], cfg["d"], cfg["k"], epsilon, norm_t, seed, norm_mode, check_error))
    xs = [getattr(p, param) for p in points]
    summary = {"param": param, "values": xs}
    if len(points) >= 2 and param != "k":
        summary["slope_circuit_cost"] = loglog_slope(xs, [p.report.circuit_cost for p in points])
        summary["slope_bound_eq2"] = loglog_slope(xs, [p.report.bound_eq2 for p in points])
        summary["slope_bound_eq1"] = loglog_slope(xs, [p.report.bound_eq1 for p in points])
    errors = [p.trace_distance for p in points if p.trace_distance is not None]
    summary["max_trace_distance"] = max(errors) if errors else None
    summary["all_within_epsilon"] = all(e <= epsilon for e in errors)
    return points, summary


def to_csv(points: list[SweepPoint]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for p in points:
        writer.writerow({key: _fmt(val) for key, val in p.row().items()})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float) and math.isfinite(v):
        return repr(v)
    return v
