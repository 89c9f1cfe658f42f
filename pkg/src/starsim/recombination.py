"""Suzuki product formulas over the galaxy terms, segment counts from the a priori bound, and the driver.

A schedule is ``r`` identical segments, each the order-k Suzuki formula with
step ``t / r``.  Only one segment is materialized; iteration replays it.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .coloring import log_star
from .core_model import DENSE_LIMIT, NormReport, max_column_norm, max_entry_norm, spectral_norm
from .galaxy import GalaxyDecomposition, GalaxyIndex, cost_u
from .oracle import BlackBox, charge_template
from .reference import compare_states, dense_expm

NORM_MODES = ("spectral", "mcn")
EXECUTION_MODES = ("auto", "replay", "periodic")


@dataclass(frozen=True)
class ExpInstruction:
    term: GalaxyIndex
    duration: float


def suzuki_p(k: int) -> float:
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def suzuki_sequence(k: int, terms: Sequence[GalaxyIndex], lam: float) -> list[ExpInstruction]:
    """Instructions of ``S_k(lam)``: ``2 m 5^(k-1)`` exponentials.

    ``S_1`` sweeps the terms forward then backward with half steps;
    ``S_k(lam) = S_{k-1}(p lam)^2 S_{k-1}((1 - 4p) lam) S_{k-1}(p lam)^2``.
    """
    if k < 1:
        raise ValueError(f"order k must be >= 1, got {k}")
    if not terms:
        raise ValueError("need at least one term")
    if k == 1:
        half = lam / 2
        return [ExpInstruction(g, half) for g in terms] + [ExpInstruction(g, half) for g in reversed(terms)]
    p = suzuki_p(k)
    outer = suzuki_sequence(k - 1, terms, p * lam)
    middle = suzuki_sequence(k - 1, terms, (1 - 4 * p) * lam)
    return outer + outer + middle + outer + outer


@dataclass(frozen=True)
class SuzukiSchedule:
    k: int
    r: int
    t: float
    segment: tuple[ExpInstruction, ...]

    @classmethod
    def build(cls, terms: Sequence[GalaxyIndex], t: float, k: int, r: int) -> "SuzukiSchedule":
        if r < 1:
            raise ValueError(f"segment count must be >= 1, got {r}")
        return cls(k, r, t, tuple(suzuki_sequence(k, terms, t / r)))

    def __len__(self) -> int:
        return len(self.segment) * self.r

    def __iter__(self) -> Iterator[ExpInstruction]:
        for _ in range(self.r):
            yield from self.segment

    def duration_sums(self) -> dict[GalaxyIndex, float]:
        sums: dict[GalaxyIndex, float] = {}
        for ins in self.segment:
            sums[ins.term] = sums.get(ins.term, 0.0) + ins.duration
        return {g: self.r * s for g, s in sums.items()}


class SegmentCount(NamedTuple):
    r: int
    n_exp_bound: float
    precondition_ok: bool


def n_exp_bound(m: int, norm_t: float, epsilon: float, k: int) -> float:
    """Upper bound on the number of exponentials for ``m`` terms at error ``epsilon``."""
    return 5 ** (2 * k) * m**2 * norm_t * (m * norm_t / epsilon) ** (1 / (2 * k))


def segment_count(m: int, norm_value: float, t: float, epsilon: float, k: int) -> SegmentCount:
    """Segments needed so the bound on exponentials is met; flags when the bound's precondition fails."""
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    if not (norm_value > 0 and t > 0 and epsilon > 0):
        raise ValueError("norm, t and epsilon must be positive")
    bound = n_exp_bound(m, norm_value * t, epsilon, k)
    per_segment = 2 * m * 5 ** (k - 1)
    r = max(1, math.ceil(bound / per_segment))
    ok = epsilon <= 1 <= per_segment * norm_value * t
    return SegmentCount(r, bound, ok)


def predicted_query_bounds(d: int, n: int, norm_t: float, epsilon: float, k: int) -> tuple[float, float]:
    """Star-decomposition and edge-coloring query bounds with unit leading constants.

    Returns ``(star, edge)``: ``5^2k d^2 (d + log* N) ||H||t (d ||H||t / eps)^(1/2k)`` and
    ``5^2k d^4 log* N ||H||t (d^2 ||H||t / eps)^(1/2k)``.
    """
    ls = log_star(n)
    star = 5 ** (2 * k) * d**2 * (d + ls) * norm_t * (d * norm_t / epsilon) ** (1 / (2 * k))
    edge = 5 ** (2 * k) * d**4 * ls * norm_t * (d**2 * norm_t / epsilon) ** (1 / (2 * k))
    return star, edge


def predicted_circuit_cost(n: int, d: int, k: int, r: int) -> int:
    """Closed-form total charge: ``r 5^(k-1) (24 d cost_U + 4)``."""
    return r * 5 ** (k - 1) * (24 * d * cost_u(n, d) + 4)


@dataclass
class QueryReport:
    m: int
    r: int
    n_exp: int
    circuit_cost: int
    classical_calls: int
    norms: dict
    norm_mode: str
    norm_value: float
    n_exp_bound: float
    precondition_ok: bool
    bound_eq2: float
    bound_eq1: float
    predicted_circuit_cost: int
    execution: str
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


class SimulationResult(NamedTuple):
    state: np.ndarray
    report: QueryReport


def run_segment(decomp: GalaxyDecomposition, segment: Sequence[ExpInstruction], state: np.ndarray, charged: bool = True):
    apply = decomp.apply_galaxy_exponential if charged else decomp.apply_uncharged
    for ins in segment:
        state = apply(ins.term, ins.duration, state)
    return state


def _nearest_unitary(u: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def _unitary_power(u: np.ndarray, r: int) -> np.ndarray:
    # Square-and-multiply; re-projecting onto the unitary group after each
    # product keeps rounding drift from compounding over ~log2(r) steps.
    result = np.eye(u.shape[0], dtype=complex)
    base = u
    while r:
        if r & 1:
            result = _nearest_unitary(result @ base)
        r >>= 1
        if r:
            base = _nearest_unitary(base @ base)
    return result


def segment_operator(decomp: GalaxyDecomposition, segment: Sequence[ExpInstruction], charged: bool = True) -> np.ndarray:
    """Matrix of one segment, built by evolving every basis vector at once."""
    return run_segment(decomp, segment, np.eye(decomp.n, dtype=complex), charged)


def evolution_operator(decomp: GalaxyDecomposition, schedule: SuzukiSchedule, charged: bool = False) -> np.ndarray:
    seg = segment_operator(decomp, schedule.segment, charged)
    if charged and schedule.r > 1:
        charge_template(decomp.oracle.counter, (schedule.r - 1) * _segment_charge(decomp, schedule.segment))
    return _unitary_power(_nearest_unitary(seg), schedule.r)


def _segment_charge(decomp: GalaxyDecomposition, segment: Sequence[ExpInstruction]) -> int:
    return sum(decomp.exponential_charge(ins.term) for ins in segment)


def _choose_execution(n: int, schedule: SuzukiSchedule) -> str:
    replay_cost = len(schedule) * n
    periodic_cost = len(schedule.segment) * n * n + 2 * max(1, schedule.r.bit_length()) * n**3
    if n > DENSE_LIMIT:
        return "replay"
    return "replay" if replay_cost <= periodic_cost else "periodic"


def hamiltonian_norms(oracle: BlackBox) -> NormReport:
    h = oracle.hamiltonian
    spectral = spectral_norm(h) if h.n <= DENSE_LIMIT else float("nan")
    return NormReport(spectral, max_entry_norm(h), max_column_norm(h))


def simulate(
    oracle: BlackBox,
    state: np.ndarray,
    t: float,
    epsilon: float,
    k: int = 1,
    norm_mode: str = "spectral",
    execution: str = "auto",
    decomposition: GalaxyDecomposition | None = None,
    r: int | None = None,
) -> SimulationResult:
    """Approximate ``exp(-i H t) state`` to trace distance ``epsilon`` via the star decomposition.

    ``r`` overrides the a priori segment count.  ``execution`` picks between
    replaying every exponential on the state and powering the segment operator;
    both apply the same instructions and charge the same circuit cost.
    """
    if norm_mode not in NORM_MODES:
        raise ValueError(f"norm_mode must be one of {NORM_MODES}")
    if execution not in EXECUTION_MODES:
        raise ValueError(f"execution must be one of {EXECUTION_MODES}")
    if t < 0 or epsilon <= 0 or k < 1:
        raise ValueError("need t >= 0, epsilon > 0, k >= 1")
    start = time.perf_counter()
    counter = oracle.counter
    cost0, calls0 = counter.snapshot()
    decomp = decomposition if decomposition is not None else GalaxyDecomposition(oracle)
    terms = decomp.terms
    m = len(terms)
    nrm = hamiltonian_norms(oracle)
    norm_value = nrm.spectral if norm_mode == "spectral" else nrm.max_column
    d, n = oracle.d, oracle.n
    state = np.array(state, dtype=complex, copy=True)

    if t == 0 or norm_value == 0:
        # Nothing to evolve (t = 0) or H = 0: the exact answer is the input.
        plan = SegmentCount(0, 0.0, False)
        sched = None
    else:
        plan = segment_count(m, norm_value, t, epsilon, k)
        if r is not None:
            plan = SegmentCount(int(r), plan.n_exp_bound, plan.precondition_ok)
        sched = SuzukiSchedule.build(terms, t, k, plan.r)

    mode = "none"
    if sched is not None:
        mode = _choose_execution(n, sched) if execution == "auto" else execution
        if mode == "replay":
            for _ in range(sched.r):
                state = run_segment(decomp, sched.segment, state)
        else:
            state = evolution_operator(decomp, sched, charged=True) @ state

    cost1, calls1 = counter.snapshot()
    eq2, eq1 = predicted_query_bounds(d, n, norm_value * t, epsilon, k)
    report = QueryReport(
        m=m,
        r=plan.r,
        n_exp=len(sched) if sched is not None else 0,
        circuit_cost=cost1 - cost0,
        classical_calls=calls1 - calls0,
        norms=nrm.as_dict(),
        norm_mode=norm_mode,
        norm_value=norm_value,
        n_exp_bound=plan.n_exp_bound,
        precondition_ok=plan.precondition_ok,
        bound_eq2=eq2,
        bound_eq1=eq1,
        predicted_circuit_cost=predicted_circuit_cost(n, d, k, plan.r),
        execution=mode,
        wall_time=time.perf_counter() - start,
    )
    return SimulationResult(state, report)


def empirical_segment_count(
    decomp: GalaxyDecomposition,
    state: np.ndarray,
    t: float,
    epsilon: float,
    k: int,
    r_max: int,
) -> int:
    """Smallest ``r <= r_max`` whose measured trace distance stays within ``epsilon / 2``.

    Bisection assumes error decreases with ``r``.  Benchmarking aid only; it
    uses the dense reference and charges nothing.
    """
    target = dense_expm(decomp.oracle.hamiltonian, t) @ state

    def err(r: int) -> float:
        sched = SuzukiSchedule.build(decomp.terms, t, k, r)
        return compare_states(evolution_operator(decomp, sched) @ state, target).trace_distance

    lo, hi = 1, r_max
    if err(hi) > epsilon / 2:
        return hi
    while lo < hi:
        mid = (lo + hi) // 2
        if err(mid) <= epsilon / 2:
            hi = mid
        else:
            lo = mid + 1
    return lo
