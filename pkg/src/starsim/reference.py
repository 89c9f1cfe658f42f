"""Dense reference evolution and error metrics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import DENSE_LIMIT, SparseHermitian, UnsupportedDimensionError


@dataclass(frozen=True)
class ErrorMetrics:
    trace_distance: float
    state_infidelity: float
    operator_norm_error: float  # ||a - b|| of the states as column vectors

    def as_dict(self) -> dict[str, float]:
        return {
            "trace_distance": self.trace_distance,
            "state_infidelity": self.state_infidelity,
            "operator_norm_error": self.operator_norm_error,
        }


def _as_dense(h) -> np.ndarray:
    a = h.to_dense() if isinstance(h, SparseHermitian) else np.asarray(h, dtype=complex)
    if a.shape[0] > DENSE_LIMIT:
        raise UnsupportedDimensionError(f"dense path supports n <= {DENSE_LIMIT}, got {a.shape[0]}")
    if not np.allclose(a, a.conj().T, atol=1e-12, rtol=0):
        raise ValueError("matrix is not Hermitian")
    return a


def dense_expm(h, t: float) -> np.ndarray:
    """``exp(-i H t)`` through a Hermitian eigendecomposition."""
    a = _as_dense(h)
    if t == 0:
        # Skip the eigendecomposition so that zero time gives the identity exactly.
        return np.eye(a.shape[0], dtype=complex)
    evals, vecs = np.linalg.eigh(a)
    return (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T


def reference_state(h, t: float, state: np.ndarray) -> np.ndarray:
    return dense_expm(h, t) @ state


def compare_states(a: np.ndarray, b: np.ndarray) -> ErrorMetrics:
    """Distances between two pure states; ``a`` and ``b`` need not be exactly normalized."""
    ua, ub = a / np.linalg.norm(a), b / np.linalg.norm(b)
    # 1 - |<a|b>|^2 equals the squared length of b's component orthogonal to a;
    # measuring that component directly avoids cancellation near zero error.
    perp = ub - np.vdot(ua, ub) * ua
    td = min(1.0, float(np.linalg.norm(perp)))
    return ErrorMetrics(
        trace_distance=td,
        state_infidelity=td**2,
        operator_norm_error=float(np.linalg.norm(a - b)),
    )


def compare_operators(a: np.ndarray, b: np.ndarray) -> float:
    """Operator-norm distance: largest singular value of ``a - b``."""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b), 2))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
