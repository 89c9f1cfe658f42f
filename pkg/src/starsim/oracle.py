"""Black-box access ``f(x, i)`` to a sparse Hermitian matrix, with query accounting.

Two ledgers are kept.  ``circuit_cost`` is what a quantum circuit would pay: a
fixed template charge per simulated exponential, independent of how many basis
states are in superposition.  ``classical_calls`` counts every actual
evaluation of ``f`` made by this classical simulation and is diagnostic only.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core_model import SparseHermitian


@dataclass(frozen=True)
class OracleEntry:
    column: int
    weight: complex

    def is_padding(self, row: int) -> bool:
        return self.column == row and self.weight == 0


@dataclass
class QueryCounter:
    circuit_cost: int = 0
    classical_calls: int = 0

    def snapshot(self) -> tuple[int, int]:
        return self.circuit_cost, self.classical_calls


def charge_template(counter: QueryCounter, amount: int) -> None:
    if amount < 0:
        raise ValueError(f"template charge must be non-negative, got {amount}")
    counter.circuit_cost += int(amount)


class BlackBox:
    """The oracle for one Hamiltonian.

    Only ``query`` and ``query_diagonal`` reveal matrix structure.  ``hamiltonian``
    is kept for the dense reference and norm bookkeeping; decomposition code
    never reads it.
    """

    def __init__(self, hamiltonian: SparseHermitian, counter: QueryCounter | None = None):
        self._h = hamiltonian
        self.counter = counter if counter is not None else QueryCounter()

    @property
    def n(self) -> int:
        return self._h.n

    @property
    def d(self) -> int:
        return self._h.max_degree

    @property
    def hamiltonian(self) -> SparseHermitian:
        return self._h

    def query(self, x: int, i: int) -> OracleEntry:
        """``f(x, i)``: the ``i``-th (1-based) stored neighbor of row ``x``, or ``(x, 0)`` past the end."""
        if not 1 <= i <= self._h.max_degree:
            raise ValueError(f"oracle index must lie in [1, {self._h.max_degree}], got {i}")
        if not 0 <= x < self._h.n:
            raise ValueError(f"row label {x} out of range for n = {self._h.n}")
        self.counter.classical_calls += 1
        row = self._h.rows[x]
        if i <= len(row):
            y, w = row[i - 1]
            return OracleEntry(y, w)
        return OracleEntry(x, 0j)

    def query_diagonal(self, x: int) -> float:
        self.counter.classical_calls += 1
        return self._h.diagonal[x]

    def fresh(self) -> "BlackBox":
        """Same oracle with a new, zeroed ledger."""
        return BlackBox(self._h)
