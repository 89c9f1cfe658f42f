"""Sparse Hermitian matrices viewed as weighted graphs, plus the norms used to size a simulation.

A :class:`SparseHermitian` keeps, for every vertex ``x``, an ordered list of
``(y, H[x, y])`` pairs with ``y != x``.  That order is what the black box
indexes into, so it is frozen at construction.  Real diagonal entries are kept
apart from the graph and evolved as their own term.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

#: Largest dimension the dense routines (norms, reference exponential) accept.
DENSE_LIMIT = 4096

Row = tuple[tuple[int, complex], ...]


class UnsupportedDimensionError(ValueError):
    """Raised when a dense computation is requested above :data:`DENSE_LIMIT`."""


class InvalidHamiltonianError(ValueError):
    pass


def bit_length(n: int) -> int:
    """Width of the fixed binary representation of labels ``0..n-1`` (at least one bit)."""
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


@dataclass(frozen=True)
class Violation:
    kind: str
    x: int
    y: int | None
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at ({self.x}, {self.y}): {self.message}"


@dataclass(frozen=True)
class NormReport:
    spectral: float
    max_entry: float
    max_column: float

    def as_dict(self) -> dict[str, float]:
        return {"spectral": self.spectral, "max_entry": self.max_entry, "max_column": self.max_column}


@dataclass(frozen=True, eq=False)
class SparseHermitian:
    """Row-ordered adjacency representation of a d-sparse Hermitian matrix.

    The constructor does not check anything, so invalid instances can be built
    and handed to :func:`validate`.  Use :meth:`from_edges` or :func:`load_json`
    for checked construction.
    """

    n: int
    rows: tuple[Row, ...]
    diagonal: tuple[float, ...]
    max_degree: int

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, complex]],
        diagonal: Sequence[float] | None = None,
        max_degree: int | None = None,
    ) -> "SparseHermitian":
        """Build from undirected edges ``(x, y, H[x, y])``; each is mirrored with its conjugate.

        Rows receive neighbors in the order edges are listed.  ``max_degree``
        defaults to the largest row length (at least 1).
        """
        rows: list[list[tuple[int, complex]]] = [[] for _ in range(n)]
        for x, y, w in edges:
            x, y, w = int(x), int(y), complex(w)
            rows[x].append((y, w))
            rows[y].append((x, w.conjugate()))
        diag = tuple(float(v) for v in diagonal) if diagonal is not None else (0.0,) * n
        if max_degree is None:
            max_degree = max([len(r) for r in rows] + [1])
        h = cls(n, tuple(tuple(r) for r in rows), diag, int(max_degree))
        violation = validate(h)
        if violation is not None:
            raise InvalidHamiltonianError(str(violation))
        return h

    @property
    def d(self) -> int:
        return self.max_degree

    @property
    def bit_length(self) -> int:
        return bit_length(self.n)

    def edges(self) -> list[tuple[int, int, complex]]:
        """Undirected edges ``(x, y, H[x, y])`` with ``x < y``, sorted."""
        return sorted((x, y, w) for x in range(self.n) for y, w in self.rows[x] if x < y)

    def entry(self, x: int, y: int) -> complex:
        if x == y:
            return complex(self.diagonal[x])
        for z, w in self.rows[x]:
            if z == y:
                return w
        return 0j

    def to_dense(self) -> np.ndarray:
        if self.n > DENSE_LIMIT:
            raise UnsupportedDimensionError(f"dense path supports n <= {DENSE_LIMIT}, got {self.n}")
        a = np.zeros((self.n, self.n), dtype=complex)
        for x, row in enumerate(self.rows):
            for y, w in row:
                a[x, y] = w
        a[np.arange(self.n), np.arange(self.n)] = self.diagonal
        return a

    def permuted(self, rng: np.random.Generator) -> "SparseHermitian":
        """Same matrix, with every row's neighbor order shuffled (hence a different oracle)."""
        rows = []
        for row in self.rows:
            order = rng.permutation(len(row))
            rows.append(tuple(row[i] for i in order))
        return SparseHermitian(self.n, tuple(rows), self.diagonal, self.max_degree)

    def without_diagonal(self) -> "SparseHermitian":
        return SparseHermitian(self.n, self.rows, (0.0,) * self.n, self.max_degree)


def validate(h: SparseHermitian) -> Violation | None:
    """Return the first violated invariant of ``h``, or ``None`` when it is well formed."""
    if h.n < 1:
        return Violation("dimension", 0, None, f"n must be positive, got {h.n}")
    if h.max_degree < 1:
        return Violation("degree", 0, None, f"max_degree must be positive, got {h.max_degree}")
    if len(h.rows) != h.n or len(h.diagonal) != h.n:
        return Violation("dimension", 0, None, "rows/diagonal length differs from n")
    for x, row in enumerate(h.rows):
        if len(row) > h.max_degree:
            return Violation("degree", x, None, f"row has {len(row)} neighbors, d = {h.max_degree}")
        seen = set()
        for y, w in row:
            if not 0 <= y < h.n:
                return Violation("label", x, y, "neighbor label out of range")
            if y == x:
                return Violation("self-loop", x, y, "diagonal entries belong in the diagonal field")
            if y in seen:
                return Violation("duplicate", x, y, "neighbor listed twice")
            seen.add(y)
            if w == 0:
                return Violation("zero-weight", x, y, "zero entries must not be stored")
            back = [v for z, v in h.rows[y] if z == x]
            if not back:
                return Violation("not symmetric", x, y, "mirror entry (y, x) missing")
            if back[0] != complex(w).conjugate():
                return Violation("not conjugate", x, y, f"H[y,x] = {back[0]} but conj(H[x,y]) = {complex(w).conjugate()}")
    for x, v in enumerate(h.diagonal):
        if not math.isfinite(v):
            return Violation("diagonal", x, x, "diagonal entry is not a finite real")
    return None


def spectral_norm(h: SparseHermitian) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(h.to_dense()))))


def max_entry_norm(h: SparseHermitian) -> float:
    best = max((abs(v) for v in h.diagonal), default=0.0)
    for row in h.rows:
        for _, w in row:
            best = max(best, abs(w))
    return float(best)


def max_column_norm(h: SparseHermitian) -> float:
    # Column x of a Hermitian matrix has the same 2-norm as row x.
    best = 0.0
    for x, row in enumerate(h.rows):
        sq = h.diagonal[x] ** 2 + sum(abs(w) ** 2 for _, w in row)
        best = max(best, sq)
    return math.sqrt(best)


def norms(h: SparseHermitian) -> NormReport:
    return NormReport(spectral_norm(h), max_entry_norm(h), max_column_norm(h))


def basis_state(n: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(n, dtype=complex)
    psi[index] = 1.0
    return psi


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def dumps(h: SparseHermitian) -> str:
    """Serialize in the matrix file format; each undirected edge appears once with ``x < y``."""
    # Sorted (x, y) order means rows come back sorted by neighbor label on reload.
    entries = [[x, y, w.real, w.imag] for x, y, w in h.edges()]
    return json.dumps({"n": h.n, "d": h.max_degree, "entries": entries, "diagonal": list(h.diagonal)})


def loads(text: str) -> SparseHermitian:
    data = json.loads(text)
    n = int(data["n"])
    edges = []
    for item in data["entries"]:
        x, y, re, im = item
        x, y = int(x), int(y)
        if not x < y:
            raise InvalidHamiltonianError(f"entries must satisfy x < y, got ({x}, {y})")
        edges.append((x, y, complex(float(re), float(im))))
    diagonal = data.get("diagonal") or [0.0] * n
    if len(diagonal) != n:
        raise InvalidHamiltonianError("diagonal length differs from n")
    return SparseHermitian.from_edges(n, edges, diagonal, data.get("d"))


def load_json(path: str | Path) -> SparseHermitian:
    return loads(Path(path).read_text())


def save_json(h: SparseHermitian, path: str | Path) -> None:
    Path(path).write_text(dumps(h) + "\n")
