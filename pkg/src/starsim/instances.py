"""Seeded random d-sparse Hermitian instances."""
from __future__ import annotations

import numpy as np

from .core_model import SparseHermitian


def _unit_disk(rng: np.random.Generator) -> complex:
    # 1 - random() lies in (0, 1], so weights are never zero.
    radius = np.sqrt(1.0 - rng.random())
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return complex(radius * np.cos(angle), radius * np.sin(angle))


def random_sparse_hermitian(
    n: int,
    d: int,
    seed: int = 0,
    density: float = 1.0,
    diagonal: bool = False,
    ring: bool = False,
) -> SparseHermitian:
    """Random instance with maximum degree ``d``.

    ``density`` is the fraction of the ``n d / 2`` edge slots to try to fill.
    ``ring`` ignores ``d`` for topology and produces the cycle ``0-1-...-(n-1)-0``.
    Rows come out sorted by neighbor label, matching what a saved file reloads to.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    edges: dict[tuple[int, int], complex] = {}
    if ring:
        if n < 3:
            raise ValueError("a ring needs n >= 3")
        for x in range(n):
            a, b = sorted((x, (x + 1) % n))
            edges[(a, b)] = _unit_disk(rng)
        d = max(d, 2)
    else:
        deg = np.zeros(n, dtype=int)
        target = int(round(density * n * d / 2))
        # Rounds of random stub matching; stop when a round places nothing new.
        for _ in range(64):
            if len(edges) >= target:
                break
            stubs = np.repeat(np.arange(n), d - deg)
            rng.shuffle(stubs)
            placed = 0
            for x, y in stubs[: 2 * (len(stubs) // 2)].reshape(-1, 2).tolist():
                if len(edges) >= target:
                    break
                a, b = min(x, y), max(x, y)
                if a == b or deg[a] >= d or deg[b] >= d or (a, b) in edges:
                    continue
                edges[(a, b)] = _unit_disk(rng)
                deg[a] += 1
                deg[b] += 1
                placed += 1
            if not placed:
                break
    diag = rng.uniform(-1.0, 1.0, size=n) if diagonal else None
    ordered = [(a, b, w) for (a, b), w in sorted(edges.items())]
    return SparseHermitian.from_edges(n, ordered, diag, max_degree=d)


def star_hamiltonian(n: int, center: int, leaves, weights, d: int | None = None) -> SparseHermitian:
    """A single star; ``weights[i]`` is ``H[leaves[i], center]``."""
    edges = [(int(y), center, complex(w)) for y, w in zip(leaves, weights)]
    return SparseHermitian.from_edges(n, edges, max_degree=d or max(1, len(edges)))
