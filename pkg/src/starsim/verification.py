"""Brute-force structural checks of a decomposition.

These read the stored matrix directly rather than going through the oracle,
so they are independent of the query-driven code they check.  Every check
returns a list of human-readable failures; empty means pass.
"""
from __future__ import annotations

import math
from collections import defaultdict, deque

import numpy as np

from .coloring import recolor_globally
from .core_model import SparseHermitian, max_column_norm, max_entry_norm
from .galaxy import GalaxyDecomposition, star_info


def brute_force_edge_colors(h: SparseHermitian) -> dict[tuple[int, int], int]:
    """``(lo, hi) -> c`` where ``c`` is lo's 1-based position in hi's row."""
    out = {}
    for hi, row in enumerate(h.rows):
        for i, (lo, _) in enumerate(row, start=1):
            if lo < hi:
                out[(lo, hi)] = i
    return out


def brute_force_parents(h: SparseHermitian) -> dict[int, list[int | None]]:
    par = {c: [None] * h.n for c in range(1, h.d + 1)}
    for (lo, hi), c in brute_force_edge_colors(h).items():
        par[c][hi] = lo
    return par


def galaxy_matrices(decomp: GalaxyDecomposition) -> dict:
    return {g: decomp.galaxy_matrix(g) for g in decomp.terms}


def check_partition(h: SparseHermitian, decomp: GalaxyDecomposition, mats=None) -> list[str]:
    fails = []
    expected = brute_force_edge_colors(h)
    found = decomp.edge_colors()
    if found != expected:
        missing = set(expected) - set(found)
        extra = set(found) - set(expected)
        fails.append(f"edge coloring differs: missing={sorted(missing)[:5]} extra={sorted(extra)[:5]}")
    mats = mats if mats is not None else galaxy_matrices(decomp)
    total = sum(mats.values())
    if not np.array_equal(total, h.to_dense()):
        fails.append("sum of galaxy terms and diagonal differs from H")
    return fails


def check_forests(h: SparseHermitian, decomp: GalaxyDecomposition) -> list[str]:
    fails = []
    expected = brute_force_parents(h)
    edges_by_color = defaultdict(list)
    for (lo, hi), c in brute_force_edge_colors(h).items():
        edges_by_color[c].append((lo, hi))
    for c in range(1, h.d + 1):
        if decomp.parents[c] != expected[c]:
            fails.append(f"forest {c}: parent table disagrees with brute force")
        indeg = [0] * h.n
        adj = defaultdict(list)
        for lo, hi in edges_by_color[c]:
            indeg[hi] += 1
            adj[lo].append(hi)
            adj[hi].append(lo)
        if any(v > 1 for v in indeg):
            fails.append(f"forest {c}: a vertex has two parents")
        seen = [False] * h.n
        for s in range(h.n):
            if seen[s]:
                continue
            comp, queue = [], deque([s])
            seen[s] = True
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            n_edges = sum(len(adj[u]) for u in comp) // 2
            if n_edges != len(comp) - 1:
                fails.append(f"forest {c}: component of {s} has a cycle")
            roots = sum(1 for u in comp if indeg[u] == 0)
            if roots != 1:
                fails.append(f"forest {c}: component of {s} has {roots} roots")
    return fails


def check_coloring(h: SparseHermitian, decomp: GalaxyDecomposition) -> list[str]:
    fails = []
    for c, par in brute_force_parents(h).items():
        history = recolor_globally(par, h.n)
        for j, cols in enumerate(history):
            for v, p in enumerate(par):
                if p is not None and cols[v] == cols[p]:
                    fails.append(f"forest {c}: round {j} coloring improper on edge ({p}, {v})")
                    break
        final = history[-1]
        if any(not 0 <= x <= 5 for x in final):
            fails.append(f"forest {c}: final color outside 0..5")
        if decomp.colors[c] != final:
            fails.append(f"forest {c}: local ancestor-chain colors differ from global recoloring")
    return fails


def _components(a: np.ndarray) -> list[list[int]]:
    n = a.shape[0]
    nz = a != 0
    seen = np.zeros(n, dtype=bool)
    comps = []
    for s in np.flatnonzero(nz.any(axis=1)):
        if seen[s]:
            continue
        comp, queue = [], deque([int(s)])
        seen[s] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in np.flatnonzero(nz[u]):
                if not seen[w]:
                    seen[w] = True
                    queue.append(int(w))
        comps.append(sorted(comp))
    return comps


def check_galaxies(decomp: GalaxyDecomposition, mats=None) -> list[str]:
    """Every connected component of every galaxy term must be a star K_{1,r}."""
    fails = []
    mats = mats if mats is not None else galaxy_matrices(decomp)
    for g in decomp.terms:
        if g.is_diagonal:
            continue
        a = mats[g]
        for comp in _components(a):
            sub = a[np.ix_(comp, comp)] != 0
            deg = sub.sum(axis=1)
            n_edges = int(deg.sum()) // 2
            is_star = n_edges == len(comp) - 1 and int(deg.max()) == len(comp) - 1
            if not is_star:
                fails.append(f"galaxy {g}: component {comp[:6]} is not a star")
    return fails


def check_star_info(decomp: GalaxyDecomposition, vertices=None) -> list[str]:
    """Query-driven ``star_info`` agrees with the enumerated stars for every vertex asked about."""
    fails = []
    oracle = decomp.oracle.fresh()
    vertices = range(decomp.n) if vertices is None else vertices
    for g in decomp.terms:
        if g.is_diagonal:
            continue
        member = {}
        for st in decomp.stars(g):
            for v in st.vertices:
                member[v] = st
        for x in vertices:
            got = star_info(oracle, x, g)
            want = member.get(x)
            if want is None:
                if got.leaves:
                    fails.append(f"galaxy {g}: vertex {x} should be isolated, got {got}")
            elif got != want:
                fails.append(f"galaxy {g}: star_info({x}) = {got}, expected {want}")
    return fails


def galaxy_spectral_norm(a: np.ndarray) -> float:
    # Block-diagonal over connected components, so the norm is the largest block norm.
    best = 0.0
    for comp in _components(a):
        sub = a[np.ix_(comp, comp)]
        best = max(best, float(np.max(np.abs(np.linalg.eigvalsh(sub)))))
    return best


def column_norm_of(a: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(a, axis=0))) if a.size else 0.0


def check_norms(h: SparseHermitian, decomp: GalaxyDecomposition, mats=None, rel_tol: float = 1e-10) -> list[str]:
    fails = []
    mcn_h = max_column_norm(h)
    mats = mats if mats is not None else galaxy_matrices(decomp)
    for g in decomp.terms:
        if g.is_diagonal:
            continue
        a = mats[g]
        spec, mcn = galaxy_spectral_norm(a), column_norm_of(a)
        if abs(spec - mcn) > rel_tol * mcn:
            fails.append(f"galaxy {g}: spectral {spec} != column norm {mcn}")
        if mcn > mcn_h * (1 + 1e-15):
            fails.append(f"galaxy {g}: column norm exceeds that of H")
    # A nonzero diagonal adds one entry per column to the d off-diagonal ones.
    per_column = h.d + (1 if any(h.diagonal) else 0)
    if mcn_h > math.sqrt(per_column) * max_entry_norm(h) + 1e-12:
        fails.append("column norm exceeds sqrt(entries per column) * max entry")
    return fails


def verify_decomposition(h: SparseHermitian, decomp: GalaxyDecomposition, star_sample=None) -> dict[str, list[str]]:
    mats = galaxy_matrices(decomp)
    return {
        "partition": check_partition(h, decomp, mats),
        "forests": check_forests(h, decomp),
        "coloring": check_coloring(h, decomp),
        "galaxies": check_galaxies(decomp, mats),
        "star_info": check_star_info(decomp, star_sample),
        "norms": check_norms(h, decomp, mats),
    }
