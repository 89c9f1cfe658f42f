"""Galaxy terms of the star decomposition and their exact exponentials.

Galaxy ``(c, t)`` holds the edges of forest ``c`` that point at a vertex of final
color ``t``.  Each connected component is a star whose center is a parent
(color != t) and whose leaves are its color-t children.  On the span of
``|center>`` and ``|phi> = sum_i w_i |leaf_i> / s`` the star acts as ``s`` times
a swap, and as zero elsewhere, so its exponential is a 2x2 rotation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coloring import ancestor_chain, chain_color, rounds
from .forest import TO_CHILD, incident_edges, parent
from .oracle import BlackBox, charge_template

N_COLORS = 6


@dataclass(frozen=True, order=True)
class GalaxyIndex:
    """Term label: forest ``c`` in ``1..d`` and final color ``t`` in ``0..5``; ``c == 0`` is the diagonal."""

    c: int
    t: int

    @property
    def is_diagonal(self) -> bool:
        return self.c == 0

    def __str__(self) -> str:
        return "diag" if self.is_diagonal else f"c{self.c}t{self.t}"


DIAGONAL = GalaxyIndex(0, 0)


def galaxy_terms(d: int) -> list[GalaxyIndex]:
    """All ``6d`` galaxy labels in schedule order, followed by the diagonal term."""
    return [GalaxyIndex(c, t) for c in range(1, d + 1) for t in range(N_COLORS)] + [DIAGONAL]


@dataclass(frozen=True)
class StarInfo:
    center: int
    leaves: tuple[int, ...] = ()
    weights: tuple[complex, ...] = ()  # weights[i] = H[leaves[i], center]
    s: float = field(default=0.0)

    @classmethod
    def build(cls, center: int, pairs) -> "StarInfo":
        pairs = sorted(pairs)
        leaves = tuple(p[0] for p in pairs)
        weights = tuple(complex(p[1]) for p in pairs)
        return cls(center, leaves, weights, math.sqrt(sum(abs(w) ** 2 for w in weights)))

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.center,) + self.leaves

    def matrix(self, n: int) -> np.ndarray:
        a = np.zeros((n, n), dtype=complex)
        for y, w in zip(self.leaves, self.weights):
            a[y, self.center] = w
            a[self.center, y] = w.conjugate()
        return a


def _rounds(n: int) -> int:
    return rounds(max(n, 2))


def cost_u(n: int, d: int) -> int:
    """Queries charged for one application of the star-information unitary.

    Ancestor chain, row scan plus child verification, and the extra parent fetch
    needed when the input vertex is a leaf.
    """
    return _rounds(n) + 2 * d + 1


def exponential_charge(g: GalaxyIndex, n: int, d: int) -> int:
    """Circuit charge of one exponential: a compute/uncompute pair of queries."""
    return 2 if g.is_diagonal else 2 * cost_u(n, d)


def star_info(oracle: BlackBox, x: int, g: GalaxyIndex) -> StarInfo:
    """The star of galaxy ``g`` containing ``x``, learned through oracle queries.

    The result does not depend on which vertex of the star is asked about.
    """
    if g.is_diagonal:
        raise ValueError("the diagonal term has no star structure")
    r = _rounds(oracle.n)
    chain, at_root = ancestor_chain(oracle, x, g.c, r)
    if chain_color(chain, at_root, r) != g.t:
        return _center_star(oracle, chain, at_root, g, r)
    if at_root and len(chain) == 1:
        return StarInfo(x)
    # x is a leaf; its parent's chain is ours shifted by one, topped up by one query.
    p_chain = chain[1:]
    p_at_root = at_root
    if not at_root:
        top = parent(oracle, p_chain[-1], g.c).parent
        if top is None:
            p_at_root = True
        else:
            p_chain.append(top)
    return _center_star(oracle, p_chain, p_at_root, g, r)


def _center_star(oracle: BlackBox, chain: list[int], at_root: bool, g: GalaxyIndex, r: int) -> StarInfo:
    x = chain[0]
    pairs = []
    for e in incident_edges(oracle, x, g.c):
        if e.direction != TO_CHILD:
            continue
        # A child's ancestor chain is the child followed by x's chain.
        if chain_color([e.neighbor] + chain, at_root, r) == g.t:
            pairs.append((e.neighbor, e.weight.conjugate()))
    return StarInfo.build(x, pairs)


def star_expm_apply(star: StarInfo, duration: float, state: np.ndarray) -> np.ndarray:
    """Apply ``exp(-i H_star duration)`` to ``state`` (shape ``(N,)`` or ``(N, B)``)."""
    out = np.array(state, dtype=complex, copy=True)
    if not star.leaves:
        return out
    leaves = np.asarray(star.leaves)
    phi = np.asarray(star.weights) / star.s
    if out.ndim == 2:
        phi = phi[:, None]
    a_c = state[star.center]
    alpha = np.sum(phi.conj() * state[leaves], axis=0)
    cs, sn = math.cos(star.s * duration), math.sin(star.s * duration)
    out[star.center] = cs * a_c - 1j * sn * alpha
    out[leaves] += phi * ((cs - 1) * alpha - 1j * sn * a_c)
    return out


@dataclass
class _CompiledGalaxy:
    centers: np.ndarray
    s: np.ndarray
    leaves: np.ndarray
    phi: np.ndarray
    starts: np.ndarray
    leaf_star: np.ndarray


class GalaxyDecomposition:
    """Enumerates every star of every galaxy term of ``oracle`` and applies term exponentials.

    Enumeration reads the oracle once per (vertex, forest) for parents plus
    once per vertex for the diagonal; those reads land in ``classical_calls``
    only.  Circuit charges happen in :meth:`apply_galaxy_exponential`.
    """

    def __init__(self, oracle: BlackBox):
        self.oracle = oracle
        self.n = oracle.n
        self.d = oracle.d
        self.n_rounds = _rounds(self.n)
        self.terms = galaxy_terms(self.d)
        self.parents: dict[int, list[int | None]] = {}
        self.parent_weights: dict[int, list[complex]] = {}
        self.colors: dict[int, list[int]] = {}
        self._stars: dict[GalaxyIndex, list[StarInfo]] = {}
        for c in range(1, self.d + 1):
            self._enumerate_forest(c)
        self.diagonal = np.array([oracle.query_diagonal(x) for x in range(self.n)], dtype=float)
        self._compiled = {g: self._compile(stars) for g, stars in self._stars.items()}

    def _enumerate_forest(self, c: int) -> None:
        answers = [parent(self.oracle, v, c) for v in range(self.n)]
        par = [a.parent for a in answers]
        self.parents[c] = par
        self.parent_weights[c] = [a.weight for a in answers]
        cols = []
        for v in range(self.n):
            chain = [v]
            at_root = False
            for _ in range(self.n_rounds):
                p = par[chain[-1]]
                if p is None:
                    at_root = True
                    break
                chain.append(p)
            cols.append(chain_color(chain, at_root, self.n_rounds))
        self.colors[c] = cols
        groups: dict[int, dict[int, list[tuple[int, complex]]]] = {t: {} for t in range(N_COLORS)}
        for v in range(self.n):
            p = par[v]
            if p is not None:
                groups[cols[v]].setdefault(p, []).append((v, answers[v].weight))
        for t in range(N_COLORS):
            self._stars[GalaxyIndex(c, t)] = [StarInfo.build(p, pairs) for p, pairs in sorted(groups[t].items())]

    @staticmethod
    def _compile(stars: list[StarInfo]) -> _CompiledGalaxy:
        leaves, phi, starts, leaf_star = [], [], [], []
        for k, st in enumerate(stars):
            starts.append(len(leaves))
            leaves.extend(st.leaves)
            phi.extend(w / st.s for w in st.weights)
            leaf_star.extend([k] * len(st.leaves))
        return _CompiledGalaxy(
            centers=np.array([st.center for st in stars], dtype=int),
            s=np.array([st.s for st in stars], dtype=float),
            leaves=np.array(leaves, dtype=int),
            phi=np.array(phi, dtype=complex),
            starts=np.array(starts, dtype=int),
            leaf_star=np.array(leaf_star, dtype=int),
        )

    def stars(self, g: GalaxyIndex) -> list[StarInfo]:
        """Non-empty stars of galaxy ``g``, ordered by center."""
        return list(self._stars[g])

    def galaxy_matrix(self, g: GalaxyIndex) -> np.ndarray:
        if g.is_diagonal:
            return np.diag(self.diagonal).astype(complex)
        a = np.zeros((self.n, self.n), dtype=complex)
        for st in self._stars[g]:
            for y, w in zip(st.leaves, st.weights):
                a[y, st.center] = w
                a[st.center, y] = w.conjugate()
        return a

    def edge_colors(self) -> dict[tuple[int, int], int]:
        """Forest index of every edge ``(parent, child)``, as discovered by enumeration."""
        out = {}
        for c, par in self.parents.items():
            for v, p in enumerate(par):
                if p is not None:
                    out[(p, v)] = c
        return out

    def exponential_charge(self, g: GalaxyIndex) -> int:
        return exponential_charge(g, self.n, self.d)

    def apply_galaxy_exponential(self, g: GalaxyIndex, duration: float, state: np.ndarray) -> np.ndarray:
        """``exp(-i H_g duration) state``, charging the circuit template once."""
        charge_template(self.oracle.counter, self.exponential_charge(g))
        return self.apply_uncharged(g, duration, state)

    def apply_uncharged(self, g: GalaxyIndex, duration: float, state: np.ndarray) -> np.ndarray:
        if g.is_diagonal:
            phase = np.exp(-1j * self.diagonal * duration)
            return phase[:, None] * state if state.ndim == 2 else phase * state
        cg = self._compiled[g]
        out = np.array(state, dtype=complex, copy=True)
        if cg.centers.size == 0:
            return out
        phi = cg.phi[:, None] if out.ndim == 2 else cg.phi
        shape = (-1, 1) if out.ndim == 2 else (-1,)
        a_c = state[cg.centers]
        alpha = np.add.reduceat(phi.conj() * state[cg.leaves], cg.starts, axis=0)
        cs = np.cos(cg.s * duration).reshape(shape)
        sn = np.sin(cg.s * duration).reshape(shape)
        out[cg.centers] = cs * a_c - 1j * sn * alpha
        delta = (cs - 1) * alpha - 1j * sn * a_c
        out[cg.leaves] += phi * delta[cg.leaf_star]
        return out
