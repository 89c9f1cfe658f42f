"""Deterministic coin tossing: 6-color a forest of arborescences from short ancestor chains.

Colors start as vertex labels.  Each round a vertex replaces its color with
``2k + b`` where ``k`` is the lowest bit position at which it differs from its
parent's color and ``b`` is its own bit there; a root uses ``k = 0``.  The
color width shrinks from ``L`` to ``ceil(log2 L) + 1`` bits per round, so after
``rounds(N)`` rounds a vertex's color depends only on its first ``rounds(N)``
ancestors.
"""
from __future__ import annotations

import math
from typing import Sequence

from .core_model import bit_length
from .forest import parent
from .oracle import BlackBox


class ImproperColoringError(ValueError):
    """A vertex and its parent entered a round with the same color."""


def log_star(n: float) -> int:
    """Iterated base-2 logarithm: 0 for ``n <= 1``, else ``1 + log_star(log2 n)``."""
    count = 0
    x = float(n)
    while x > 1:
        x = math.log2(x)
        count += 1
    return count


def next_width(width: int) -> int:
    return math.ceil(math.log2(width)) + 1


def width_schedule(n: int) -> list[int]:
    """Color widths ``L_1, L_2, ...`` entering each round, up to and including the final round."""
    widths = [bit_length(n)]
    while True:
        nxt = next_width(widths[-1])
        if nxt == widths[-1]:
            break
        widths.append(nxt)
    # One pass at the stationary width, then the final palette-reducing round.
    widths.append(widths[-1])
    return widths


def rounds(n: int) -> int:
    """Total number of recoloring rounds for labels ``0..n-1``.

    Runs the width recurrence to its fixpoint (counting the round that reaches
    it) and adds one final round.
    """
    if n < 2:
        raise ValueError(f"rounds() needs n >= 2, got {n}")
    return len(width_schedule(n))


def palette_bound(n: int) -> int:
    """Upper bound on the number of distinct final colors: twice the stationary width."""
    return 2 * width_schedule(n)[-1]


def cv_step(own: int, parent_color: int) -> int:
    diff = own ^ parent_color
    if diff == 0:
        raise ImproperColoringError(f"vertex and parent share color {own}")
    k = (diff & -diff).bit_length() - 1
    return 2 * k + ((own >> k) & 1)


def root_step(own: int) -> int:
    return own & 1


def chain_color(chain: Sequence[int], ends_at_root: bool, n_rounds: int) -> int:
    """Replay ``n_rounds`` rounds on an ancestor chain ``[v, p(v), p(p(v)), ...]``; return v's color.

    Without a root at the end, each round loses the last element, so the
    chain must hold at least ``n_rounds + 1`` labels.
    """
    if not ends_at_root and len(chain) < n_rounds + 1:
        raise ValueError("ancestor chain too short for the requested rounds")
    cols = list(chain)
    last = len(chain) - 1
    for _ in range(n_rounds):
        nxt = []
        for i in range(len(cols)):
            if ends_at_root and i == last:
                nxt.append(root_step(cols[i]))
            elif i + 1 < len(cols):
                nxt.append(cv_step(cols[i], cols[i + 1]))
        cols = nxt
    return cols[0]


def ancestor_chain(oracle: BlackBox, v: int, c: int, n_rounds: int) -> tuple[list[int], bool]:
    """``[v, a_1, ..., a_m]`` with ``m <= n_rounds`` parent queries; flag says the chain reached a root."""
    chain = [v]
    for _ in range(n_rounds):
        p = parent(oracle, chain[-1], c).parent
        if p is None:
            return chain, True
        chain.append(p)
    return chain, False


def color(oracle: BlackBox, v: int, c: int) -> int:
    """Final color of ``v`` in forest ``c``, in ``0..5``, using at most ``rounds(N)`` queries."""
    r = rounds(max(oracle.n, 2))
    chain, at_root = ancestor_chain(oracle, v, c, r)
    return chain_color(chain, at_root, r)


def recolor_globally(parents: Sequence[int | None], n: int) -> list[list[int]]:
    """Round-by-round colorings of a whole forest given its parent table.

    Entry ``j`` of the result is the coloring entering round ``j + 1``; the last
    entry is the final coloring.
    """
    cols = list(range(len(parents)))
    history = [cols]
    for _ in range(rounds(max(n, 2))):
        cols = [root_step(cols[v]) if p is None else cv_step(cols[v], cols[p]) for v, p in enumerate(parents)]
        history.append(cols)
    return history
