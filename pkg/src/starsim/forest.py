"""Split the edges of H into d forests of arborescences using only oracle queries.

Every endpoint proposes, for each incident edge, the oracle index under which
it sees the other endpoint; the higher label's proposal wins.  Edges point
from the smaller label to the larger, so a vertex's parent in forest ``c`` can
only be its own ``c``-th neighbor.
"""
from __future__ import annotations

from dataclasses import dataclass

from .oracle import BlackBox

TO_PARENT = "to_parent"
TO_CHILD = "to_child"


@dataclass(frozen=True)
class ParentAnswer:
    parent: int | None
    weight: complex = 0j

    @property
    def is_root(self) -> bool:
        return self.parent is None


ROOT = ParentAnswer(None)


@dataclass(frozen=True)
class IncidentEdge:
    neighbor: int
    weight: complex  # H[x, neighbor]
    direction: str


def edge_color(oracle: BlackBox, x: int, y: int) -> int:
    """Forest index of edge ``xy``: the position of the lower endpoint in the higher endpoint's row."""
    hi, lo = (x, y) if x > y else (y, x)
    for i in range(1, oracle.d + 1):
        e = oracle.query(hi, i)
        if e.column == lo and not e.is_padding(hi):
            return i
    raise ValueError(f"edge ({x}, {y}) is not present")


def parent(oracle: BlackBox, v: int, c: int) -> ParentAnswer:
    """Parent of ``v`` in forest ``c``, with exactly one query."""
    return _parent_from_entry(v, oracle.query(v, c))


def _parent_from_entry(v: int, e) -> ParentAnswer:
    if e.column < v:
        return ParentAnswer(e.column, e.weight)
    return ROOT


def incident_edges(oracle: BlackBox, x: int, c: int) -> list[IncidentEdge]:
    """Edges of forest ``c`` touching ``x``, sorted by neighbor label.

    Scans x's row (d queries; entry ``c`` of the scan doubles as the parent
    lookup) and verifies each larger neighbor with one query, so at most 2d.
    """
    row = [oracle.query(x, i) for i in range(1, oracle.d + 1)]
    par = _parent_from_entry(x, row[c - 1])
    out = []
    seen = set()
    for e in row:
        y = e.column
        if e.is_padding(x) or y in seen:
            continue
        seen.add(y)
        if y < x:
            if y == par.parent:
                out.append(IncidentEdge(y, e.weight, TO_PARENT))
        elif oracle.query(y, c).column == x:
            out.append(IncidentEdge(y, e.weight, TO_CHILD))
    out.sort(key=lambda edge: edge.neighbor)
    return out
