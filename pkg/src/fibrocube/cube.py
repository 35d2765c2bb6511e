"""Fibonacci and Lucas cube construction, BFS distances, and export.

Vertices are bit-packed ints (see _bits for the convention).  A Fibonacci
vertex has no two adjacent ones; a Lucas vertex additionally may not have
ones in both the first and last coordinate.  For n = 1 the cyclic rule
makes x_1 adjacent to itself, so L_1 = {"0"}.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum

from ._bits import bits_to_string
from .errors import DimensionError, UnknownVertexError

MAX_DIMENSION = 32


class CubeKind(str, Enum):
    FIBONACCI = "fibonacci"
    LUCAS = "lucas"


def is_vertex(kind: CubeKind, n: int, bits: int) -> bool:
    """True iff ``bits`` encodes a vertex of the kind-n cube (bits < 2**n)."""
    if bits & (bits >> 1):
        return False
    if kind is CubeKind.LUCAS:
        if n == 1:
            return bits == 0
        if (bits & 1) and (bits >> (n - 1)) & 1:
            return False
    return True


def _fibonacci_values(n: int) -> list[int]:
    # ascending by construction: the high-bit block extends the n-2 list
    if n == 1:
        return [0, 1]
    if n == 2:
        return [0, 1, 2]
    prev = _fibonacci_values(n - 1)
    prev2 = _fibonacci_values(n - 2)
    high = 1 << (n - 1)
    return prev + [v | high for v in prev2]


@dataclass(frozen=True, eq=False)
class CubeGraph:
    """Immutable cube graph; safe to share across concurrent readers."""

    kind: CubeKind
    n: int
    vertices: tuple[int, ...]
    index_of: dict[int, int]
    adjacency: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def label(self, index: int) -> str:
        return bits_to_string(self.vertices[index], self.n)


def build_cube(kind: CubeKind, n: int) -> CubeGraph:
    """Construct the full graph, vertices ascending by bit value."""
    if not 1 <= n <= MAX_DIMENSION:
        raise DimensionError(f"dimension {n} outside 1..{MAX_DIMENSION}")
    kind = CubeKind(kind)
    if kind is CubeKind.FIBONACCI:
        values = _fibonacci_values(n)
    else:
        values = [v for v in _fibonacci_values(n) if is_vertex(kind, n, v)]
    index_of = {v: i for i, v in enumerate(values)}
    adjacency = tuple(
        tuple(
            index_of[v ^ (1 << b)]
            for b in range(n)
            if (v ^ (1 << b)) in index_of
        )
        for v in values
    )
    return CubeGraph(kind, n, tuple(values), index_of, adjacency)


def distance(g: CubeGraph, u: int, v: int) -> int:
    """Graph distance between vertex bit values, by BFS (never assumed
    equal to Hamming distance)."""
    for x in (u, v):
        if x not in g.index_of:
            raise UnknownVertexError(
                f"{bits_to_string(x, g.n)} is not a vertex of {g.kind.value}_{g.n}"
            )
    if u == v:
        return 0
    src, dst = g.index_of[u], g.index_of[v]
    dist = {src: 0}
    q = deque([src])
    while q:
        cur = q.popleft()
        d = dist[cur]
        for nb in g.adjacency[cur]:
            if nb not in dist:
                if nb == dst:
                    return d + 1
                dist[nb] = d + 1
                q.append(nb)
    raise UnknownVertexError("graph is disconnected")  # cannot happen


def edges(g: CubeGraph) -> list[tuple[int, int]]:
    """Edge list as ascending (i, j) index pairs, i < j, sorted."""
    out = []
    for i, nbrs in enumerate(g.adjacency):
        for j in nbrs:
            if i < j:
                out.append((i, j))
    out.sort()
    return out


def export_graph(g: CubeGraph, format: str = "json") -> str:
    """Serialize to deterministic JSON or undirected DOT."""
    es = edges(g)
    if format == "json":
        obj = {
            "kind": g.kind.value,
            "n": g.n,
            "vertices": [g.label(i) for i in range(len(g))],
            "edges": [[i, j] for i, j in es],
        }
        return json.dumps(obj, separators=(",", ":"))
    if format == "dot":
        lines = [f"graph {g.kind.value}_{g.n} {{"]
        for i in range(len(g)):
            lines.append(f'  v{i} [label="{g.label(i)}"];')
        for i, j in es:
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format: {format!r}")
