"""Finite undirected multigraphs and their bipartite (cyan/purple) variant.

Vertices are opaque strings, always iterated in lexicographic order.  Edges
are stored as a multiplicity per unordered pair of distinct vertices, so a
"double edge" is a pair with multiplicity 2.  Self-loops are rejected.
"""

from __future__ import annotations

from collections import deque
from types import MappingProxyType
from typing import Iterable, Mapping

Pair = tuple[str, str]


class GraphError(ValueError):
    """Raised for malformed graphs or references to unknown vertices."""


def _pair(v: str, w: str) -> Pair:
    if v == w:
        raise GraphError(f"self-loop at {v!r} is not allowed")
    return (v, w) if v < w else (w, v)


class MultiGraph:
    """Immutable finite multigraph without self-loops."""

    __slots__ = ("_vertices", "_index", "_mult", "_adj")

    def __init__(self, vertices: Iterable[str], edge_mult: Mapping[Pair, int] | None = None):
        verts = list(vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex identifiers")
        for v in verts:
            if not isinstance(v, str):
                raise GraphError(f"vertex identifiers must be strings, got {v!r}")
        self._vertices = tuple(sorted(verts))
        self._index = {v: i for i, v in enumerate(self._vertices)}
        mult: dict[Pair, int] = {}
        for (v, w), m in (edge_mult or {}).items():
            p = _pair(v, w)
            if v not in self._index or w not in self._index:
                raise GraphError(f"edge {p} references an unknown vertex")
            if not isinstance(m, int) or m < 1:
                raise GraphError(f"multiplicity of {p} must be a positive integer, got {m!r}")
            if p in mult:
                raise GraphError(f"duplicate edge {p}")
            mult[p] = m
        self._mult = dict(sorted(mult.items()))
        adj: dict[str, dict[str, int]] = {v: {} for v in self._vertices}
        for (v, w), m in self._mult.items():
            adj[v][w] = m
            adj[w][v] = m
        self._adj = adj

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple]) -> MultiGraph:
        """Build from ``(v, w)`` or ``(v, w, m)`` items, summing repeated pairs."""
        mult: dict[Pair, int] = {}
        for e in edges:
            v, w = e[0], e[1]
            m = e[2] if len(e) > 2 else 1
            p = _pair(v, w)
            mult[p] = mult.get(p, 0) + m
        return cls(vertices, mult)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edge_mult(self) -> Mapping[Pair, int]:
        return MappingProxyType(self._mult)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def mult(self, v: str, w: str) -> int:
        if v == w:
            return 0
        return self._adj[v].get(w, 0) if v in self._adj else 0

    def neighbors(self, v: str) -> Mapping[str, int]:
        self.index(v)
        return MappingProxyType(self._adj[v])

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(self._mult.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._mult == other._mult

    def __hash__(self) -> int:
        return hash((self._vertices, tuple(self._mult.items())))

    def __repr__(self) -> str:
        edges = ", ".join(f"{v}-{w}" + (f"x{m}" if m > 1 else "") for (v, w), m in self._mult.items())
        return f"MultiGraph([{', '.join(self._vertices)}]; {edges})"

    def to_json(self) -> dict:
        return {
            "vertices": list(self._vertices),
            "edges": [[v, w, m] for (v, w), m in self._mult.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultiGraph:
        try:
            vertices = data["vertices"]
            raw = data.get("edges", [])
        except (KeyError, TypeError, AttributeError) as exc:
            raise GraphError(f"malformed graph object: {exc}") from None
        mult: dict[Pair, int] = {}
        for e in raw:
            if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
                raise GraphError(f"malformed edge entry {e!r}")
            v, w = e[0], e[1]
            m = e[2] if len(e) == 3 else 1
            p = _pair(v, w)
            if p in mult:
                raise GraphError(f"duplicate edge {p}; use the multiplicity field")
            mult[p] = m
        return cls(vertices, mult)


def betti(g: MultiGraph) -> int:
    """First Betti number |E| - |V| + #components (edges with multiplicity)."""
    return g.num_edges - g.num_vertices + len(connected_components(g))


def degree(g: MultiGraph, v: str) -> int:
    """Number of incident edges, counted with multiplicity."""
    return sum(g.neighbors(v).values())


def connected_components(g: MultiGraph) -> list[tuple[str, ...]]:
    """Partition of the vertices into path-connected blocks.

    Blocks are sorted internally and listed by their smallest vertex.
    """
    seen: set[str] = set()
    blocks = []
    for start in g.vertices:
        if start in seen:
            continue
        seen.add(start)
        block = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    block.append(w)
                    queue.append(w)
        blocks.append(tuple(sorted(block)))
    return blocks


def is_connected(g: MultiGraph) -> bool:
    return len(connected_components(g)) == 1


def full_subgraph(g: MultiGraph, s: Iterable[str]) -> MultiGraph:
    """The subgraph spanned by ``s`` with every edge of ``g`` inside it."""
    keep = set(s)
    for v in keep:
        g.index(v)
    mult = {p: m for p, m in g.edge_mult.items() if p[0] in keep and p[1] in keep}
    return MultiGraph(keep, mult)


class BipartiteDualGraph:
    """A multigraph with a cyan/purple 2-coloring; edges join distinct colors."""

    __slots__ = ("cyan", "purple", "underlying")

    def __init__(self, cyan: Iterable[str], purple: Iterable[str], underlying: MultiGraph):
        cyan = frozenset(cyan)
        purple = frozenset(purple)
        if cyan & purple:
            raise GraphError(f"vertices colored twice: {sorted(cyan & purple)}")
        if cyan | purple != set(underlying.vertices):
            raise GraphError("cyan and purple must partition the vertex set")
        for v, w in underlying.edge_mult:
            if (v in cyan) == (w in cyan):
                raise GraphError(f"edge {v}-{w} joins two vertices of the same color")
        self.cyan = cyan
        self.purple = purple
        self.underlying = underlying

    def color(self, v: str) -> str:
        if v in self.cyan:
            return "cyan"
        if v in self.purple:
            return "purple"
        raise GraphError(f"unknown vertex {v!r}")

    def purple_degrees_ok(self) -> bool:
        """True when every purple vertex has degree exactly 2 (dual-graph role)."""
        return all(degree(self.underlying, x) == 2 for x in self.purple)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteDualGraph):
            return NotImplemented
        return (self.cyan, self.purple, self.underlying) == (other.cyan, other.purple, other.underlying)

    def __hash__(self) -> int:
        return hash((self.cyan, self.purple, self.underlying))

    def __repr__(self) -> str:
        return f"BipartiteDualGraph(cyan={sorted(self.cyan)}, purple={sorted(self.purple)})"

    def to_json(self) -> dict:
        data = self.underlying.to_json()
        data["cyan"] = sorted(self.cyan)
        data["purple"] = sorted(self.purple)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> BipartiteDualGraph:
        g = MultiGraph.from_json(data)
        try:
            return cls(data["cyan"], data["purple"], g)
        except KeyError as exc:
            raise GraphError(f"bipartite graph missing {exc}") from None
