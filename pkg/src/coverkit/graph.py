"""Finite simple undirected graphs with stable integer vertex identifiers.

Vertex ids survive every derived construction (balls, induced subgraphs),
so local searches can always refer back to the host graph.  Everything is
immutable after construction and all iteration is in ascending id order,
which makes every operation in the package deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InputError

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph over integer vertex ids."""

    __slots__ = ("_vertices", "_adj", "_edges")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge]):
        vs = sorted({int(v) for v in vertices})
        adj: dict[int, set[int]] = {v: set() for v in vs}
        es: set[Edge] = set()
        for u, w in edges:
            if u == w:
                raise InputError(f"loop edge at vertex {u}")
            if u not in adj or w not in adj:
                raise InputError(f"edge ({u},{w}) uses an unknown vertex")
            adj[u].add(w)
            adj[w].add(u)
            es.add(edge_key(u, w))
        self._vertices: tuple[int, ...] = tuple(vs)
        self._adj: dict[int, tuple[int, ...]] = {v: tuple(sorted(adj[v])) for v in vs}
        self._edges: frozenset[Edge] = frozenset(es)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._vertices)

    def neighbors(self, v: int) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise InputError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._edges

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self._edges)

    def distances_from(self, o: int, limit: int | None = None) -> dict[int, int]:
        """BFS distances from o; vertices beyond `limit` are omitted."""
        if o not in self._adj:
            raise InputError(f"unknown vertex {o}")
        dist = {o: 0}
        queue = deque([o])
        while queue:
            v = queue.popleft()
            d = dist[v]
            if limit is not None and d == limit:
                continue
            for u in self._adj[v]:
                if u not in dist:
                    dist[u] = d + 1
                    queue.append(u)
        return dist

    def is_connected(self) -> bool:
        if not self._vertices:
            return True
        return len(self.distances_from(self._vertices[0])) == self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self._edges)})"

    # -- JSON interchange ---------------------------------------------------

    def to_json_dict(
        self,
        rotation: dict[int, tuple[int, ...]] | None = None,
        labels: dict | None = None,
    ) -> dict:
        """Graph JSON: dense 0-based vertices, edges with u < v."""
        if self._vertices != tuple(range(self.n)):
            raise InputError("only graphs with dense 0-based ids are serialisable")
        d: dict = {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}
        if rotation is not None:
            d["rotation"] = {str(v): list(rotation[v]) for v in self._vertices}
        if labels is not None:
            d["labels"] = {str(k): v for k, v in labels.items()}
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "Graph":
        try:
            n = int(d["n"])
            edges = [(int(u), int(v)) for u, v in d["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed graph JSON: {exc}") from exc
        return cls(range(n), edges)


@dataclass(frozen=True)
class RootedBall:
    """B_i(o): the induced subgraph on vertices at distance <= i from o."""

    graph: Graph
    root: int
    radius: int
    dist: dict[int, int] = field(compare=False)

    def __post_init__(self) -> None:
        assert all(d <= self.radius for d in self.dist.values())

    @property
    def n(self) -> int:
        return self.graph.n


def ball(g: Graph, o: int, i: int) -> RootedBall:
    """The ball B_i(o; g): BFS to depth i, then induced subgraph."""
    if i < 0:
        raise InputError("ball radius must be >= 0")
    dist = g.distances_from(o, limit=i)
    return RootedBall(graph=induced_subgraph(g, dist.keys()), root=o, radius=i, dist=dist)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Induced subgraph on s, keeping original vertex ids."""
    keep = set(s)
    for v in keep:
        if v not in g:
            raise InputError(f"unknown vertex {v} in subgraph request")
    edges = [(u, w) for (u, w) in g.edges if u in keep and w in keep]
    return Graph(keep, edges)


def is_connected_excluding(g: Graph, removed: Iterable[int]) -> bool:
    """True iff g minus `removed` has at most one connected component.

    An empty remainder counts as connected.
    """
    gone = set(removed)
    for v in gone:
        if v not in g:
            raise InputError(f"unknown vertex {v}")
    rest = [v for v in g.vertices if v not in gone]
    if not rest:
        return True
    seen = {rest[0]}
    queue = deque([rest[0]])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in gone and u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(rest)


def is_three_connected(g: Graph) -> bool:
    """Brute-force vertex-cut search over all sets of size <= 2."""
    if g.n < 4:
        raise InputError("3-connectivity check needs at least 4 vertices")
    if not g.is_connected():
        return False
    vs = g.vertices
    for v in vs:
        if not is_connected_excluding(g, {v}):
            return False
    for i, u in enumerate(vs):
        for w in vs[i + 1 :]:
            if not is_connected_excluding(g, {u, w}):
                return False
    return True
