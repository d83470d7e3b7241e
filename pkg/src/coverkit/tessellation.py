"""Plane patches of regular {p,q} tessellations.

A patch is a finite combinatorial window into the infinite tessellation:
a graph together with a rotation system, the set of traced interior
faces, and a per-vertex `complete_radius` certifying how much of the
infinite graph around each vertex is faithfully present.

Generation is by face completion, not plain BFS: vertices are completed
layer by layer, and completing a vertex closes every face around it.
Each new face is forced by a counting rule: when the face being attached
at a boundary vertex is the last one that vertex still needs, the face
must also absorb that vertex's remaining boundary edge, so the shared
path with the current boundary extends; otherwise a fresh edge is opened.
This keeps every interior vertex at degree q with q faces of length p.
"""

from __future__ import annotations

import json
from collections import deque
from pathlib import Path
from typing import Sequence

from .errors import InputError, PatchTooSmallError
from .graph import Graph, RootedBall, ball, edge_key


class FaceBoundary:
    """A cycle of the underlying graph, canonicalised up to rotation and
    reflection so that equal cycles compare and hash equal."""

    __slots__ = ("cycle", "_edges")

    def __init__(self, cycle: Sequence[int]):
        t = tuple(int(v) for v in cycle)
        if len(t) < 3 or len(set(t)) != len(t):
            raise InputError(f"not a simple cycle: {t}")
        self.cycle: tuple[int, ...] = _canonical_cycle(t)
        self._edges = frozenset(
            edge_key(self.cycle[i], self.cycle[(i + 1) % len(t)]) for i in range(len(t))
        )

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    def __len__(self) -> int:
        return len(self.cycle)

    def __contains__(self, v: int) -> bool:
        return v in self.cycle

    def __iter__(self):
        return iter(self.cycle)

    def edges_at(self, v: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """The two cycle edges incident with v, in canonical order."""
        i = self.cycle.index(v)
        k = len(self.cycle)
        a = edge_key(v, self.cycle[(i - 1) % k])
        b = edge_key(v, self.cycle[(i + 1) % k])
        return tuple(sorted((a, b)))  # type: ignore[return-value]

    def cycle_from(self, v: int, towards: int) -> tuple[int, ...]:
        """The cycle listed starting at v, second vertex `towards`."""
        k = len(self.cycle)
        i = self.cycle.index(v)
        if self.cycle[(i + 1) % k] == towards:
            return tuple(self.cycle[(i + j) % k] for j in range(k))
        if self.cycle[(i - 1) % k] == towards:
            return tuple(self.cycle[(i - j) % k] for j in range(k))
        raise InputError(f"{towards} is not a cycle neighbour of {v}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FaceBoundary):
            return NotImplemented
        return self.cycle == other.cycle

    def __hash__(self) -> int:
        return hash(self.cycle)

    def __lt__(self, other: "FaceBoundary") -> bool:
        return (len(self.cycle), self.cycle) < (len(other.cycle), other.cycle)

    def __repr__(self) -> str:
        return f"FaceBoundary{self.cycle}"


def _canonical_cycle(t: tuple[int, ...]) -> tuple[int, ...]:
    k = len(t)
    best = None
    for seq in (t, t[::-1]):
        for s in range(k):
            cand = seq[s:] + seq[:s]
            if best is None or cand < best:
                best = cand
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Face tracing on a rotation system
# ---------------------------------------------------------------------------

def trace_faces(g: Graph, rotation: dict[int, Sequence[int]]) -> list[tuple[int, ...]]:
    """All closed walks of the next-dart map of (g, rotation).

    The successor of dart (u, v) is (v, w) where w follows u in the cyclic
    rotation at v.  Every directed edge lies in exactly one returned walk;
    the sum of walk lengths is 2|E|.  Classification of walks into interior
    faces and an outer boundary is left to the caller.
    """
    succ: dict[int, dict[int, int]] = {}
    for v in g.vertices:
        try:
            rot = tuple(rotation[v])
        except KeyError:
            raise InputError(f"rotation missing for vertex {v}") from None
        if sorted(rot) != sorted(g.neighbors(v)):
            raise InputError(f"rotation at {v} does not match its adjacency")
        succ[v] = {rot[i]: rot[(i + 1) % len(rot)] for i in range(len(rot))}

    seen: set[tuple[int, int]] = set()
    walks: list[tuple[int, ...]] = []
    for u in g.vertices:
        for v in g.neighbors(u):
            if (u, v) in seen:
                continue
            walk = [u]
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append(b)
                a, b = b, succ[b][a]
            assert (a, b) == (u, v), "dart orbit did not close on its start"
            walks.append(_canonical_walk(tuple(walk[:-1])))
    return walks


def _canonical_walk(w: tuple[int, ...]) -> tuple[int, ...]:
    """Rotate a closed walk to start at its lexicographically least dart."""
    k = len(w)
    best = 0
    for i in range(1, k):
        if (w[i], w[(i + 1) % k]) < (w[best], w[(best + 1) % k]):
            best = i
    return tuple(w[(best + j) % k] for j in range(k))


def _is_simple_walk(w: tuple[int, ...]) -> bool:
    return len(set(w)) == len(w)


# ---------------------------------------------------------------------------
# PlanePatch
# ---------------------------------------------------------------------------

class PlanePatch:
    """A finite window into a plane tessellation.

    Attributes:
        graph: the underlying Graph (dense 0-based ids, root 0 for
            generated patches).
        root: the distinguished origin vertex o.
        rotation: cyclic neighbour order at every vertex.
        faces: every interior face, as canonical FaceBoundary values.
        outer: the outer boundary walk (an artifact of truncation, never
            treated as a face).
        complete_radius: v -> largest i such that B_i(v) of the infinite
            tessellation is certified to sit inside the patch.
        schlafli: (p, q) for generated patches, None for imports.
    """

    def __init__(
        self,
        graph: Graph,
        root: int,
        rotation: dict[int, tuple[int, ...]],
        faces: Sequence[FaceBoundary],
        outer: tuple[int, ...],
        complete_radius: dict[int, int],
        schlafli: tuple[int, int] | None,
    ):
        self.graph = graph
        self.root = root
        self.rotation = rotation
        self.faces: tuple[FaceBoundary, ...] = tuple(faces)
        self.face_set: frozenset[FaceBoundary] = frozenset(faces)
        self.outer = outer
        self._outer_set = frozenset(outer)
        self.complete_radius = complete_radius
        self.schlafli = schlafli
        at: dict[int, list[FaceBoundary]] = {v: [] for v in graph.vertices}
        for f in self.faces:
            for v in f:
                at[v].append(f)
        self._faces_at = {v: tuple(sorted(fs)) for v, fs in at.items()}
        self._dist_from_root = graph.distances_from(root)

    # -- basic queries ------------------------------------------------------

    @property
    def l_max(self) -> int:
        """Maximum co-degree: the length bound for peripheral-cycle search."""
        if self.schlafli is not None:
            return self.schlafli[0]
        return max(len(f) for f in self.faces)

    def faces_at(self, v: int) -> tuple[FaceBoundary, ...]:
        return self._faces_at[v]

    def is_interior(self, v: int) -> bool:
        """Interior vertices carry all their faces; the rest lie on the
        outer boundary walk."""
        return v not in self._outer_set

    def root_distance(self, v: int) -> int:
        return self._dist_from_root[v]

    def require_complete(self, v: int, radius: int) -> None:
        if self.complete_radius[v] < radius:
            raise PatchTooSmallError(
                f"patch too small: vertex {v} has complete_radius "
                f"{self.complete_radius[v]} < {radius}; increase radius"
            )

    def ball(self, v: int, i: int) -> RootedBall:
        """B_i(v), guarded: raises PatchTooSmallError rather than truncate."""
        self.require_complete(v, i)
        return ball(self.graph, v, i)

    def corner_face(self, v: int, a: int, b: int) -> FaceBoundary:
        """The unique face at v containing both edges va and vb."""
        ea, eb = edge_key(v, a), edge_key(v, b)
        hits = [f for f in self._faces_at[v] if ea in f.edges and eb in f.edges]
        assert len(hits) == 1, f"corner ({a},{b}) at {v} has {len(hits)} faces"
        return hits[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlanePatch):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.root == other.root
            and self.rotation == other.rotation
            and self.face_set == other.face_set
            and self.outer == other.outer
            and self.complete_radius == other.complete_radius
        )

    def __repr__(self) -> str:
        s = f"{{{self.schlafli[0]},{self.schlafli[1]}}}" if self.schlafli else "imported"
        return f"PlanePatch({s}, n={self.graph.n}, faces={len(self.faces)})"

    # -- JSON ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        d = self.graph.to_json_dict(rotation=self.rotation)
        d["root"] = self.root
        d["faces"] = sorted([list(f.cycle) for f in self.faces])
        d["outer"] = list(self.outer)
        d["complete_radius"] = {str(v): r for v, r in sorted(self.complete_radius.items())}
        if self.schlafli is not None:
            d["schlafli"] = list(self.schlafli)
        return d


# ---------------------------------------------------------------------------
# Generation by face completion
# ---------------------------------------------------------------------------

class _PatchBuilder:
    """Mutable state for {p,q} growth.

    Per-vertex state is the rotation arc: the neighbours in rotation
    order, with the outer region sitting between arc[-1] and arc[0].
    Walking the outer boundary, the successor of v is arc_v[0] and the
    predecessor is arc_v[-1].  A boundary vertex with d edges always
    carries d-1 faces (its faces form a fan), so the number of faces a
    vertex still needs determines whether an attaching face shares one
    boundary edge or absorbs the vertex completely.
    """

    def __init__(self, p: int, q: int):
        self.p = p
        self.q = q
        self.arc: list[list[int]] = []
        self.nfaces: list[int] = []
        self.face_cycles: list[tuple[int, ...]] = []

    def new_vertex(self) -> int:
        self.arc.append([])
        self.nfaces.append(0)
        return len(self.arc) - 1

    def remaining(self, v: int) -> int:
        return self.q - self.nfaces[v]

    def add_face_at(self, v: int) -> None:
        """Close the next face in the outer corner at v (after arc_v[-1])."""
        p = self.p
        arc = self.arc
        assert self.remaining(v) >= 1
        if not arc[v]:
            path = [v]  # the root's first face
        else:
            back = [arc[v][-1]]
            while self.remaining(back[-1]) == 1:
                back.append(arc[back[-1]][-1])
                assert len(back) < p
            fwd: list[int] = []
            if self.remaining(v) == 1:
                fwd.append(arc[v][0])
                while self.remaining(fwd[-1]) == 1:
                    fwd.append(arc[fwd[-1]][0])
                    assert len(fwd) < p
            path = back[::-1] + [v] + fwd
        assert len(path) <= p and len(set(path)) == len(path)

        chain = [self.new_vertex() for _ in range(p - len(path))]
        left, right = path[0], path[-1]
        cycle = path + chain
        if chain:
            nodes = [right] + chain + [left]
            arc[right].append(chain[0])
            for i, m in enumerate(chain):
                arc[m] = [nodes[i], nodes[i + 2]]
            arc[left].insert(0, chain[-1])
        else:
            assert left != right and left not in arc[right], "tessellation closed on itself"
            arc[right].append(left)
            arc[left].insert(0, right)

        for x in cycle:
            self.nfaces[x] += 1
            assert self.nfaces[x] <= self.q
            if self.nfaces[x] == self.q:
                assert len(arc[x]) == self.q
            else:
                assert len(arc[x]) == self.nfaces[x] + 1
        self.face_cycles.append(tuple(cycle))

    def complete_vertex(self, v: int) -> None:
        while self.nfaces[v] < self.q:
            self.add_face_at(v)

    def bfs(self, o: int) -> dict[int, int]:
        dist = {o: 0}
        queue = deque([o])
        while queue:
            x = queue.popleft()
            for u in self.arc[x]:
                if u not in dist:
                    dist[u] = dist[x] + 1
                    queue.append(u)
        return dist


def generate(p: int, q: int, R: int) -> PlanePatch:
    """A patch of {p,q} containing the complete ball of radius R at the root.

    Every vertex at distance <= R from the root ends up interior (all q
    faces closed), which certifies complete_radius(root) >= R.
    """
    if p < 3 or q < 3:
        raise InputError("need p >= 3 and q >= 3")
    if R < 1:
        raise InputError("need radius >= 1")
    if (p - 2) * (q - 2) < 4:
        raise InputError(f"{{{p},{q}}} is a spherical/finite tessellation, not 1-ended")

    b = _PatchBuilder(p, q)
    o = b.new_vertex()
    dist = {o: 0}
    for layer in range(R + 1):
        for v in sorted(w for w, d in dist.items() if d == layer):
            b.complete_vertex(v)
        dist = b.bfs(o)

    nverts = len(b.arc)
    edges = [(v, u) for v in range(nverts) for u in b.arc[v] if v < u]
    graph = Graph(range(nverts), edges)
    rotation = {v: tuple(b.arc[v]) for v in range(nverts)}
    faces = [FaceBoundary(c) for c in b.face_cycles]
    assert len(set(faces)) == len(faces)

    outer = _identify_outer(graph, rotation, frozenset(faces))
    interior = {v for v in range(nverts) if b.nfaces[v] == q}
    assert interior == set(range(nverts)) - set(outer)

    crad = _complete_radius_from_boundary(graph, set(outer))
    assert crad[o] >= R
    patch = PlanePatch(graph, o, rotation, faces, outer, crad, (p, q))
    return patch


def _identify_outer(
    g: Graph, rotation: dict[int, tuple[int, ...]], faces: frozenset[FaceBoundary]
) -> tuple[int, ...]:
    """Trace the map and return the single walk that is not a recorded face."""
    max_len = max(len(f) for f in faces)
    leftovers = []
    for w in trace_faces(g, rotation):
        if len(w) > max_len or not (_is_simple_walk(w) and FaceBoundary(w) in faces):
            leftovers.append(w)
    assert len(leftovers) == 1, f"expected one outer walk, found {len(leftovers)}"
    return leftovers[0]


def _complete_radius_from_boundary(g: Graph, boundary: set[int]) -> dict[int, int]:
    """complete_radius(v) = dist(v, outer boundary) - 1, floored at 0."""
    dist = {v: 0 for v in boundary}
    queue = deque(sorted(boundary))
    while queue:
        x = queue.popleft()
        for u in g.neighbors(x):
            if u not in dist:
                dist[u] = dist[x] + 1
                queue.append(u)
    return {v: max(0, dist.get(v, 0) - 1) for v in g.vertices}


# ---------------------------------------------------------------------------
# Deterministic face enumeration
# ---------------------------------------------------------------------------

def face_enumeration(patch: PlanePatch, tie_break: int = 0) -> list[FaceBoundary]:
    """Total order on faces: ascending root distance, then vertex tuple.

    tie_break selects among equally valid deterministic tie-breaking rules
    (0: ascending tuple, 1: descending tuple, 2: reversed tuple); the final
    cover must not depend on the choice, which is tested, not assumed.
    """

    def key(f: FaceBoundary):
        d = min(patch.root_distance(v) for v in f)
        t = tuple(sorted(f.cycle))
        if tie_break == 0:
            return (d, t)
        if tie_break == 1:
            return (d, tuple(-v for v in t))
        if tie_break == 2:
            return (d, t[::-1])
        raise InputError(f"unknown tie_break {tie_break}")

    return sorted(patch.faces, key=key)


# ---------------------------------------------------------------------------
# Import / export
# ---------------------------------------------------------------------------

def import_patch(source: dict | str | Path) -> PlanePatch:
    """Load a patch from JSON (dict or file path).

    Needs vertices, edges, a rotation for every vertex, and a root.  Faces
    are traced from the rotation; the closed-up map must be spherical
    (V - E + F = 2) or the rotation is rejected as non-planar.  No
    vertex-transitivity verification is performed: imports are trusted.
    """
    if not isinstance(source, dict):
        with open(source, "r", encoding="utf-8") as fh:
            source = json.load(fh)
    d = source
    g = Graph.from_json_dict(d)
    if "rotation" not in d:
        raise InputError("patch JSON is missing the rotation system")
    try:
        rotation = {int(v): tuple(int(u) for u in rot) for v, rot in d["rotation"].items()}
        root = int(d["root"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed patch JSON: {exc}") from exc
    if root not in g:
        raise InputError(f"root {root} is not a vertex")
    if set(rotation) != set(g.vertices):
        raise InputError("rotation must cover every vertex")

    walks = trace_faces(g, rotation)
    euler = g.n - len(g.edges) + len(walks)
    if euler != 2:
        raise InputError(
            f"non-planar rotation: closed-up Euler count {euler} != 2 (genus > 0)"
        )
    outer = _pick_outer(walks, d.get("outer"))
    faces = []
    for w in walks:
        if w == outer:
            continue
        if not _is_simple_walk(w):
            raise InputError(f"interior walk {w} is not a simple cycle")
        faces.append(FaceBoundary(w))
    if "faces" in d:
        declared = {FaceBoundary(c) for c in d["faces"]}
        if declared != set(faces):
            raise InputError("declared faces disagree with the traced faces")

    crad = _complete_radius_from_boundary(g, set(outer))
    if "complete_radius" in d:
        declared_crad = {int(v): int(r) for v, r in d["complete_radius"].items()}
        if declared_crad != crad:
            raise InputError("declared complete_radius disagrees with recomputation")
    schlafli = tuple(d["schlafli"]) if "schlafli" in d else None
    return PlanePatch(g, root, rotation, faces, outer, crad, schlafli)


def _pick_outer(walks: list[tuple[int, ...]], declared) -> tuple[int, ...]:
    if declared is not None:
        target = _canonical_walk(tuple(int(v) for v in declared))
        for w in walks:
            if w == target:
                return w
        raise InputError("declared outer walk was not traced from the rotation")
    non_simple = [w for w in walks if not _is_simple_walk(w)]
    if len(non_simple) == 1:
        return non_simple[0]
    if len(non_simple) > 1:
        raise InputError("several non-simple walks; cannot identify the outer boundary")
    return max(walks, key=lambda w: (len(w), w))
