"""Local structure of graphs that look like a plane tessellation.

Faces of a (possibly non-planar) graph H are recovered without any
embedding: a face-boundary at v is a peripheral cycle (induced and
non-separating) of the D_2 ball at v.  D_k balls are the smallest
ordinary balls containing everything reachable by chains of k pairwise
intersecting peripheral cycles.  On top of that sit a rooted-isomorphism
backtracking search and the r-locally-G certification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import HypothesisViolationError, InputError, PatchTooSmallError
from .graph import Graph, RootedBall, ball, edge_key, is_connected_excluding
from .tessellation import FaceBoundary, PlanePatch

# A peripheral cycle is represented by the same canonical cycle type that
# patches use for their faces, so cycles found in H compare directly with
# traced faces of G.
PeripheralCycle = FaceBoundary


def peripheral_cycles_through(g: Graph, v: int, l_max: int) -> list[PeripheralCycle]:
    """All induced non-separating cycles through v with at most l_max vertices.

    Enumeration is a DFS over chordless paths in ascending id order; each
    cycle is reported once, in canonical rotation.  A cycle whose removal
    leaves no vertices counts as non-separating.
    """
    if v not in g:
        raise InputError(f"unknown vertex {v}")
    if l_max < 3:
        return []
    found: list[PeripheralCycle] = []
    path = [v]
    on_path = {v}

    def extend() -> None:
        tail = path[-1]
        for u in g.neighbors(tail):
            if u in on_path:
                continue
            nbrs = g.neighbors(u)
            if any(w in path[1:-1] for w in nbrs):
                continue  # chord to the path interior
            if len(path) >= 2 and g.has_edge(u, v):
                # adjacency back to v forces closure here
                if path[1] < u:
                    cyc = path + [u]
                    if is_connected_excluding(g, cyc):
                        found.append(FaceBoundary(cyc))
                continue
            if len(path) + 1 <= l_max - 1:
                path.append(u)
                on_path.add(u)
                extend()
                path.pop()
                on_path.remove(u)

    extend()
    return sorted(found)


def dk_ball(
    g: Graph,
    o: int,
    k: int,
    l_max: int,
    complete_radius: dict[int, int] | None = None,
) -> RootedBall:
    """D_k(o): B_j(o) for the smallest j containing every vertex reachable
    by a chain of <= k pairwise-intersecting peripheral cycles from o.

    When `complete_radius` is given (patch-hosted computation), the chain
    search refuses to enumerate cycles at vertices whose surroundings are
    not certified, and the final ball must fit inside the certified region;
    it never silently truncates.
    """
    if o not in g:
        raise InputError(f"unknown vertex {o}")
    if k < 1:
        raise InputError("need k >= 1")
    seen_cycles: set[PeripheralCycle] = set()
    reach: set[int] = {o}
    frontier: set[int] = {o}
    for _ in range(k):
        new_vertices: set[int] = set()
        for x in sorted(frontier):
            if complete_radius is not None and complete_radius[x] < 2:
                raise PatchTooSmallError(
                    f"patch too small: D-ball chain reached vertex {x} with "
                    f"complete_radius {complete_radius[x]} < 2"
                )
            for c in peripheral_cycles_through(g, x, l_max):
                if c not in seen_cycles:
                    seen_cycles.add(c)
                    new_vertices.update(c.cycle)
        frontier = new_vertices - reach
        reach |= new_vertices
    dist = g.distances_from(o)
    j = max(dist[x] for x in reach)
    if complete_radius is not None and complete_radius[o] < j:
        raise PatchTooSmallError(
            f"patch too small: D_{k}({o}) needs B_{j} but complete_radius is "
            f"{complete_radius[o]}"
        )
    return ball(g, o, j)


def patch_dk_ball(patch: PlanePatch, v: int, k: int) -> RootedBall:
    """D_k(v) inside a patch, guarded by the patch's completeness data."""
    return dk_ball(patch.graph, v, k, patch.l_max, complete_radius=patch.complete_radius)


def face_boundaries_at(
    h: Graph, v: int, l_max: int, cross_check: bool = False
) -> list[FaceBoundary]:
    """The face-boundaries of H at v: peripheral cycles of D_2(v;H) through v.

    With cross_check=True every returned cycle is additionally re-tested
    for peripherality in all of H.
    """
    d2 = dk_ball(h, v, 2, l_max)
    cycles = peripheral_cycles_through(d2.graph, v, l_max)
    if cross_check:
        for c in cycles:
            if not _peripheral_in(h, c):
                raise HypothesisViolationError(
                    f"cycle {c} at {v} is peripheral in D_2 but not in the full graph"
                )
    return cycles


def _peripheral_in(g: Graph, c: FaceBoundary) -> bool:
    k = len(c)
    cyc = c.cycle
    for i in range(k):
        for j in range(i + 1, k):
            if (j - i) % k in (1, k - 1):
                continue
            if g.has_edge(cyc[i], cyc[j]):
                return False
    return is_connected_excluding(g, cyc)


# ---------------------------------------------------------------------------
# Face cores
# ---------------------------------------------------------------------------

@dataclass
class FaceCore:
    """The subgraph spanned by the faces within n chain steps of a vertex.

    Vertices are the vertices of those faces, edges are the union of
    their edge sets.  This is the part of the graph the flag machinery
    actually sees: unlike the induced ball B_j it contains no wrap
    chords, so it matches across a covering map even when the target is
    a small quotient.
    """

    rooted: RootedBall
    faces: frozenset[FaceBoundary]
    levels: tuple[frozenset[FaceBoundary], ...]

    @property
    def root(self) -> int:
        return self.rooted.root


def host_faces_at(
    host, v: int, l_max: int | None = None, memo: dict | None = None
) -> tuple[FaceBoundary, ...]:
    """Face-boundaries at v: traced faces for a patch (v must be interior),
    inferred peripheral cycles for a plain graph."""
    if isinstance(host, PlanePatch):
        if not host.is_interior(v):
            raise PatchTooSmallError(
                f"patch too small: faces at boundary vertex {v} are not all known"
            )
        return host.faces_at(v)
    if memo is not None and v in memo:
        return memo[v]
    if l_max is None:
        raise InputError("face enumeration on a Graph needs l_max")
    faces = tuple(face_boundaries_at(host, v, l_max))
    if memo is not None:
        memo[v] = faces
    return faces


def face_core(
    host, x: int, n: int, l_max: int | None = None, memo: dict | None = None
) -> FaceCore:
    """Faces within n vertex-sharing chain steps of x, as a rooted subgraph.

    Level 1 holds the faces containing x; level i+1 holds the faces
    meeting any vertex of level i.  On patches every vertex whose faces
    are consulted must be interior (raises PatchTooSmallError otherwise);
    the enumeration never silently truncates.
    """
    if n < 1:
        raise InputError("need n >= 1")
    levels: list[frozenset[FaceBoundary]] = []
    all_faces: set[FaceBoundary] = set()
    expanded: set[int] = set()
    frontier = {x}
    for _ in range(n):
        new_faces: set[FaceBoundary] = set()
        for w in sorted(frontier):
            expanded.add(w)
            for fb in host_faces_at(host, w, l_max, memo):
                if fb not in all_faces:
                    new_faces.add(fb)
        all_faces |= new_faces
        levels.append(frozenset(new_faces))
        frontier = {w for fb in all_faces for w in fb} - expanded
    verts = {x} | {w for fb in all_faces for w in fb}
    edges = [e for fb in all_faces for e in fb.edges]
    core_graph = Graph(verts, edges)
    return FaceCore(as_rooted(core_graph, x), frozenset(all_faces), tuple(levels))


# ---------------------------------------------------------------------------
# Rooted isomorphism search
# ---------------------------------------------------------------------------

@dataclass
class Isomorphism:
    """A root-preserving graph isomorphism, stored as a vertex map."""

    mapping: dict[int, int]
    source_root: int
    target_root: int

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def __contains__(self, v: int) -> bool:
        return v in self.mapping

    def map_edge(self, e: tuple[int, int]) -> tuple[int, int]:
        return edge_key(self.mapping[e[0]], self.mapping[e[1]])

    def map_cycle(self, c: FaceBoundary) -> FaceBoundary:
        return FaceBoundary([self.mapping[v] for v in c.cycle])

    def inverse(self) -> "Isomorphism":
        return Isomorphism(
            {w: v for v, w in self.mapping.items()}, self.target_root, self.source_root
        )

    def compose(self, first: "Isomorphism") -> "Isomorphism":
        """self after first: (self . first)(v) = self[first[v]]."""
        return Isomorphism(
            {v: self.mapping[w] for v, w in first.mapping.items()},
            first.source_root,
            self.target_root,
        )

    def key(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.mapping.items()))

    def is_orientation_reversing(
        self,
        src_rotation: dict[int, tuple[int, ...]],
        dst_rotation: dict[int, tuple[int, ...]],
        at: int,
    ) -> bool:
        """Whether the image of the cyclic order at `at` is the reverse of
        the target rotation (rather than a rotation of it)."""
        img = tuple(self.mapping[u] for u in src_rotation[at])
        dst = dst_rotation[self.mapping[at]]
        if _cyclic_equal(img, dst):
            return False
        if _cyclic_equal(img, dst[::-1]):
            return True
        raise InputError(f"image of rotation at {at} is not a rotation either way")


def _cyclic_equal(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    if len(a) != len(b):
        return False
    k = len(a)
    return any(all(a[(s + i) % k] == b[i] for i in range(k)) for s in range(k))


def _joint_refinement(a: RootedBall, b: RootedBall) -> tuple[dict[int, int], dict[int, int]]:
    """Distance-seeded colour refinement run jointly on both balls.

    Colours are shared across the two graphs, so equal colour means
    locally indistinguishable; real isomorphisms preserve them.
    """
    ga, gb = a.graph, b.graph
    col_a = {v: (a.dist[v], ga.degree(v)) for v in ga.vertices}
    col_b = {v: (b.dist[v], gb.degree(v)) for v in gb.vertices}
    while True:
        table: dict[tuple, int] = {}

        def recolor(g: Graph, col: dict[int, int]) -> dict[int, int]:
            out = {}
            for v in g.vertices:
                sig = (col[v], tuple(sorted(col[u] for u in g.neighbors(v))))
                if sig not in table:
                    table[sig] = len(table)
                out[v] = table[sig]
            return out

        na, nb = recolor(ga, col_a), recolor(gb, col_b)
        if len(set(na.values())) == len(set(col_a.values())) and len(
            set(nb.values())
        ) == len(set(col_b.values())):
            return na, nb
        col_a, col_b = na, nb


def as_rooted(g: Graph, root: int) -> RootedBall:
    """View any connected rooted graph through the RootedBall interface so
    the isomorphism search can use its distance refinement."""
    dist = g.distances_from(root)
    if len(dist) != g.n:
        raise InputError("rooted view requires a connected graph")
    return RootedBall(graph=g, root=root, radius=max(dist.values(), default=0), dist=dist)


def rooted_isomorphisms(
    a: RootedBall,
    b: RootedBall,
    limit: int | None = None,
    prescribed: dict[int, int] | None = None,
) -> list[Isomorphism]:
    """All root-preserving isomorphisms a -> b, deterministically ordered.

    Backtracking over vertices in (distance, id) order, with candidates
    restricted by joint colour refinement.  `prescribed` pins chosen
    vertex images in advance (used for orbit searches under partial
    constraints).  Returns at most `limit` maps; an empty list means no
    isomorphism satisfies the constraints.
    """
    ga, gb = a.graph, b.graph
    if a.radius != b.radius or ga.n != gb.n or len(ga.edges) != len(gb.edges):
        return []
    col_a, col_b = _joint_refinement(a, b)
    from collections import Counter

    if Counter(col_a.values()) != Counter(col_b.values()):
        return []
    if col_a[a.root] != col_b[b.root]:
        return []
    pres = dict(prescribed) if prescribed else {}
    pres[a.root] = b.root
    for v, w in pres.items():
        if v not in ga or w not in gb or col_a[v] != col_b[w]:
            return []
    if len(set(pres.values())) != len(pres):
        return []
    by_color: dict[int, list[int]] = {}
    for w in gb.vertices:
        by_color.setdefault(col_b[w], []).append(w)
    order = sorted(pres) + sorted(
        (v for v in ga.vertices if v not in pres), key=lambda v: (a.dist[v], v)
    )
    results: list[Isomorphism] = []
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def backtrack(i: int) -> bool:
        if i == len(order):
            results.append(Isomorphism(dict(mapping), a.root, b.root))
            return limit is not None and len(results) >= limit
        v = order[i]
        mapped_nbrs = [mapping[u] for u in ga.neighbors(v) if u in mapping]
        n_mapped = sum(1 for u in ga.neighbors(v) if u in mapping)
        candidates = [pres[v]] if v in pres else by_color.get(col_a[v], ())
        for w in candidates:
            if w in used:
                continue
            wn = gb.neighbors(w)
            if sum(1 for x in wn if x in used) != n_mapped:
                continue
            if any(x not in wn for x in mapped_nbrs):
                continue
            mapping[v] = w
            used.add(w)
            if backtrack(i + 1):
                return True
            del mapping[v]
            used.remove(w)
        return False

    backtrack(0)
    return results


# ---------------------------------------------------------------------------
# r-locally-G certification
# ---------------------------------------------------------------------------

@dataclass
class LocalCheckReport:
    ok: bool
    failures: list[int] = field(default_factory=list)
    mode: str = "ball"

    def to_json_dict(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures), "mode": self.mode}


def is_r_locally(
    h: Graph, g_patch: PlanePatch, r: int, d_balls: bool = False
) -> LocalCheckReport:
    """Check that every ball of radius r in h is isomorphic to the ball of
    radius r at the patch root.

    With d_balls=True the comparison uses depth-r face cores instead: the
    variant the flag machinery and the cover builder rely on, and the one
    that stays meaningful on quotients small enough for induced balls to
    pick up wrap chords.
    """
    failures = []
    memo: dict = {}
    if d_balls:
        reference = face_core(g_patch, g_patch.root, r).rooted
        for v in h.vertices:
            target = face_core(h, v, r, l_max=g_patch.l_max, memo=memo).rooted
            if not rooted_isomorphisms(target, reference, limit=1):
                failures.append(v)
    else:
        reference = g_patch.ball(g_patch.root, r)
        for v in h.vertices:
            if not rooted_isomorphisms(ball(h, v, r), reference, limit=1):
                failures.append(v)
    return LocalCheckReport(ok=not failures, failures=failures, mode="core" if d_balls else "ball")
