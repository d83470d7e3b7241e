"""Face-by-face construction of the covering map.

Starting from a colour-matched pair of flags, the seed face is mapped,
and then one face at a time is attached along the frontier cycle: the
next face is the enumeration-least one meeting the frontier in a path,
its image is the unique target face containing the image of that path
(with the fresh-side condition breaking the tie when the path is a
single edge), and the extension around the face is forced.  Every step
re-verifies the inductive invariants: colour preservation on the new
flags, local injectivity with rotation preservation, and a face witness
for every mapped edge.  The run stops when no eligible face remains
(patch exhaustion), never by truncating silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import HypothesisViolationError, InputError
from .flags import Flag, FundamentalDomain, color, color_in_h, flags_at, i_fundamental_domain, stabilize_n
from .graph import Graph, edge_key
from .local import dk_ball, host_faces_at
from .tessellation import FaceBoundary, PlanePatch, face_enumeration

Edge = tuple[int, int]


@dataclass
class PartialCover:
    """The in-progress map with its frontier and verification ledger."""

    patch: PlanePatch
    h: Graph | PlanePatch
    delta: FundamentalDomain
    n: int
    vertex_map: dict[int, int]
    frontier: set[Edge]
    processed: set[FaceBoundary]
    face_image: dict[FaceBoundary, FaceBoundary]
    edge_image: dict[Edge, Edge]
    domain_edges_at: dict[int, set[Edge]]
    eligible: frozenset[FaceBoundary]
    step: int = 0
    seed: tuple[Flag, Flag] | None = None
    flag_colors: list[tuple[Flag, Flag, int]] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)
    cache: dict = field(default_factory=dict)

    @property
    def h_graph(self) -> Graph:
        return self.h.graph if isinstance(self.h, PlanePatch) else self.h

    def frontier_vertices(self) -> set[int]:
        return {v for e in self.frontier for v in e}


def _eligible_faces(patch: PlanePatch, n: int) -> frozenset[FaceBoundary]:
    """Faces all of whose vertices can host depth-n colour computations:
    complete_radius at least the D_n ball radius guarantees every chain
    vertex of the depth-n core is interior."""
    j_n = dk_ball(patch.graph, patch.root, n, patch.l_max, patch.complete_radius).radius
    need = max(j_n, 2)
    return frozenset(
        f for f in patch.faces if all(patch.complete_radius[v] >= need for v in f)
    )


def _check_new_flag_colors(state: PartialCover, face: FaceBoundary, image: FaceBoundary) -> None:
    """Colour preservation (invariant 1) on the flags of the new face."""
    for y in sorted(face.cycle):
        for e in face.edges_at(y):
            fl = Flag(y, e, face)
            img = Flag(state.vertex_map[y], edge_key(*(state.vertex_map[t] for t in e)), image)
            cg = color(state.patch, state.delta, state.n, fl, cache=state.cache)
            ch = color_in_h(state.h, state.patch, state.delta, state.n, img, cache=state.cache)
            if cg != ch:
                raise HypothesisViolationError(
                    f"step {state.step}: colour of {fl} is {cg} but its image has {ch}; "
                    f"h violates r-locality"
                )
            state.flag_colors.append((fl, img, cg))


def _check_local_injectivity(state: PartialCover, face: FaceBoundary) -> None:
    """Invariant 2 at the new face's vertices: the mapped edges stay
    injective and the new co-facial pair lands in one target face."""
    h = state.h_graph
    for y in sorted(face.cycle):
        images = [state.edge_image[e] for e in sorted(state.domain_edges_at[y])]
        if len(set(images)) != len(images):
            raise HypothesisViolationError(
                f"step {state.step}: images of the edges at {y} collide"
            )
        for img in images:
            if not h.has_edge(*img):
                raise HypothesisViolationError(
                    f"step {state.step}: image edge {img} is not an edge of h"
                )
        e1, e2 = face.edges_at(y)
        b = state.face_image[face]
        assert state.edge_image[e1] in b.edges and state.edge_image[e2] in b.edges


def init_cover(
    patch: PlanePatch,
    h: Graph | PlanePatch,
    f: Flag,
    flag_h: Flag,
    delta: FundamentalDomain,
    n: int,
) -> PartialCover:
    """Map the seed face onto the target face in the orientation fixed by
    the flag pair, and verify colour preservation on all its flags."""
    state = PartialCover(
        patch=patch,
        h=h,
        delta=delta,
        n=n,
        vertex_map={},
        frontier=set(),
        processed=set(),
        face_image={},
        edge_image={},
        domain_edges_at={},
        eligible=_eligible_faces(patch, n),
        seed=(f, flag_h),
    )
    cg = color(patch, delta, n, f, cache=state.cache)
    ch = color_in_h(h, patch, delta, n, flag_h, cache=state.cache)
    if cg != ch:
        raise InputError(f"seed flags have different colours ({cg} vs {ch})")
    face, image = f.face, flag_h.face
    if len(face) != len(image):
        raise InputError("seed faces have different lengths")
    if face not in state.eligible:
        raise InputError("seed face is too close to the patch margin")
    seq_g = face.cycle_from(f.vertex, f.other_end)
    seq_h = image.cycle_from(flag_h.vertex, flag_h.other_end)
    for a, b in zip(seq_g, seq_h):
        state.vertex_map[a] = b
    _absorb_face(state, face, image)
    state.frontier = set(face.edges)
    _check_new_flag_colors(state, face, image)
    _check_local_injectivity(state, face)
    return state


def _absorb_face(state: PartialCover, face: FaceBoundary, image: FaceBoundary) -> None:
    state.processed.add(face)
    state.face_image[face] = image
    for e in face.edges:
        state.edge_image[e] = edge_key(state.vertex_map[e[0]], state.vertex_map[e[1]])
        for y in e:
            state.domain_edges_at.setdefault(y, set()).add(e)


def _intersection_path(
    face: FaceBoundary, frontier: set[Edge], frontier_vertices: set[int]
) -> list[int] | None:
    """The intersection of the face with the frontier cycle, as an ordered
    vertex path, or None when it is not a nonempty path (isolated common
    vertices disqualify it)."""
    common_edges = face.edges & frontier
    if not common_edges:
        return None
    common_vertices = set(face.cycle) & frontier_vertices
    adj: dict[int, list[int]] = {v: [] for v in common_vertices}
    for a, b in common_edges:
        if a not in adj or b not in adj:
            return None
        adj[a].append(b)
        adj[b].append(a)
    ends = [v for v, nb in adj.items() if len(nb) == 1]
    if len(ends) != 2 or any(len(nb) > 2 for nb in adj.values()):
        return None
    path = [min(ends)]
    prev = None
    while True:
        nxt = [u for u in adj[path[-1]] if u != prev]
        if not nxt:
            break
        prev = path[-1]
        path.append(nxt[0])
    if len(path) != len(common_vertices) or len(path) != len(common_edges) + 1:
        return None
    return path


def select_next_face(
    state: PartialCover, enumeration: list[FaceBoundary]
) -> FaceBoundary | None:
    """The enumeration-least unprocessed face sharing a path with the
    frontier, restricted to faces with complete surroundings.  None means
    patch exhaustion (normal termination for patch-bounded runs)."""
    fv = state.frontier_vertices()
    for face in enumeration:
        if face in state.processed or face not in state.eligible:
            continue
        if _intersection_path(face, state.frontier, fv) is not None:
            return face
    return None


def match_face(
    state: PartialCover, face: FaceBoundary, h: Graph | PlanePatch | None = None,
    l_max: int | None = None,
) -> FaceBoundary:
    """The unique target face that contains the image of the shared path,
    offers a fresh edge at the path's endpoint, and has the right length."""
    h = state.h if h is None else h
    l_max = state.patch.l_max if l_max is None else l_max
    path = _intersection_path(face, state.frontier, state.frontier_vertices())
    if path is None:
        raise InputError("face does not meet the frontier in a path")
    w = path[0]
    cw = state.vertex_map[w]
    img_path_edges = {
        edge_key(state.vertex_map[a], state.vertex_map[b]) for a, b in zip(path, path[1:])
    }
    used_at_w = {state.edge_image[e] for e in state.domain_edges_at[w]}
    memo = state.cache.setdefault("h_faces", {})
    candidates = []
    for b in host_faces_at(h, cw, l_max, memo):
        if not img_path_edges <= b.edges:
            continue  # (I)
        if len(b) != len(face):
            continue  # (III)
        if not any(be not in used_at_w for be in b.edges_at(cw)):
            continue  # (II): needs an edge at c(w) not already an image
        candidates.append(b)
    if len(candidates) != 1:
        raise HypothesisViolationError(
            f"step {state.step + 1}: {len(candidates)} candidate faces at target "
            f"vertex {cw}; h is not r-locally-G here"
        )
    return candidates[0]


def extend_cover(state: PartialCover, face: FaceBoundary, image: FaceBoundary) -> PartialCover:
    """Map the face onto its image in the forced orientation, advance the
    frontier, and re-verify the inductive invariants on the new flags."""
    path = _intersection_path(face, state.frontier, state.frontier_vertices())
    if path is None:
        raise InputError("face does not meet the frontier in a path")
    seq_g = face.cycle_from(path[0], path[1])
    seq_h = image.cycle_from(state.vertex_map[path[0]], state.vertex_map[path[1]])
    for i, (a, b) in enumerate(zip(seq_g, seq_h)):
        if i < len(path):
            if seq_g[i] != path[i] or state.vertex_map[a] != b:
                raise HypothesisViolationError(
                    f"step {state.step + 1}: image face does not align with the shared path"
                )
        elif a in state.vertex_map:
            if state.vertex_map[a] != b:
                raise HypothesisViolationError(
                    f"step {state.step + 1}: vertex {a} already mapped to "
                    f"{state.vertex_map[a]}, face image forces {b}"
                )
        else:
            state.vertex_map[a] = b
    _absorb_face(state, face, image)
    state.frontier ^= face.edges
    _assert_frontier_cycle(state)
    state.step += 1
    state.log.append({"step": state.step, "face": list(face.cycle), "image": list(image.cycle)})
    _check_new_flag_colors(state, face, image)
    _check_local_injectivity(state, face)
    return state


def _assert_frontier_cycle(state: PartialCover) -> None:
    deg: dict[int, int] = {}
    for a, b in state.frontier:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if not state.frontier or any(d != 2 for d in deg.values()):
        raise HypothesisViolationError(
            f"step {state.step}: frontier is not a simple cycle"
        )
    start = next(iter(deg))
    adj: dict[int, list[int]] = {}
    for a, b in state.frontier:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(deg):
        raise HypothesisViolationError(
            f"step {state.step}: frontier split into several cycles"
        )


@dataclass
class CoverMap:
    """The finished map on the processed region, with its provenance."""

    patch: PlanePatch
    h: Graph | PlanePatch
    vertex_map: dict[int, int]
    seed: tuple[Flag, Flag]
    delta: FundamentalDomain
    n: int
    processed: frozenset[FaceBoundary]
    face_image: dict[FaceBoundary, FaceBoundary]
    eligible: frozenset[FaceBoundary]
    steps: int
    surjective: bool
    log: list[dict]

    @property
    def h_graph(self) -> Graph:
        return self.h.graph if isinstance(self.h, PlanePatch) else self.h

    def region_interior(self) -> list[int]:
        """Vertices all of whose faces are processed (their whole flag
        neighbourhood is mapped)."""
        out = []
        for v in sorted(self.vertex_map):
            if self.patch.is_interior(v) and all(
                f in self.processed for f in self.patch.faces_at(v)
            ):
                out.append(v)
        return out

    def to_json_dict(self) -> dict:
        return {
            "map": [[v, self.vertex_map[v]] for v in sorted(self.vertex_map)],
            "seed": {"f": self.seed[0].to_json_dict(), "h": self.seed[1].to_json_dict()},
            "steps": self.steps,
            "surjective": self.surjective,
            "n": self.n,
        }


def default_seed(
    patch: PlanePatch,
    h: Graph | PlanePatch,
    delta: FundamentalDomain,
    n: int,
    cache: dict | None = None,
) -> tuple[Flag, Flag]:
    """The least flag of the root, paired with the least colour-matched
    flag of the least target vertex."""
    cache = {} if cache is None else cache
    f = flags_at(patch, patch.root)[0]
    want = color(patch, delta, n, f, cache=cache)
    hg = h.graph if isinstance(h, PlanePatch) else h
    x0 = hg.vertices[0]
    for fh in flags_at(h, x0, l_max=patch.l_max):
        if color_in_h(h, patch, delta, n, fh, cache=cache) == want:
            return f, fh
    raise HypothesisViolationError(f"no flag at target vertex {x0} matches colour {want}")


def build_cover(
    patch: PlanePatch,
    h: Graph | PlanePatch,
    f: Flag | None = None,
    flag_h: Flag | None = None,
    delta: FundamentalDomain | None = None,
    n: int | None = None,
    i_max: int = 4,
    guard: int = 2,
    tie_break: int = 0,
    enumeration: list[FaceBoundary] | None = None,
) -> CoverMap:
    """Drive init/select/match/extend until the patch is exhausted.

    Returns the accumulated map together with the step log; surjectivity
    onto the target is reported, not required.  Any invariant failure
    raises HypothesisViolationError carrying the step index.
    """
    if n is None:
        n = stabilize_n(patch, i_max, guard)
    if delta is None:
        delta = i_fundamental_domain(patch, n)
    cache: dict = {}
    if f is None or flag_h is None:
        df, dfh = default_seed(patch, h, delta, n, cache=cache)
        f = df if f is None else f
        flag_h = dfh if flag_h is None else flag_h
    state = init_cover(patch, h, f, flag_h, delta, n)
    state.cache.update(cache)
    if enumeration is None:
        enumeration = face_enumeration(patch, tie_break)
    while True:
        face = select_next_face(state, enumeration)
        if face is None:
            break
        image = match_face(state, face)
        extend_cover(state, face, image)
    _assert_no_holes(state)
    hg = state.h_graph
    surjective = set(state.vertex_map.values()) == set(hg.vertices)
    return CoverMap(
        patch=patch,
        h=h,
        vertex_map=dict(state.vertex_map),
        seed=(f, flag_h),
        delta=delta,
        n=n,
        processed=frozenset(state.processed),
        face_image=dict(state.face_image),
        eligible=state.eligible,
        steps=state.step,
        surjective=surjective,
        log=state.log,
    )


def _assert_no_holes(state: PartialCover) -> None:
    """Every eligible face surrounded by processed faces must itself have
    been processed (each face is eventually chosen)."""
    processed_edges = set(state.edge_image)
    for face in state.eligible:
        if face in state.processed:
            continue
        if face.edges <= processed_edges:
            raise AssertionError(f"face {face} was skipped but fully surrounded")
