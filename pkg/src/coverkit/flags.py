"""Flags, fundamental domains, and the colour maps.

A flag is an incident (vertex, edge, face-boundary) triple.  The palette
is a fundamental domain at the patch root: a connected sequence of flags
holding one representative per orbit of the local symmetries of the root
neighbourhood at depth n.  The colour of any flag anywhere is the
palette index of its orbit, reached through a root-preserving local
isomorphism; colours of flags in a target graph H are pulled back the
same way (well-defined because any two such isomorphisms differ by a
symmetry that respects the orbit partition).

Local comparisons run on face cores (the subgraph spanned by the faces
within n chain steps, see local.face_core) rather than on raw induced
balls, for two reasons verified empirically: induced balls of hyperbolic
tessellations carry spurious rim automorphisms (swappable leaf pairs)
that make full enumeration infeasible, and induced balls of small
lattice quotients carry wrap chords that no ball of the infinite
tessellation has.  The face core is exactly the structure a covering
map preserves, and on honestly locally-G inputs it carries the same
information as the corresponding ball.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DefectError, HypothesisViolationError, InputError, PatchTooSmallError
from .graph import Graph, RootedBall, edge_key, induced_subgraph
from .local import (
    FaceCore,
    Isomorphism,
    as_rooted,
    face_core,
    host_faces_at,
    rooted_isomorphisms,
)
from .tessellation import FaceBoundary, PlanePatch


@dataclass(frozen=True, order=True)
class Flag:
    """An incident triple: vertex u, edge e with u in e, face F with e in F."""

    vertex: int
    edge: tuple[int, int]
    face: FaceBoundary

    def __post_init__(self) -> None:
        if self.vertex not in self.edge:
            raise InputError(f"flag vertex {self.vertex} not on its edge {self.edge}")
        if self.edge not in self.face.edges:
            raise InputError(f"flag edge {self.edge} not on its face {self.face}")

    @property
    def other_end(self) -> int:
        a, b = self.edge
        return b if self.vertex == a else a

    def incident(self, g: "Flag") -> bool:
        """Two flags at the same vertex are incident if they share the edge
        or the face."""
        return self.vertex == g.vertex and (self.edge == g.edge or self.face == g.face)

    def to_json_dict(self) -> dict:
        return {"v": self.vertex, "e": list(self.edge), "face": list(self.face.cycle)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Flag":
        try:
            return cls(int(d["v"]), edge_key(int(d["e"][0]), int(d["e"][1])), FaceBoundary(d["face"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed flag JSON: {exc}") from exc


def flags_at(host: PlanePatch | Graph, v: int, l_max: int | None = None) -> list[Flag]:
    """All flags at v, in canonical order.

    For a patch the faces are the traced ones (requires complete_radius
    >= 2 so the neighbourhood is trustworthy); for a plain graph they are
    inferred peripheral cycles, which needs l_max.
    """
    if isinstance(host, PlanePatch):
        host.require_complete(v, 2)
    faces = host_faces_at(host, v, l_max)
    out = []
    for f in faces:
        for e in f.edges_at(v):
            out.append(Flag(v, e, f))
    return sorted(out)


def _flag_cycle(patch: PlanePatch, v: int) -> list[Flag]:
    """The flags at v in rotation order; incidence makes them a single
    cycle of length 2 deg(v), alternating shared-face and shared-edge
    steps."""
    rot = patch.rotation[v]
    d = len(rot)
    corner = [patch.corner_face(v, rot[i], rot[(i + 1) % d]) for i in range(d)]
    cyc: list[Flag] = []
    for i in range(d):
        e_i = edge_key(v, rot[i])
        cyc.append(Flag(v, e_i, corner[i - 1]))
        cyc.append(Flag(v, e_i, corner[i]))
    assert len(set(cyc)) == 2 * d
    for i, f in enumerate(cyc):
        assert f.incident(cyc[(i + 1) % (2 * d)])
    return cyc


# ---------------------------------------------------------------------------
# Orbits of flags at the root
# ---------------------------------------------------------------------------

def _prescription(a: Flag, b: Flag) -> dict[int, int] | None:
    """Vertex images forced by mapping flag a to flag b: the face cycles
    correspond pointwise once the roots and edge directions match."""
    if len(a.face) != len(b.face):
        return None
    ca = a.face.cycle_from(a.vertex, a.other_end)
    cb = b.face.cycle_from(b.vertex, b.other_end)
    pres: dict[int, int] = {}
    for x, y in zip(ca, cb):
        if pres.get(x, y) != y:
            return None
        pres[x] = y
    return pres


def flag_orbit_partition(patch: PlanePatch, i: int) -> list[frozenset[Flag]]:
    """Partition of the root flags into orbits of the depth-i root symmetries.

    Two flags are in the same orbit iff some root-preserving automorphism
    of the depth-i face core maps one to the other carrying vertex, edge,
    and face pointwise; each candidate pair is decided by a single
    constrained existence search (never by enumerating the full group,
    which is polluted by rim symmetries on hyperbolic balls).
    """
    core = face_core(patch, patch.root, i).rooted
    flags = flags_at(patch, patch.root)
    parent = list(range(len(flags)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ia in range(len(flags)):
        for ib in range(ia + 1, len(flags)):
            if find(ia) == find(ib):
                continue
            pres = _prescription(flags[ia], flags[ib])
            if pres is None:
                continue
            if rooted_isomorphisms(core, core, limit=1, prescribed=pres):
                parent[find(ib)] = find(ia)
    groups: dict[int, list[Flag]] = {}
    for idx, f in enumerate(flags):
        groups.setdefault(find(idx), []).append(f)
    return sorted((frozenset(fs) for fs in groups.values()), key=lambda s: min(s))


@dataclass
class FundamentalDomain:
    """The palette: one flag per orbit, consecutive flags incident."""

    flags: tuple[Flag, ...]
    level: int
    root: int
    orbits: tuple[frozenset[Flag], ...]
    orbit_index: dict[Flag, int]

    def __len__(self) -> int:
        return len(self.flags)


def i_fundamental_domain(patch: PlanePatch, i: int) -> FundamentalDomain:
    """A connected sequence of root flags, one per depth-i orbit.

    The sequence follows the rotation at the root: representatives are
    the first occurrences of their orbits along the flag cycle, started
    and oriented so that the representatives come out contiguous (such a
    start exists because the orbit pattern around the cycle is the
    pattern of a cyclic or dihedral action).
    """
    orbits = flag_orbit_partition(patch, i)
    orbit_of: dict[Flag, int] = {}
    for k, orb in enumerate(orbits):
        for f in orb:
            orbit_of[f] = k
    cycle = _flag_cycle(patch, patch.root)
    m = len(cycle)
    starts = sorted(range(m), key=lambda s: cycle[s])
    for s in starts:
        for step in (1, -1):
            walk = [cycle[(s + step * t) % m] for t in range(m)]
            reps: list[Flag] = []
            seen: set[int] = set()
            for f in walk:
                if orbit_of[f] not in seen:
                    seen.add(orbit_of[f])
                    reps.append(f)
            if all(reps[t].incident(reps[t + 1]) for t in range(len(reps) - 1)):
                ordered = tuple(reps)
                rep_of_orbit = {orbit_of[r]: k for k, r in enumerate(ordered)}
                index = {f: rep_of_orbit[orbit_of[f]] for f in cycle}
                return FundamentalDomain(
                    flags=ordered,
                    level=i,
                    root=patch.root,
                    orbits=tuple(orbits),
                    orbit_index=index,
                )
    raise AssertionError("no connected traversal: impossible for a plane vertex")


def stabilize_n(patch: PlanePatch, i_max: int, guard: int) -> int:
    """The least n <= i_max whose orbit partition repeats for `guard`
    consecutive levels (n, n+1, ..., n+guard-1).

    The partition can only refine as the depth grows and its size is
    bounded by twice the root degree, so a stable window certifies
    stabilisation at desk scale.  Raises PatchTooSmallError when the
    patch cannot host the cores needed, or when no window stabilises
    within i_max.
    """
    if guard < 1:
        raise InputError("guard must be >= 1")
    if i_max < 1:
        raise InputError("i_max must be >= 1")
    partitions: list[frozenset[frozenset[Flag]]] = []

    def part(i: int) -> frozenset[frozenset[Flag]]:
        while len(partitions) < i:
            partitions.append(frozenset(flag_orbit_partition(patch, len(partitions) + 1)))
        return partitions[i - 1]

    for n in range(1, i_max + 1):
        if all(part(n + t) == part(n) for t in range(1, guard)):
            return n
    raise PatchTooSmallError(
        f"orbit partition did not stabilise for {guard} consecutive levels "
        f"within i_max={i_max}; increase radius or i_max"
    )


# ---------------------------------------------------------------------------
# Colours
# ---------------------------------------------------------------------------

def _map_flag(iso: Isomorphism, f: Flag) -> Flag:
    return Flag(iso[f.vertex], iso.map_edge(f.edge), iso.map_cycle(f.face))


def _root_core(patch: PlanePatch, n: int, cache: dict | None) -> FaceCore:
    if cache is not None and ("root_core", n) in cache:
        return cache[("root_core", n)]
    core = face_core(patch, patch.root, n)
    if cache is not None:
        cache[("root_core", n)] = core
    return core


def color(
    patch: PlanePatch,
    delta: FundamentalDomain,
    n: int,
    f: Flag,
    cache: dict | None = None,
) -> int:
    """The palette index of f's orbit: push f to the root through any
    root-preserving isomorphism of depth-n cores.  Independent of the
    choice of isomorphism (tested, not assumed)."""
    v = f.vertex
    if v == delta.root:
        try:
            return delta.orbit_index[f]
        except KeyError:
            raise DefectError(f"{f} is not a flag of the root") from None
    iso = None if cache is None else cache.get(("iso", v))
    if iso is None:
        ref = _root_core(patch, n, cache)
        found = rooted_isomorphisms(face_core(patch, v, n).rooted, ref.rooted, limit=1)
        if not found:
            raise DefectError(f"patch not vertex-transitive at {v}: no depth-{n} isomorphism")
        iso = found[0]
        if cache is not None:
            cache[("iso", v)] = iso
    g_flag = _map_flag(iso, f)
    if g_flag.face not in patch.face_set:
        raise DefectError(f"image of {f.face} at the root is not a face")
    return delta.orbit_index[g_flag]


def color_in_h(
    h: Graph | PlanePatch,
    patch: PlanePatch,
    delta: FundamentalDomain,
    n: int,
    flag_h: Flag,
    l_max: int | None = None,
    cache: dict | None = None,
) -> int:
    """The colour of a flag of the target graph: pull it back to the root
    through any isomorphism of depth-n cores (the compositions coincide
    for every choice, which is tested, not assumed)."""
    x = flag_h.vertex
    iso = None if cache is None else cache.get(("iso_h", x))
    if iso is None:
        if l_max is None:
            l_max = patch.l_max
        memo = None if cache is None else cache.setdefault("h_faces", {})
        target = face_core(h, x, n, l_max=l_max, memo=memo)
        ref = _root_core(patch, n, cache)
        found = rooted_isomorphisms(target.rooted, ref.rooted, limit=1)
        if not found:
            raise HypothesisViolationError(f"h is not {n}-locally-G at {x}")
        iso = found[0]
        if cache is not None:
            cache[("iso_h", x)] = iso
    g_flag = _map_flag(iso, flag_h)
    if g_flag.face not in patch.face_set:
        raise HypothesisViolationError(
            f"face {flag_h.face} at {x} does not pull back to a face at the root"
        )
    return delta.orbit_index[g_flag]


# ---------------------------------------------------------------------------
# The extension isomorphism (rigidity)
# ---------------------------------------------------------------------------

def extend_iso(
    g: PlanePatch,
    h: Graph | PlanePatch,
    f: Flag,
    flag_h: Flag,
    r: int,
    delta: FundamentalDomain,
    n: int,
    cache: dict | None = None,
    crosscheck: bool = False,
) -> Isomorphism:
    """The unique colour-compatible local isomorphism around f.

    Maps f to flag_h and propagates face by face across shared edges,
    covering the faces within r chain steps of f's vertex.  Each step is
    forced (an edge inside the region lies on exactly two faces), so the
    result is unique by construction; any failure to close consistently
    is reported as a hypothesis violation.  With crosscheck=True the
    uniqueness is additionally verified by enumerating the isomorphisms
    between the two cores that carry f to flag_h and demanding there is
    no second one.
    """
    if color(g, delta, n, f, cache=cache) != _color_of_target(h, g, delta, n, flag_h, cache):
        raise InputError("colour mismatch between seed flags")
    v, x = f.vertex, flag_h.vertex
    memo = None if cache is None else cache.setdefault("h_faces", {})
    faces_g = face_core(g, v, r).faces
    faces_h = face_core(h, x, r, l_max=g.l_max, memo=memo).faces

    vmap: dict[int, int] = {}

    def assign(a: int, b: int) -> None:
        if vmap.get(a, b) != b:
            raise HypothesisViolationError(
                f"extension conflict at {a}: {vmap[a]} vs {b}"
            )
        vmap[a] = b

    def align(face_g: FaceBoundary, face_h: FaceBoundary, a: int, b: int) -> None:
        if len(face_g) != len(face_h):
            raise HypothesisViolationError(
                f"face length mismatch {len(face_g)} vs {len(face_h)} at {a}"
            )
        for s, t in zip(face_g.cycle_from(a, b), face_h.cycle_from(vmap[a], vmap[b])):
            assign(s, t)

    assign(v, x)
    assign(f.other_end, flag_h.other_end)
    align(f.face, flag_h.face, v, f.other_end)
    mapped: dict[FaceBoundary, FaceBoundary] = {f.face: flag_h.face}
    queue = [f.face]
    while queue:
        fg = queue.pop(0)
        fh = mapped[fg]
        for e in sorted(fg.edges):
            others = [F for F in faces_g if e in F.edges and F != fg]
            if not others:
                continue
            assert len(others) == 1, f"edge {e} lies on more than two faces"
            face2 = others[0]
            ie = edge_key(vmap[e[0]], vmap[e[1]])
            h_others = [B for B in faces_h if ie in B.edges and B != fh]
            if face2 in mapped:
                if mapped[face2] != fh and mapped[face2] not in h_others:
                    raise HypothesisViolationError(
                        f"faces across edge {e} map inconsistently"
                    )
                continue
            if len(h_others) != 1:
                raise HypothesisViolationError(
                    f"h is not r-locally-G near {ie}: expected exactly one "
                    f"further face on the image edge, found {len(h_others)}"
                )
            b2 = h_others[0]
            align(face2, b2, e[0], e[1])
            mapped[face2] = b2
            queue.append(face2)

    _verify_partial_isomorphism(g.graph, _target_graph(h), vmap)
    iso = Isomorphism(vmap, v, x)
    if crosscheck:
        dom, img = core_subgraphs(g, h, iso)
        pres = {s: vmap[s] for s in f.face.cycle}
        found = rooted_isomorphisms(dom, img, limit=2, prescribed=pres)
        if len(found) != 1:
            raise HypothesisViolationError(
                f"{len(found)} extensions carry {f} to {flag_h}; expected exactly one"
            )
    return iso


def _color_of_target(h, g, delta, n, flag_h, cache):
    if h is g:
        return color(g, delta, n, flag_h, cache=cache)
    return color_in_h(h, g, delta, n, flag_h, cache=cache)


def _target_graph(h: Graph | PlanePatch) -> Graph:
    return h.graph if isinstance(h, PlanePatch) else h


def _verify_partial_isomorphism(ga: Graph, gb: Graph, vmap: dict[int, int]) -> None:
    if len(set(vmap.values())) != len(vmap):
        raise HypothesisViolationError("extension is not injective on its core")
    keys = sorted(vmap)
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            if ga.has_edge(a, b) != gb.has_edge(vmap[a], vmap[b]):
                raise HypothesisViolationError(
                    f"extension does not preserve adjacency on ({a},{b})"
                )


def core_subgraphs(
    g: PlanePatch, h: Graph | PlanePatch, iso: Isomorphism
) -> tuple[RootedBall, RootedBall]:
    """The two sides of an extension isomorphism as rooted graphs, for
    independent re-enumeration of the isomorphisms between them."""
    dom = induced_subgraph(g.graph, iso.mapping.keys())
    img = induced_subgraph(_target_graph(h), iso.mapping.values())
    return as_rooted(dom, iso.source_root), as_rooted(img, iso.target_root)
