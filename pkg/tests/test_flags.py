import math

import pytest

from coverkit import (
    Flag,
    InputError,
    PatchTooSmallError,
    color,
    color_in_h,
    extend_iso,
    face_core,
    flag_orbit_partition,
    flags_at,
    i_fundamental_domain,
    import_patch,
    rooted_isomorphisms,
    stabilize_n,
)
from coverkit.flags import _flag_cycle, _map_flag

from .oracles import adjacency_of, brute_rooted_isomorphisms


def build_squareoct_patch(window=6, drop_link=None):
    """A window of the truncated square tiling (vertex configuration
    4.8.8): every lattice cell carries a small square, squares joined by
    link edges, leaving octagonal faces.  Rotations come from the planar
    coordinates, so this is a genuine vertex-transitive plane graph with
    two face sizes.  `drop_link` removes one horizontal link edge, which
    merges its two octagons and breaks vertex-transitivity."""
    offs = ((0.35, 0.0), (0.0, 0.35), (-0.35, 0.0), (0.0, -0.35))
    ids = {}
    pos = {}
    for i in range(-window, window + 1):
        for j in range(-window, window + 1):
            for d in range(4):
                ids[(i, j, d)] = len(ids)
                pos[ids[(i, j, d)]] = (i + offs[d][0], j + offs[d][1])
    edges = set()
    for (i, j, d), v in ids.items():
        if d == 0:
            for dd in (1, 3):
                edges.add(tuple(sorted((v, ids[(i, j, dd)]))))
            if (i + 1, j, 2) in ids and (i, j) != drop_link:
                edges.add(tuple(sorted((v, ids[(i + 1, j, 2)]))))
        elif d == 2:
            for dd in (1, 3):
                edges.add(tuple(sorted((v, ids[(i, j, dd)]))))
        elif d == 1 and (i, j + 1, 3) in ids:
            edges.add(tuple(sorted((v, ids[(i, j + 1, 3)]))))
    adj = {v: [] for v in ids.values()}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    rotation = {}
    for v, nbrs in adj.items():
        x, y = pos[v]
        rotation[v] = sorted(nbrs, key=lambda u: math.atan2(pos[u][1] - y, pos[u][0] - x))
    patch = import_patch(
        {
            "n": len(ids),
            "edges": sorted(list(e) for e in edges),
            "rotation": {str(v): rot for v, rot in rotation.items()},
            "root": ids[(0, 0, 0)],
        }
    )
    return patch if drop_link is None else (patch, ids)


@pytest.fixture(scope="module")
def squareoct():
    return build_squareoct_patch(6)


class TestFlagsAt:
    def test_counts(self, patch44_r6, patch63_r10, torus57):
        assert len(flags_at(patch44_r6, patch44_r6.root)) == 8
        assert len(flags_at(patch63_r10, patch63_r10.root)) == 6
        assert len(flags_at(torus57.graph, 4, l_max=4)) == 8

    def test_incidence_structure_is_a_cycle(self, patch44_r6):
        cyc = _flag_cycle(patch44_r6, patch44_r6.root)
        assert len(cyc) == 2 * patch44_r6.graph.degree(patch44_r6.root)

    def test_patch_margin_guard(self, patch44_r6):
        with pytest.raises(PatchTooSmallError):
            flags_at(patch44_r6, patch44_r6.outer[0])

    def test_flag_validation(self, patch44_r6):
        face = patch44_r6.faces_at(patch44_r6.root)[0]
        other = patch44_r6.faces_at(patch44_r6.root)[1]
        e = face.edges_at(patch44_r6.root)[0]
        with pytest.raises(InputError):
            Flag(10**9, e, face)
        if e not in other.edges:
            with pytest.raises(InputError):
                Flag(patch44_r6.root, e, other)

    def test_flag_json_round_trip(self, patch44_r6):
        f = flags_at(patch44_r6, patch44_r6.root)[0]
        assert Flag.from_json_dict(f.to_json_dict()) == f


class TestFundamentalDomain:
    @pytest.mark.parametrize("fixture", ["patch44_r6", "patch63_r10"])
    def test_regular_tessellations_have_one_orbit(self, fixture, request):
        patch = request.getfixturevalue(fixture)
        delta = i_fundamental_domain(patch, 1)
        assert len(delta) == 1

    def test_45_level_two(self, patch45_r5):
        delta = i_fundamental_domain(patch45_r5, 2)
        assert len(delta) == 1

    def test_orbits_confirmed_by_brute_force(self, patch44_r6):
        # oracle: enumerate every automorphism of the depth-1 core the slow
        # way and act on the flags
        core = face_core(patch44_r6, patch44_r6.root, 1)
        adj = adjacency_of(core.rooted.graph)
        autos = brute_rooted_isomorphisms(adj, core.root, adj, core.root)
        flags = flags_at(patch44_r6, patch44_r6.root)
        orbit = {flags[0]}
        from coverkit import Isomorphism

        for m in autos:
            iso = Isomorphism(m, core.root, core.root)
            orbit.add(_map_flag(iso, flags[0]))
        assert orbit == set(flags)  # single orbit, so |Delta| = 1

    def test_connected_sequence(self, squareoct):
        delta = i_fundamental_domain(squareoct, 1)
        assert len(delta) >= 2  # two face lengths can never merge
        for a, b in zip(delta.flags, delta.flags[1:]):
            assert a.incident(b)

    def test_orbit_partition_refines_monotonically(self, patch44_r6, squareoct):
        for patch in (patch44_r6, squareoct):
            p1 = flag_orbit_partition(patch, 1)
            p2 = flag_orbit_partition(patch, 2)
            for orb in p2:
                assert any(orb <= big for big in p1)


class TestStabilize:
    def test_44(self, patch44_r6):
        assert stabilize_n(patch44_r6, 4, 2) == 1

    def test_63(self, patch63_r10):
        assert stabilize_n(patch63_r10, 4, 2) == 1

    def test_45(self, patch45_r5):
        assert stabilize_n(patch45_r5, 2, 2) == 1

    def test_squareoct_has_multiple_orbits(self, squareoct):
        n = stabilize_n(squareoct, 2, 2)
        orbits = flag_orbit_partition(squareoct, n)
        assert len(orbits) >= 2
        # face length is an orbit invariant
        for orb in orbits:
            assert len({len(f.face) for f in orb}) == 1

    def test_increase_radius_error(self):
        from coverkit import generate

        tiny = generate(4, 4, 2)
        with pytest.raises(PatchTooSmallError):
            stabilize_n(tiny, 3, 3)

    def test_bad_parameters(self, patch44_r6):
        with pytest.raises(InputError):
            stabilize_n(patch44_r6, 0, 2)
        with pytest.raises(InputError):
            stabilize_n(patch44_r6, 2, 0)


class TestColor:
    def test_palette_flags_color_to_own_index(self, patch44_r6):
        delta = i_fundamental_domain(patch44_r6, 1)
        for k, f in enumerate(delta.flags):
            assert color(patch44_r6, delta, 1, f) == k

    def test_single_color_everywhere(self, patch44_r10):
        delta = i_fundamental_domain(patch44_r10, 1)
        cache = {}
        for v in [v for v in patch44_r10.graph.vertices if patch44_r10.complete_radius[v] >= 2][:12]:
            for f in flags_at(patch44_r10, v):
                assert color(patch44_r10, delta, 1, f, cache=cache) == 0

    def test_surjective_and_orbit_constant(self, squareoct):
        n = stabilize_n(squareoct, 2, 2)
        delta = i_fundamental_domain(squareoct, n)
        cols = {}
        for f in flags_at(squareoct, squareoct.root):
            cols.setdefault(color(squareoct, delta, n, f), set()).add(f)
        assert set(cols) == set(range(len(delta)))
        assert sorted(map(frozenset, cols.values())) == sorted(map(frozenset, delta.orbits))

    def test_non_transitive_import_diagnosed(self):
        # dropping one link edge merges two octagons into a 14-gon; the
        # import still succeeds (trusted), but colouring a flag near the
        # damage reports the patch as not vertex-transitive there
        from coverkit import DefectError

        damaged, ids = build_squareoct_patch(6, drop_link=(2, 0))
        n = stabilize_n(damaged, 1, 1)  # the root area is intact
        delta = i_fundamental_domain(damaged, n)
        victim = ids[(2, 0, 1)]  # on the merged 14-gon
        assert any(len(f.face) == 14 for f in flags_at(damaged, victim))
        with pytest.raises(DefectError, match="not vertex-transitive"):
            for f in flags_at(damaged, victim):
                color(damaged, delta, n, f)

    def test_square_and_octagon_flags_differ(self, squareoct):
        n = stabilize_n(squareoct, 2, 2)
        delta = i_fundamental_domain(squareoct, n)
        cache = {}
        v = sorted(v for v in squareoct.graph.vertices if squareoct.complete_radius[v] >= 3)[5]
        by_len = {}
        for f in flags_at(squareoct, v):
            by_len.setdefault(len(f.face), set()).add(color(squareoct, delta, n, f, cache=cache))
        assert by_len[4].isdisjoint(by_len[8])


class TestColorInH:
    def test_agrees_with_color_on_g_itself(self, patch44_r10):
        delta = i_fundamental_domain(patch44_r10, 1)
        cache = {}
        v = 7
        for f in flags_at(patch44_r10, v):
            assert color_in_h(patch44_r10, patch44_r10, delta, 1, f, cache=cache) == color(
                patch44_r10, delta, 1, f, cache=cache
            )

    def test_torus_flags_all_color_zero(self, torus57, patch44_r10):
        delta = i_fundamental_domain(patch44_r10, 1)
        cache = {}
        for x in (0, 9, 17):
            for f in flags_at(torus57.graph, x, l_max=4):
                assert color_in_h(torus57.graph, patch44_r10, delta, 1, f, cache=cache) == 0

    def test_every_pullback_gives_same_colors(self, torus57, patch44_r10):
        # the well-definedness lemma, by brute force: every isomorphism of
        # depth-1 cores induces the same colouring of the flags at x
        delta = i_fundamental_domain(patch44_r10, 1)
        x = 11
        target = face_core(torus57.graph, x, 1, l_max=4)
        ref = face_core(patch44_r10, patch44_r10.root, 1)
        isos = rooted_isomorphisms(target.rooted, ref.rooted)
        assert len(isos) == 8
        flags = flags_at(torus57.graph, x, l_max=4)
        colorings = {
            tuple(delta.orbit_index[_map_flag(pi, f)] for f in flags) for pi in isos
        }
        assert len(colorings) == 1


class TestExtendIso:
    def test_identity(self, patch44_r10):
        delta = i_fundamental_domain(patch44_r10, 1)
        f = flags_at(patch44_r10, patch44_r10.root)[0]
        iso = extend_iso(patch44_r10, patch44_r10, f, f, 2, delta, 1, crosscheck=True)
        assert all(k == v for k, v in iso.mapping.items())

    def test_two_interior_vertices_unique_and_facial(self, patch44_r10):
        delta = i_fundamental_domain(patch44_r10, 1)
        cache = {}
        f = flags_at(patch44_r10, patch44_r10.root)[0]
        g2 = flags_at(patch44_r10, 12)[3]
        iso = extend_iso(patch44_r10, patch44_r10, f, g2, 2, delta, 1, cache=cache, crosscheck=True)
        assert iso[f.vertex] == g2.vertex
        assert iso.map_cycle(f.face) == g2.face
        for face in patch44_r10.faces_at(patch44_r10.root):
            if all(u in iso.mapping for u in face):
                assert iso.map_cycle(face) in patch44_r10.face_set

    def test_onto_torus_at_depth_one(self, patch44_r10, torus57):
        delta = i_fundamental_domain(patch44_r10, 1)
        f = flags_at(patch44_r10, patch44_r10.root)[0]
        fh = flags_at(torus57.graph, 5, l_max=4)[2]
        iso = extend_iso(patch44_r10, torus57.graph, f, fh, 1, delta, 1, crosscheck=True)
        assert iso[f.vertex] == 5
        assert len(iso.mapping) == 9

    def test_color_mismatch_rejected(self, squareoct):
        n = stabilize_n(squareoct, 2, 2)
        delta = i_fundamental_domain(squareoct, n)
        cache = {}
        root_flags = flags_at(squareoct, squareoct.root)
        sq = next(f for f in root_flags if len(f.face) == 4)
        oc = next(f for f in root_flags if len(f.face) == 8)
        with pytest.raises(InputError):
            extend_iso(squareoct, squareoct, sq, oc, n + 1, delta, n, cache=cache)

    def test_unique_extension_sample(self, patch45_r5):
        delta = i_fundamental_domain(patch45_r5, 1)
        cache = {}
        f = flags_at(patch45_r5, patch45_r5.root)[0]
        targets = [v for v in patch45_r5.graph.vertices if patch45_r5.complete_radius[v] >= 4]
        for v in targets[:4]:
            for fh in flags_at(patch45_r5, v)[:2]:
                extend_iso(patch45_r5, patch45_r5, f, fh, 2, delta, 1, cache=cache, crosscheck=True)
