import pytest

from coverkit import (
    Graph,
    PatchTooSmallError,
    ball,
    dk_ball,
    face_boundaries_at,
    face_core,
    is_r_locally,
    patch_dk_ball,
    peripheral_cycles_through,
    rooted_isomorphisms,
)
from .oracles import (
    adjacency_of,
    brute_rooted_isomorphisms,
    peripheral_cycles_oracle,
    z2_faces_at,
)


def as_edge_sets(face_boundaries):
    return {frozenset(frozenset(e) for e in f.edges) for f in face_boundaries}


class TestPeripheralCycles:
    def test_k4_matches_oracle(self):
        g = Graph(range(4), [(a, b) for a in range(4) for b in range(a + 1, 4)])
        got = peripheral_cycles_through(g, 0, 3)
        want = peripheral_cycles_oracle(adjacency_of(g), 0, 3)
        assert len(got) == 3
        assert as_edge_sets(got) == want

    def test_c6_returned_despite_empty_remainder(self):
        g = Graph(range(6), [(i, (i + 1) % 6) for i in range(6)])
        got = peripheral_cycles_through(g, 0, 6)
        assert len(got) == 1 and len(got[0]) == 6

    def test_torus_d2_ball_has_four_grid_faces(self, torus57):
        d2 = dk_ball(torus57.graph, 0, 2, 4)
        got = peripheral_cycles_through(d2.graph, 0, 4)
        want = peripheral_cycles_oracle(adjacency_of(d2.graph), 0, 4)
        assert len(got) == 4
        assert as_edge_sets(got) == want

    def test_returned_cycles_satisfy_both_predicates(self, patch44_r6):
        g = patch44_r6.graph
        for v in (0, 3, 11):
            for c in peripheral_cycles_through(g, v, 4):
                assert as_edge_sets([c]) <= peripheral_cycles_oracle(adjacency_of(g), v, 4)

    def test_length_bound_respected(self, patch63_r10):
        g = patch63_r10.graph
        assert peripheral_cycles_through(g, 0, 5) == []
        assert len(peripheral_cycles_through(g, 0, 6)) == 3

    def test_matches_oracle_on_random_graphs(self):
        from hypothesis import given, settings
        from hypothesis import strategies as st

        @st.composite
        def graph_and_query(draw):
            n = draw(st.integers(min_value=3, max_value=8))
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
            picks = draw(st.lists(st.sampled_from(pairs), min_size=2, max_size=14, unique=True))
            l_max = draw(st.integers(min_value=3, max_value=6))
            return Graph(range(n), picks), draw(st.integers(min_value=0, max_value=n - 1)), l_max

        @given(graph_and_query())
        @settings(max_examples=80, deadline=None)
        def run(case):
            g, v, l_max = case
            got = {frozenset(frozenset(e) for e in c.edges) for c in peripheral_cycles_through(g, v, l_max)}
            want = peripheral_cycles_oracle(adjacency_of(g), v, l_max)
            assert got == want

        run()


class TestDkBall:
    def test_d1_equals_b2_on_lattice(self, patch44_r6):
        d1 = patch_dk_ball(patch44_r6, patch44_r6.root, 1)
        b2 = ball(patch44_r6.graph, patch44_r6.root, 2)
        assert d1.radius == 2
        assert set(d1.graph.vertices) == set(b2.graph.vertices)
        # oracle: union of the four coordinate faces reaches exactly distance 2
        reach = {c for f in z2_faces_at((0, 0)) for c in f}
        assert max(abs(x) + abs(y) for x, y in reach) == 2

    def test_d2_equals_b4_on_lattice(self, patch44_r6):
        d2 = patch_dk_ball(patch44_r6, patch44_r6.root, 2)
        assert d2.radius == 4
        assert set(d2.graph.vertices) == set(
            ball(patch44_r6.graph, patch44_r6.root, 4).graph.vertices
        )

    def test_torus_d1(self, torus57):
        d1 = dk_ball(torus57.graph, 0, 1, 4)
        assert d1.radius == 2
        assert set(d1.graph.vertices) == set(ball(torus57.graph, 0, 2).graph.vertices)

    def test_monotone_in_k(self, patch44_r10):
        d1 = patch_dk_ball(patch44_r10, patch44_r10.root, 1)
        d2 = patch_dk_ball(patch44_r10, patch44_r10.root, 2)
        assert set(d1.graph.vertices) <= set(d2.graph.vertices)

    def test_patch_too_small_never_truncates(self, patch44_r6):
        margin_vertex = patch44_r6.outer[0]
        with pytest.raises(PatchTooSmallError):
            patch_dk_ball(patch44_r6, margin_vertex, 1)


class TestFaceBoundariesAt:
    def test_torus(self, torus57):
        fb = face_boundaries_at(torus57.graph, 6, 4)
        assert len(fb) == 4 and all(len(f) == 4 for f in fb)

    def test_agrees_with_traced_faces_on_patch_interior(self, patch44_r6):
        p = patch44_r6
        for v in p.graph.vertices:
            if p.complete_radius[v] >= 2:
                assert set(face_boundaries_at(p.graph, v, 4)) == set(p.faces_at(v))

    def test_klein(self, klein66):
        fb = face_boundaries_at(klein66.graph, 0, 4)
        assert len(fb) == 4 and all(len(f) == 4 for f in fb)

    def test_cross_check_mode(self, torus57):
        assert face_boundaries_at(torus57.graph, 0, 4, cross_check=True)


class TestRootedIsomorphisms:
    def test_identity_present(self, patch44_r6):
        b = ball(patch44_r6.graph, patch44_r6.root, 2)
        isos = rooted_isomorphisms(b, b)
        assert any(all(k == v for k, v in i.mapping.items()) for i in isos)

    def test_star_has_24(self, patch44_r6):
        b = ball(patch44_r6.graph, patch44_r6.root, 1)
        assert len(rooted_isomorphisms(b, b)) == 24

    def test_d1_has_8_confirmed_by_oracle(self, patch44_r6):
        d1 = patch_dk_ball(patch44_r6, patch44_r6.root, 1)
        got = rooted_isomorphisms(d1, d1)
        adj = adjacency_of(d1.graph)
        brute = brute_rooted_isomorphisms(adj, d1.root, adj, d1.root)
        assert len(got) == len(brute) == 8

    def test_symmetry_and_composition(self, patch44_r6):
        p = patch44_r6
        a = ball(p.graph, p.root, 2)
        b = ball(p.graph, 3, 2)
        ab = rooted_isomorphisms(a, b)
        ba = rooted_isomorphisms(b, a)
        assert bool(ab) == bool(ba)
        i = ab[0]
        assert i.inverse().mapping in [j.mapping for j in ba]
        comp = i.inverse().compose(i)
        assert all(comp[v] == v for v in a.graph.vertices)

    def test_limit_respected(self, patch44_r6):
        b = ball(patch44_r6.graph, patch44_r6.root, 1)
        assert len(rooted_isomorphisms(b, b, limit=5)) == 5

    def test_prescription_constrains(self, patch44_r6):
        d1 = patch_dk_ball(patch44_r6, patch44_r6.root, 1)
        nbrs = patch44_r6.graph.neighbors(patch44_r6.root)
        pres = {nbrs[0]: nbrs[0], nbrs[1]: nbrs[1]}
        isos = rooted_isomorphisms(d1, d1, prescribed=pres)
        assert len(isos) == 1  # fixing two adjacent directions rigidifies the square

    def test_non_isomorphic_gives_empty(self, patch44_r6, patch63_r10):
        a = ball(patch44_r6.graph, patch44_r6.root, 1)
        b = ball(patch63_r10.graph, patch63_r10.root, 1)
        assert rooted_isomorphisms(a, b) == []


class TestFaceCore:
    def test_lattice_core_is_block(self, patch44_r6):
        core = face_core(patch44_r6, patch44_r6.root, 1)
        assert core.rooted.n == 9
        assert len(core.faces) == 4

    def test_torus_core_matches_lattice_core(self, patch44_r6, torus57):
        cp = face_core(patch44_r6, patch44_r6.root, 2)
        ct = face_core(torus57.graph, 0, 2, l_max=4)
        assert len(cp.faces) == len(ct.faces) == 16
        assert rooted_isomorphisms(cp.rooted, ct.rooted, limit=1)

    def test_patch_guard(self, patch44_r6):
        with pytest.raises(PatchTooSmallError):
            face_core(patch44_r6, patch44_r6.outer[0], 1)


class TestIsRLocally:
    def test_torus57_ball_mode_fails_core_mode_passes(self, torus57, patch44_r10):
        # the 5-torus picks up wrap chords inside its induced 2-balls, so
        # the literal ball comparison fails while the face-core comparison
        # (what the cover machinery consumes) succeeds
        assert not is_r_locally(torus57.graph, patch44_r10, 2).ok
        assert is_r_locally(torus57.graph, patch44_r10, 2, d_balls=True).ok

    def test_torus67_ball_mode_passes(self, torus67, patch44_r10):
        assert is_r_locally(torus67.graph, patch44_r10, 2).ok

    def test_klein_ball_mode_passes(self, klein66, patch44_r10):
        assert is_r_locally(klein66.graph, patch44_r10, 2).ok

    def test_tiny_torus_fails_by_cardinality(self, patch44_r10):
        from coverkit import QuotientSpec, make_quotient

        t33 = make_quotient(QuotientSpec("torus", 3, 3))
        rep = is_r_locally(t33.graph, patch44_r10, 2)
        assert not rep.ok
        assert rep.failures == list(t33.graph.vertices)

    def test_patch_interior_agrees_with_itself(self, patch44_r6):
        p = patch44_r6
        ref = p.ball(p.root, 2)
        for v in p.graph.vertices:
            if p.complete_radius[v] >= 2:
                assert rooted_isomorphisms(ball(p.graph, v, 2), ref, limit=1)

    def test_hex_torus(self, hex55, patch63_r10):
        assert is_r_locally(hex55.graph, patch63_r10, 2).ok
        assert is_r_locally(hex55.graph, patch63_r10, 2, d_balls=True).ok

    def test_report_shape(self, torus57, patch44_r10):
        rep = is_r_locally(torus57.graph, patch44_r10, 2)
        doc = rep.to_json_dict()
        assert set(doc) == {"ok", "failures", "mode"}
