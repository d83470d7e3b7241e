"""The counterexample family K(l,k).

Two toroidal grids, one with a single rerouted level, joined completely
level by level.  Every vertex sees the same ball out to a radius tied to
the diameter, yet the graph has no symmetry exchanging the plain copy
with the rerouted one, so it is not vertex-transitive.  It is still
covered by a genuinely vertex-transitive double cylinder, via a closed
formula that advances the width coordinate once per wrap.
"""

from coverkit import (
    check_K_ball_claim,
    example_cover_formula,
    is_vertex_transitive,
    make_example_K,
)

K = make_example_K(6, 4)
print("K(6,4):", K.graph, " regular of degree", K.graph.degree(0))

print("vertex-transitive:", is_vertex_transitive(K.graph))

claim = check_K_ball_claim(6, 4)
stated = claim.checks[0].info
logged = claim.checks[1].info
print("balls isomorphic at rho = diam - 1 - l/2 =", stated["rho"],
      "->", "PASS" if claim.checks[0].passed else "FAIL")
print("empirically maximal isomorphic-ball radius:", logged["rho_max"])

G, KK, cover = example_cover_formula(6, 4, (0, 12))
print("\ndouble cylinder window:", G.graph)
print("formula cover validated edge-by-edge; image size:",
      len(set(cover.values())), "of", KK.graph.n)
interior = G.interior_vertices()
ok = all(
    {cover[u] for u in G.graph.neighbors(v)} == set(KK.graph.neighbors(cover[v]))
    for v in interior
)
print("locally bijective on the", len(interior), "interior vertices:", ok)
