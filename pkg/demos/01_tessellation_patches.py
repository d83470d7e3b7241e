"""Generating finite patches of regular tessellations.

A patch is a window into the infinite {p,q} tessellation: a graph plus a
rotation system, its traced faces, and a per-vertex completeness
certificate saying how much of the infinite picture around each vertex
is faithfully present.
"""

from coverkit import generate, trace_faces

# The Euclidean square grid: every interior vertex has four squares.
patch = generate(4, 4, 4)
print("{4,4} radius 4:", patch)
print("  degree of root:", patch.graph.degree(patch.root))
print("  faces at root:", [tuple(f) for f in patch.faces_at(patch.root)])
print("  complete_radius(root):", patch.complete_radius[patch.root])

# Face tracing partitions the darts: interior faces plus one outer walk.
walks = trace_faces(patch.graph, patch.rotation)
print("  traced walks:", len(walks), "=", len(patch.faces), "faces + 1 outer boundary")
print("  Euler count V - E + F:", patch.graph.n - len(patch.graph.edges) + len(walks))

# Hyperbolic tessellations grow exponentially.
hyper = generate(4, 5, 6)
dist = hyper.graph.distances_from(hyper.root)
sizes = [sum(1 for d in dist.values() if d <= i) for i in range(7)]
print("\n{4,5} ball sizes by radius:", sizes)
print("growth ratios:", [round(b / a, 2) for a, b in zip(sizes[2:], sizes[3:])])

# The honeycomb, for contrast: three hexagons around every vertex.
honey = generate(6, 3, 3)
print("\n{6,3} radius 3:", honey)
print("  face lengths at root:", [len(f) for f in honey.faces_at(honey.root)])
