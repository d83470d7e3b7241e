"""Verifying that built covers are normal and unique.

Normality: for any two vertices in the same fiber there is a symmetry of
the source exchanging them that commutes with the cover.  The checker
reconstructs that symmetry from matched flags and tests the commutation
directly.  On a Klein-bottle target some of the reconstructed
symmetries must reverse the rotation order: the quotient is
non-orientable, and the checker sees that.

Uniqueness: the cover depends only on the seed flags, not on the order
faces were attached; rebuilding under different enumeration tie-breaks
must reproduce the identical vertex map.
"""

from coverkit import (
    QuotientSpec,
    build_cover,
    check_normality,
    check_uniqueness,
    generate,
    make_quotient,
)

patch = generate(4, 4, 10)

torus = make_quotient(QuotientSpec("torus", 5, 7))
cover = build_cover(patch, torus.graph)
rep = check_normality(cover, samples=20)
info = rep.checks[-1].info
print("torus normality:", "PASS" if rep.ok else "FAIL")
print("  orientation-preserving:", info["orientation_preserving"],
      " reversing:", info["orientation_reversing"])

klein = make_quotient(QuotientSpec("klein", 6, 6))
kcover = build_cover(patch, klein.graph)
krep = check_normality(kcover, samples=20)
kinfo = krep.checks[-1].info
print("klein normality:", "PASS" if krep.ok else "FAIL")
print("  orientation-preserving:", kinfo["orientation_preserving"],
      " reversing:", kinfo["orientation_reversing"], "(glide reflections)")

urep = check_uniqueness(patch, torus.graph, trials=3)
print("uniqueness across enumerations:", "PASS" if urep.ok else "FAIL")
