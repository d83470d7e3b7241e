"""Independent post-hoc verification of built covers.

check_cover re-tests the defining property (neighbourhood bijections)
directly on the vertex map, without trusting anything the builder did.
check_normality mirrors the normality argument: for sampled fiber pairs
it checks that corresponding flags have equal colours, reconstructs the
covering transformation through the extension isomorphism, and asserts
that composing with it leaves the cover unchanged wherever defined.
check_uniqueness rebuilds the cover under different deterministic face
enumerations and demands identical vertex maps.
"""

from __future__ import annotations

import random

from .builder import CoverMap, build_cover
from .errors import CoverKitError
from .flags import Flag, color, color_in_h, extend_iso
from .graph import Graph, edge_key
from .local import dk_ball, host_faces_at
from .report import VerificationReport
from .tessellation import PlanePatch


def check_cover(cover: CoverMap, margin: int = 1) -> VerificationReport:
    """The cover property: at every certified vertex with fully mapped
    neighbourhood, the edge map to the image neighbourhood is a bijection.
    Also reports fiber sizes over the checked region."""
    if margin < 1:
        raise CoverKitError("margin must be >= 1")
    patch, h = cover.patch, cover.h_graph
    vmap = cover.vertex_map
    report = VerificationReport()
    checked = []
    bad = []
    for v in sorted(vmap):
        if patch.complete_radius[v] < margin:
            continue
        nbrs = patch.graph.neighbors(v)
        if any(u not in vmap for u in nbrs):
            continue
        checked.append(v)
        images = [vmap[u] for u in nbrs]
        if len(set(images)) != len(images) or set(images) != set(h.neighbors(vmap[v])):
            bad.append(v)
    report.add(
        "neighbourhood bijections",
        not bad,
        witnesses=bad,
        checked=len(checked),
        margin=margin,
    )
    fibers: dict[int, int] = {}
    for v in checked:
        fibers[vmap[v]] = fibers.get(vmap[v], 0) + 1
    report.add(
        "fiber census",
        True,
        fibers={str(k): n for k, n in sorted(fibers.items())},
        distinct_images=len(fibers),
    )
    return report


def _flag_image(cover: CoverMap, fl: Flag) -> Flag:
    b = cover.face_image[fl.face]
    vmap = cover.vertex_map
    return Flag(vmap[fl.vertex], edge_key(vmap[fl.edge[0]], vmap[fl.edge[1]]), b)


def _flag_preimage_at(cover: CoverMap, v: int, target: Flag) -> Flag:
    """The unique flag at v mapping onto `target` under the cover."""
    hits = []
    for face in cover.patch.faces_at(v):
        for e in face.edges_at(v):
            fl = Flag(v, e, face)
            if _flag_image(cover, fl) == target:
                hits.append(fl)
    if len(hits) != 1:
        raise CoverKitError(
            f"flag {target} has {len(hits)} preimages at {v}; not a cover"
        )
    return hits[0]


def _sample_fiber_pairs(
    cover: CoverMap, samples: int, rng: random.Random, exhaustive: bool
) -> list[tuple[int, int]]:
    """Deterministic fiber pairs from the processed interior, round-robin
    across target vertices."""
    patch = cover.patch
    r = cover.n + 1
    j_r = dk_ball(patch.graph, patch.root, r, patch.l_max, patch.complete_radius).radius
    core = [v for v in cover.region_interior() if patch.complete_radius[v] >= j_r]
    fibers: dict[int, list[int]] = {}
    for v in core:
        fibers.setdefault(cover.vertex_map[v], []).append(v)
    pools = []
    for hv in sorted(fibers):
        vs = sorted(fibers[hv])
        pools.append([(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]])
    if exhaustive:
        return [p for pool in pools for p in pool]
    pairs: list[tuple[int, int]] = []
    idx = 0
    while len(pairs) < samples and any(pools):
        pool = pools[idx % len(pools)]
        if pool:
            pick = rng.randrange(len(pool))
            pairs.append(pool.pop(pick))
        idx += 1
        if all(not p for p in pools):
            break
    return pairs


def check_normality(
    cover: CoverMap,
    samples: int = 20,
    rng_seed: int = 0,
    exhaustive: bool = False,
) -> VerificationReport:
    """Normality on sampled fiber pairs.

    Tier (a): for every flag of the common image vertex, the two
    preimage flags have equal colours.  Tier (b): the covering
    transformation reconstructed from one matched flag pair commutes
    with the cover wherever both sides are defined.  Each reconstructed
    transformation is classified as orientation-preserving or reversing.
    """
    patch = cover.patch
    delta, n = cover.delta, cover.n
    r = n + 1
    rng = random.Random(rng_seed)
    report = VerificationReport()
    pairs = _sample_fiber_pairs(cover, samples, rng, exhaustive)
    if not pairs:
        # all fibers in the checked region are singletons: trivially normal
        report.add("fiber pairs sampled", True, note="all fibers singletons; trivially normal")
        return report
    cache: dict = {}
    color_bad: list = []
    commute_bad: list = []
    orientations: list[bool] = []
    for v, w in pairs:
        hv = cover.vertex_map[v]
        target_flags = [
            Flag(hv, e, b)
            for b in host_faces_at(cover.h, hv, patch.l_max, cache.setdefault("h_faces", {}))
            for e in b.edges_at(hv)
        ]
        alpha = None
        for tf in sorted(target_flags):
            f_v = _flag_preimage_at(cover, v, tf)
            f_w = _flag_preimage_at(cover, w, tf)
            cv = color(patch, delta, n, f_v, cache=cache)
            cw = color(patch, delta, n, f_w, cache=cache)
            ch = color_in_h(cover.h, patch, delta, n, tf, cache=cache)
            if not (cv == ch == cw):
                color_bad.append((v, w, tf.to_json_dict(), cv, ch, cw))
                continue
            if alpha is None:
                alpha = extend_iso(patch, patch, f_v, f_w, r, delta, n, cache=cache)
        if alpha is None:
            commute_bad.append((v, w, "no colour-matched flag pair"))
            continue
        for u in sorted(alpha.mapping):
            au = alpha.mapping[u]
            if u in cover.vertex_map and au in cover.vertex_map:
                if cover.vertex_map[au] != cover.vertex_map[u]:
                    commute_bad.append((v, w, u))
                    break
        orientations.append(
            alpha.is_orientation_reversing(patch.rotation, patch.rotation, at=v)
        )
    report.add(
        "fiber flag colours agree",
        not color_bad,
        witnesses=color_bad,
        pairs=len(pairs),
    )
    report.add(
        "covering transformations commute",
        not commute_bad,
        witnesses=commute_bad,
        orientation_reversing=sum(orientations),
        orientation_preserving=len(orientations) - sum(orientations),
    )
    return report


def check_uniqueness(
    patch: PlanePatch,
    h: Graph | PlanePatch,
    f: Flag | None = None,
    flag_h: Flag | None = None,
    trials: int = 3,
    i_max: int = 4,
    guard: int = 2,
) -> VerificationReport:
    """Rebuild the cover under `trials` different deterministic face
    enumerations (tie-break variants) and assert identical vertex maps."""
    report = VerificationReport()
    reference = None
    diff: list = []
    for t in range(trials):
        cov = build_cover(patch, h, f=f, flag_h=flag_h, i_max=i_max, guard=guard, tie_break=t % 3)
        if reference is None:
            reference = cov
            continue
        if cov.vertex_map != reference.vertex_map:
            first = min(
                set(cov.vertex_map) ^ set(reference.vertex_map)
                | {v for v in cov.vertex_map if reference.vertex_map.get(v) != cov.vertex_map[v]}
            )
            diff.append((t, first))
        if frozenset(cov.processed) != frozenset(reference.processed):
            diff.append((t, "processed face sets differ"))
    report.add("vertex maps identical across enumerations", not diff, witnesses=diff, trials=trials)
    return report
