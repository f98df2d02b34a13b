"""Distances between subsets of one image, and the diameter drop bound.

The Hausdorff distance uses the ambient shortest-path metric directly.
The metric of continuity is map-based: the least t such that continuous
maps exist in both directions between the two subsets (each carrying the
adjacency induced on it) moving every point at most t through the ambient
metric.  Constant maps are always continuous, so the minimum is attained.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetExceeded, Disconnected, EmptySubset, NotAnMMap
from .image import DigitalImage, SubsetMask, _bits, check_mask, induced
from .maps import (
    DEFAULT_MAX_VERTICES,
    MapTable,
    _PairSpace,
    displacement,
    is_continuous,
)


def _subset_ids(img: DigitalImage, mask: SubsetMask) -> list[int]:
    check_mask(img, mask)
    ids = list(_bits(mask))
    if not ids:
        raise EmptySubset("subset distances need nonempty subsets")
    return ids


def hausdorff(img: DigitalImage, mask0: SubsetMask, mask1: SubsetMask) -> int:
    """Hausdorff distance between two nonempty subsets in the ambient
    shortest-path metric: the larger of the two directed distances."""
    if not img.is_connected():
        raise Disconnected("subset distances require a connected ambient image")
    a = _subset_ids(img, mask0)
    b = _subset_ids(img, mask1)
    dist = img.metric_matrix()
    sub = dist[np.ix_(a, b)].astype(np.int64)
    return int(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def _min_max_displacement(
    img: DigitalImage, dom_ids: list[int], cod_ids: list[int]
) -> int:
    """Least achievable maximum ambient displacement over continuous maps
    from the first induced subset into the second.

    Branch and bound: values are tried nearest-first in the ambient metric
    and a partial assignment dies once its worst displacement cannot beat
    the incumbent.  Seeding with the best constant map gives a finite
    incumbent immediately.
    """
    dom_img, _ = induced(img, sum(1 << i for i in dom_ids))
    cod_img, _ = induced(img, sum(1 << i for i in cod_ids))
    space = _PairSpace(dom_img, cod_img)
    amb = img.dist_lists()
    nd, nc = dom_img.n, cod_img.n
    cost = [[amb[dom_ids[x]][cod_ids[v]] for v in range(nc)] for x in range(nd)]
    by_cost = [sorted(range(nc), key=lambda v: (cost[x][v], v)) for x in range(nd)]
    best = min(max(cost[x][v] for x in range(nd)) for v in range(nc))
    if best == 0:
        return 0
    dist_dom = space.dist_dom
    ball = space.ball
    full = space.full

    def rec(pos: int, cand: list[int], cur: int):
        nonlocal best
        if cur >= best:
            return
        if pos == nd:
            best = cur
            return
        dx = dist_dom[pos]
        for v in by_cost[pos]:
            c = cost[pos][v]
            if c >= best:
                break  # values sorted by cost, nothing better follows
            if not cand[pos] >> v & 1:
                continue
            nc2 = list(cand)
            ok = True
            for y in range(pos + 1, nd):
                ny = nc2[y] & ball(v, dx[y])
                if not ny:
                    ok = False
                    break
                nc2[y] = ny
            if ok:
                rec(pos + 1, nc2, max(cur, c))

    rec(0, [full] * nd, 0)
    return best


def metric_of_continuity(
    img: DigitalImage,
    mask0: SubsetMask,
    mask1: SubsetMask,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> int:
    """Least t admitting continuous maps both ways between the subsets
    (induced adjacency) that move every point at most t in the ambient
    metric.  The two directions minimize independently; their maxima
    combine as the larger of the two minima."""
    if not img.is_connected():
        raise Disconnected("subset distances require a connected ambient image")
    a = _subset_ids(img, mask0)
    b = _subset_ids(img, mask1)
    if len(a) > max_vertices or len(b) > max_vertices:
        raise BudgetExceeded(
            f"metric of continuity beyond {max_vertices}-vertex subsets is refused"
        )
    return max(
        _min_max_displacement(img, a, b),
        _min_max_displacement(img, b, a),
    )


def subset_diameter_ambient(img: DigitalImage, mask: SubsetMask) -> int:
    """Diameter of the subset measured with ambient distances."""
    ids = _subset_ids(img, mask)
    dist = img.metric_matrix()
    return int(dist[np.ix_(ids, ids)].max(initial=0))


def subset_diameter_induced(img: DigitalImage, mask: SubsetMask) -> int:
    """Diameter of the subset under its own induced shortest-path metric."""
    sub, _ = induced(img, mask)
    return sub.diameter_value()


def check_diameter_bound(img: DigitalImage, f: MapTable, m: int) -> bool:
    """An m-map shrinks the diameter by at most 2m.

    Checks diam(f(X)) >= diam(X) - 2m with the image set measured both
    ways: under ambient distances and under its induced metric.  Raises
    NotAnMMap unless f is continuous with displacement at most m.
    """
    if not is_continuous(f) or displacement(f) > m:
        raise NotAnMMap(f"map is not a continuous {m}-map")
    target = img.diameter_value() - 2 * m
    image = f.image_mask()
    return (
        subset_diameter_ambient(img, image) >= target
        and subset_diameter_induced(img, image) >= target
    )
