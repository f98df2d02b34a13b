"""Verdicts on freezing, cold, and limiting sets, with certificates.

A subset A of a connected image is (m, n)-limiting when every continuous
self-map whose restriction to A is an m-map is itself an n-map.  Freezing
sets are the (0, 0) case, s-cold sets the (0, s) case.  The empty set
restricts vacuously, so it is (m, n)-limiting exactly when every
continuous self-map is an n-map.

Verdicts come from the counterexample search: a failed query carries the
first violating map in search order, a held query reports the exhausted
node count, and a blown budget is a third outcome distinct from both.
Limitedness only grows with the subset, so minimality reduces to checking
single deletions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    BadCycleLength,
    BudgetExceeded,
    Disconnected,
    NotAProduct,
    NotAValidTriple,
    NotEmbedded,
)
from .image import (
    DigitalImage,
    SubsetMask,
    _bits,
    boundary,
    check_mask,
    mask_from_indices,
)
from .maps import (
    DEFAULT_MAX_VERTICES,
    DEFAULT_NODE_BUDGET,
    MapTable,
    SearchOutcome,
    cycle_indexing,
    run_counterexample_search,
)


@dataclass
class LimitingVerdict:
    """Outcome of a limiting-set query.

    holds is True, False, or None for undecided-within-budget.  A False
    limiting verdict carries the violating map; a False minimality verdict
    instead carries the proper subset that still limits.
    """

    holds: bool | None
    witness: MapTable | None
    nodes: int
    subset_witness: SubsetMask | None = None

    @property
    def decided(self) -> bool:
        return self.holds is not None


def _verdict(outcome: SearchOutcome) -> LimitingVerdict:
    if outcome.status == "witness":
        return LimitingVerdict(False, outcome.witness, outcome.nodes)
    if outcome.status == "exhausted":
        return LimitingVerdict(True, None, outcome.nodes)
    return LimitingVerdict(None, None, outcome.nodes)


def is_limiting(
    img: DigitalImage,
    subset: SubsetMask,
    m: int,
    n: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> LimitingVerdict:
    """Decide whether the subset is (m, n)-limiting."""
    outcome = run_counterexample_search(
        img,
        subset,
        m,
        n,
        node_budget=node_budget,
        threads=threads,
        max_vertices=max_vertices,
    )
    return _verdict(outcome)


def is_freezing(img: DigitalImage, subset: SubsetMask, **kw) -> LimitingVerdict:
    """Fixing the subset forces the identity; the (0, 0)-limiting case."""
    return is_limiting(img, subset, 0, 0, **kw)


def is_s_cold(img: DigitalImage, subset: SubsetMask, s: int, **kw) -> LimitingVerdict:
    """Fixing the subset forces an s-map; the (0, s)-limiting case."""
    return is_limiting(img, subset, 0, s, **kw)


def is_minimal_limiting(
    img: DigitalImage,
    subset: SubsetMask,
    m: int,
    n: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> LimitingVerdict:
    """The subset is (m, n)-limiting and no single deletion still is.

    Limitedness is monotone in the subset, so a limiting proper subset is
    always contained in some single deletion; checking deletions suffices.
    """
    kw = dict(node_budget=node_budget, threads=threads, max_vertices=max_vertices)
    base = is_limiting(img, subset, m, n, **kw)
    if base.holds is None or base.holds is False:
        return base
    nodes = base.nodes
    for a in _bits(subset):
        smaller = subset & ~(1 << a)
        sub = is_limiting(img, smaller, m, n, **kw)
        nodes += sub.nodes
        if sub.holds is None:
            return LimitingVerdict(None, None, nodes)
        if sub.holds:
            return LimitingVerdict(False, None, nodes, subset_witness=smaller)
    return LimitingVerdict(True, None, nodes)


@dataclass
class MinimalSetResult:
    """Minimal limiting sets found up to a size cap, in discovery order.

    complete is False when the node budget ran out; sets found before the
    cutoff are still reported.
    """

    sets: list[SubsetMask]
    complete: bool
    nodes: int


def find_minimal_limiting_sets(
    img: DigitalImage,
    m: int,
    n: int,
    size_cap: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> MinimalSetResult:
    """All minimal (m, n)-limiting sets with at most size_cap vertices.

    Subsets are scanned smallest-first in lexicographic index order;
    verdicts are memoized, and minimality of a found set reads its single
    deletions out of the memo.
    """
    if size_cap < 0:
        raise ValueError("size cap must be nonnegative")
    verdicts: dict[SubsetMask, bool] = {}
    nodes = 0
    found: list[SubsetMask] = []
    for size in range(min(size_cap, img.n) + 1):
        for combo in itertools.combinations(range(img.n), size):
            mask = mask_from_indices(combo)
            remaining = node_budget - nodes
            if remaining <= 0:
                return MinimalSetResult(found, False, nodes)
            v = is_limiting(
                img,
                mask,
                m,
                n,
                node_budget=remaining,
                threads=threads,
                max_vertices=max_vertices,
            )
            nodes += v.nodes
            if v.holds is None:
                return MinimalSetResult(found, False, nodes)
            verdicts[mask] = v.holds
            if v.holds and all(
                not verdicts[mask & ~(1 << a)] for a in combo
            ):
                found.append(mask)
    return MinimalSetResult(found, True, nodes)


def limiting_profile(
    img: DigitalImage,
    subset: SubsetMask,
    m: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> int:
    """Least n for which the subset is (m, n)-limiting.

    Scans n upward; the diameter always succeeds on a connected image, so
    the scan terminates.
    """
    if not img.is_connected():
        raise Disconnected("limiting profiles require a connected image")
    top = img.diameter_value()
    for n in range(top + 1):
        v = is_limiting(
            img,
            subset,
            m,
            n,
            node_budget=node_budget,
            threads=threads,
            max_vertices=max_vertices,
        )
        if v.holds is None:
            raise BudgetExceeded(
                f"profile undecided at n={n} after {v.nodes} nodes"
            )
        if v.holds:
            return n
    raise AssertionError("unreachable: diameter bound always limits")


# -- cycle bounds ----------------------------------------------------------


def surjectivity_threshold(v: int) -> int:
    """Largest t such that every continuous self-map of a length-v cycle
    with displacement at most t is surjective."""
    if v < 4:
        raise BadCycleLength(f"cycles need at least 4 vertices, got {v}")
    if (v - 2) % 4 == 0:
        return (v - 2) // 4 - 1
    return (v - 2) // 4


def cycle_triple_bound(img: DigitalImage, i: int, j: int, k: int) -> int:
    """Largest m for which three cycle positions are known (m, m)-limiting.

    The positions must cut the cycle into three arcs, each strictly
    shorter than half the cycle, so that the pairwise shorter arcs are
    unique and cover everything.  The bound is the smaller of the
    surjectivity threshold and each half arc length rounded down.
    """
    idx = cycle_indexing(img)
    v = len(idx)
    pos = sorted({i, j, k})
    if len(pos) != 3 or not all(0 <= p < v for p in pos):
        raise NotAValidTriple("positions must be three distinct indices on the cycle")
    gaps = (pos[1] - pos[0], pos[2] - pos[1], v - pos[2] + pos[0])
    if any(2 * g >= v for g in gaps):
        raise NotAValidTriple(
            "each arc between consecutive positions must be shorter than half the cycle"
        )
    return min(surjectivity_threshold(v), *(g // 2 for g in gaps))


# -- displacement bounds ---------------------------------------------------


def cover_displacement_bound(m: int, k: int) -> int:
    """Displacement forced on the whole image when a k-cover is an m-map:
    m + 2k."""
    if m < 0 or k < 0:
        raise ValueError("bounds take nonnegative arguments")
    return m + 2 * k


def retract_displacement_bound(n: int, h: int, eps: int) -> int:
    """Displacement bound n + 2h + eps transported through a retraction
    whose points sit within h of the retract and whose limiting data has
    slack eps."""
    if n < 0 or h < 0 or eps < 0:
        raise ValueError("bounds take nonnegative arguments")
    return n + 2 * h + eps


# -- structural sufficient conditions --------------------------------------


def boundary_cold_condition(img: DigitalImage, subset: SubsetMask) -> bool:
    """Sufficient condition for a 1-cold subset of a c_2 rectangle:
    the subset lies on the boundary and omits no two c_1-adjacent
    boundary points.
    """
    if img.points is None or img.dim != 2 or img.adjacency.label() != "c2":
        raise NotEmbedded("condition applies to two-dimensional c_2 images")
    lo0 = min(p[0] for p in img.points)
    hi0 = max(p[0] for p in img.points)
    lo1 = min(p[1] for p in img.points)
    hi1 = max(p[1] for p in img.points)
    if img.n != (hi0 - lo0 + 1) * (hi1 - lo1 + 1):
        raise NotEmbedded("condition applies to full rectangles")
    check_mask(img, subset)
    bd = boundary(img)
    if subset & ~bd:
        return False
    missing = bd & ~subset
    for a in _bits(missing):
        pa = img.points[a]
        for b in _bits(missing):
            if b <= a:
                continue
            pb = img.points[b]
            diff = (abs(pa[0] - pb[0]), abs(pa[1] - pb[1]))
            if sorted(diff) == [0, 1]:
                return False
    return True


# -- products --------------------------------------------------------------


@dataclass
class FactorReport:
    """Per-factor limiting verdicts for a product query, with the product's
    own verdict when it was checked."""

    product: LimitingVerdict | None
    factors: list[LimitingVerdict]


def factor_limitedness(
    prod: DigitalImage,
    subset: SubsetMask,
    m: int,
    n: int,
    *,
    check_product: bool = True,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> FactorReport:
    """Verdicts for each factor with the subset projected onto it.

    Requires an image built by product() using the full normal product
    (u equal to the factor count); the transfer from product to factors
    is only valid there.
    """
    if prod.factors is None or prod.factor_tuples is None:
        raise NotAProduct("image does not carry product structure")
    if prod.adjacency.kind != "npu" or prod.adjacency.u != len(prod.factors):
        raise NotAProduct(
            "factor transfer needs the full normal product (u = factor count)"
        )
    check_mask(prod, subset)
    kw = dict(node_budget=node_budget, threads=threads, max_vertices=max_vertices)
    product_verdict = None
    if check_product:
        product_verdict = is_limiting(prod, subset, m, n, **kw)
    reports = []
    for i, factor in enumerate(prod.factors):
        proj = 0
        for vtx in _bits(subset):
            proj |= 1 << prod.factor_tuples[vtx][i]
        reports.append(is_limiting(factor, proj, m, n, **kw))
    return FactorReport(product_verdict, reports)
