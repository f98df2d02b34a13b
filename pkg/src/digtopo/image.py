"""Finite digital images: grid constructors, adjacency relations, and metrics.

A digital image is a finite vertex set together with a symmetric, irreflexive
adjacency relation.  Grid images embed their vertices in Z^n and use the
c_u rule: two points are adjacent when they differ by at most 1 in every
coordinate, differ in at least one, and differ in at most u.  Abstract images
carry an explicit edge list.  Products combine factor images under the
generalized normal product rule: between 1 and u factors step along a factor
edge while the remaining factors stay fixed.

Vertices are canonically ordered: lexicographically by coordinates for grid
images, in insertion order otherwise.  Subsets are bitmasks over that order,
and every deterministic guarantee elsewhere in the library leans on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    BadAdjacency,
    BadCycleLength,
    BadEdge,
    BudgetExceeded,
    Disconnected,
    NotEmbedded,
)

Point = tuple[int, ...]
SubsetMask = int

#: Sentinel for cross-component distances; distances saturate at 16 bits.
INF = 0xFFFF

#: Construction refuses images with more points than this.
DEFAULT_POINT_BUDGET = 4096

#: Coordinates must satisfy |c| <= COORD_LIMIT.
COORD_LIMIT = 1 << 30


@dataclass(frozen=True)
class AdjacencyKind:
    """Tag describing which adjacency rule generated an image's edges."""

    kind: str  # "cu" | "npu" | "explicit"
    u: int | None = None
    factors: tuple["AdjacencyKind", ...] | None = None

    @classmethod
    def cu(cls, u: int) -> "AdjacencyKind":
        return cls("cu", u)

    @classmethod
    def npu(cls, u: int, factors: Sequence["AdjacencyKind"]) -> "AdjacencyKind":
        return cls("npu", u, tuple(factors))

    @classmethod
    def explicit(cls) -> "AdjacencyKind":
        return cls("explicit")

    def label(self) -> str:
        if self.kind == "cu":
            return f"c{self.u}"
        if self.kind == "npu":
            inner = ",".join(f.label() for f in self.factors or ())
            return f"np{self.u}({inner})"
        return "explicit"


class DigitalImage:
    """A finite digital image with canonically ordered vertices.

    Instances are immutable after construction; the all-pairs metric is
    computed lazily and cached.  Equality and hashing are structural over
    (points, adjacency bitmasks) so that separately built copies of the
    same image interoperate.
    """

    __slots__ = (
        "dim",
        "points",
        "adjacency",
        "n",
        "neighbor_masks",
        "point_index",
        "factors",
        "factor_tuples",
        "_dist",
        "_dist_lists",
        "_hash",
    )

    def __init__(
        self,
        *,
        points: tuple[Point, ...] | None,
        dim: int,
        adjacency: AdjacencyKind,
        neighbor_masks: tuple[int, ...],
        factors: tuple["DigitalImage", ...] | None = None,
        factor_tuples: tuple[tuple[int, ...], ...] | None = None,
    ):
        self.points = points
        self.dim = dim
        self.adjacency = adjacency
        self.n = len(neighbor_masks)
        self.neighbor_masks = neighbor_masks
        self.point_index = (
            {p: i for i, p in enumerate(points)} if points is not None else None
        )
        self.factors = factors
        self.factor_tuples = factor_tuples
        self._dist = None
        self._dist_lists = None
        self._hash = None

    # -- structure ---------------------------------------------------------

    @property
    def is_grid(self) -> bool:
        return self.points is not None

    def vertex_label(self, i: int) -> str:
        if self.points is not None:
            return "(" + ",".join(str(c) for c in self.points[i]) + ")"
        return str(i)

    def neighbors_of(self, i: int) -> int:
        return self.neighbor_masks[i]

    def nstar_mask(self, i: int) -> int:
        """Neighbors of i together with i itself."""
        return self.neighbor_masks[i] | (1 << i)

    def degree(self, i: int) -> int:
        return bin(self.neighbor_masks[i]).count("1")

    def edge_list(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            m = self.neighbor_masks[i] >> (i + 1) << (i + 1)
            for j in _bits(m):
                out.append((i, j))
        return out

    @property
    def edge_count(self) -> int:
        return sum(self.degree(i) for i in range(self.n)) // 2

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.neighbor_masks[i] >> j & 1)

    # -- metric ------------------------------------------------------------

    def metric_matrix(self) -> np.ndarray:
        """All-pairs shortest-path distances as a read-only uint16 matrix.

        Cross-component entries hold the INF sentinel.
        """
        if self._dist is None:
            self._dist = _all_pairs_distances(self)
        return self._dist

    def dist_lists(self) -> list[list[int]]:
        """Metric matrix as nested Python ints, for tight search loops."""
        if self._dist_lists is None:
            self._dist_lists = [
                [int(v) for v in row] for row in self.metric_matrix()
            ]
        return self._dist_lists

    def dist(self, i: int, j: int) -> int:
        return int(self.metric_matrix()[i, j])

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return int(self.metric_matrix()[0].max()) < INF

    def diameter_value(self) -> int:
        if self.n == 0:
            raise Disconnected("diameter of an empty image is undefined")
        if not self.is_connected():
            raise Disconnected("diameter requires a connected image")
        return int(self.metric_matrix().max(initial=0))

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, DigitalImage):
            return NotImplemented
        return self.points == other.points and self.neighbor_masks == other.neighbor_masks

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.points, self.neighbor_masks))
        return self._hash

    def __repr__(self) -> str:
        return f"DigitalImage(n={self.n}, adjacency={self.adjacency.label()})"


# -- bitmask helpers -------------------------------------------------------


def _bits(mask: int) -> Iterator[int]:
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def mask_from_indices(indices: Iterable[int]) -> SubsetMask:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def mask_indices(mask: SubsetMask) -> list[int]:
    return list(_bits(mask))


def mask_size(mask: SubsetMask) -> int:
    return bin(mask).count("1")


def full_mask(img: DigitalImage) -> SubsetMask:
    return (1 << img.n) - 1


def mask_from_points(img: DigitalImage, points: Iterable[Sequence[int]]) -> SubsetMask:
    if img.point_index is None:
        raise NotEmbedded("point-valued subsets require a grid image")
    out = 0
    for p in points:
        key = tuple(int(c) for c in p)
        if key not in img.point_index:
            raise ValueError(f"point {key} is not a vertex of the image")
        out |= 1 << img.point_index[key]
    return out


def mask_points(img: DigitalImage, mask: SubsetMask) -> list[Point]:
    if img.points is None:
        raise NotEmbedded("vertices of this image have no coordinates")
    return [img.points[i] for i in _bits(mask)]


def check_mask(img: DigitalImage, mask: SubsetMask) -> None:
    if mask < 0 or mask >> img.n:
        raise ValueError("subset mask has bits outside the vertex range")


# -- constructors ----------------------------------------------------------


def _check_points(points: Sequence[Sequence[int]], dim: int | None) -> tuple[Point, ...]:
    out = []
    for p in points:
        t = tuple(int(c) for c in p)
        if dim is None:
            dim = len(t)
        if len(t) != dim:
            raise ValueError("all points must share one dimension")
        if any(abs(c) > COORD_LIMIT for c in t):
            raise ValueError(f"coordinate magnitude exceeds {COORD_LIMIT}")
        out.append(t)
    if len(set(out)) != len(out):
        raise ValueError("points must be pairwise distinct")
    return tuple(sorted(out))


def _cu_offsets(dim: int, u: int) -> list[Point]:
    """Nonzero offsets in {-1,0,1}^dim with at most u nonzero coordinates."""
    out = []
    for off in itertools.product((-1, 0, 1), repeat=dim):
        k = sum(1 for c in off if c != 0)
        if 1 <= k <= u:
            out.append(off)
    return out


def _grid_neighbor_masks(points: tuple[Point, ...], dim: int, u: int) -> tuple[int, ...]:
    index = {p: i for i, p in enumerate(points)}
    offsets = _cu_offsets(dim, u)
    masks = [0] * len(points)
    for i, p in enumerate(points):
        m = 0
        for off in offsets:
            q = tuple(a + b for a, b in zip(p, off))
            j = index.get(q)
            if j is not None:
                m |= 1 << j
        masks[i] = m
    return tuple(masks)


def build_box(
    intervals: Sequence[Sequence[int]],
    u: int,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> DigitalImage:
    """Full integer box prod([lo_i, hi_i]) under c_u adjacency."""
    if not intervals:
        raise ValueError("a box needs at least one interval")
    dim = len(intervals)
    if not 1 <= u <= dim:
        raise BadAdjacency(f"c_u requires 1 <= u <= {dim}, got u={u}")
    parsed = []
    count = 1
    for iv in intervals:
        lo, hi = int(iv[0]), int(iv[1])
        if lo > hi:
            raise ValueError(f"interval [{lo},{hi}] is empty")
        if abs(lo) > COORD_LIMIT or abs(hi) > COORD_LIMIT:
            raise ValueError(f"coordinate magnitude exceeds {COORD_LIMIT}")
        parsed.append((lo, hi))
        count *= hi - lo + 1
        if count > point_budget:
            raise BudgetExceeded(
                f"box has more than {point_budget} points"
            )
    points = tuple(itertools.product(*(range(lo, hi + 1) for lo, hi in parsed)))
    masks = _grid_neighbor_masks(points, dim, u)
    return DigitalImage(
        points=points, dim=dim, adjacency=AdjacencyKind.cu(u), neighbor_masks=masks
    )


def build_from_points(
    points: Sequence[Sequence[int]],
    u: int,
    *,
    dim: int | None = None,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> DigitalImage:
    """Arbitrary grid point set under c_u adjacency.

    Edges are found by probing the c_u offsets of each point against a hash
    of the point set, which matches a direct pairwise application of the
    c_u rule.
    """
    pts = _check_points(points, dim)
    if not pts:
        raise ValueError("an image needs at least one point")
    if len(pts) > point_budget:
        raise BudgetExceeded(f"point set exceeds {point_budget} points")
    d = len(pts[0])
    if not 1 <= u <= d:
        raise BadAdjacency(f"c_u requires 1 <= u <= {d}, got u={u}")
    masks = _grid_neighbor_masks(pts, d, u)
    return DigitalImage(
        points=pts, dim=d, adjacency=AdjacencyKind.cu(u), neighbor_masks=masks
    )


def build_explicit(n_vertices: int, edges: Iterable[Sequence[int]]) -> DigitalImage:
    """Abstract image on vertices 0..n_vertices-1 with the given edges."""
    if n_vertices < 1:
        raise ValueError("an image needs at least one vertex")
    masks = [0] * n_vertices
    for e in edges:
        a, b = int(e[0]), int(e[1])
        if not (0 <= a < n_vertices and 0 <= b < n_vertices):
            raise BadEdge(f"edge ({a},{b}) references a vertex out of range")
        if a == b:
            raise BadEdge(f"self-loop at vertex {a} is not allowed")
        masks[a] |= 1 << b
        masks[b] |= 1 << a
    return DigitalImage(
        points=None,
        dim=0,
        adjacency=AdjacencyKind.explicit(),
        neighbor_masks=tuple(masks),
    )


CycleIndexing = tuple[int, ...]


def build_cycle(v: int) -> tuple[DigitalImage, CycleIndexing]:
    """Abstract cycle of length v >= 4; returns the image and its circular order.

    Cycles are always built abstractly for uniformity across parities; use
    cycle_grid for a c_1 grid realization of realizable even lengths.
    """
    if v < 4:
        raise BadCycleLength(f"cycles need at least 4 vertices, got {v}")
    edges = [(i, (i + 1) % v) for i in range(v)]
    return build_explicit(v, edges), tuple(range(v))


def cycle_grid(v: int) -> tuple[DigitalImage, CycleIndexing]:
    """c_1 grid realization of an even cycle as a rectangle perimeter.

    Realizable lengths are 4 and even v >= 8; length 6 admits no simple
    closed curve under c_1 and odd lengths admit none at all.
    """
    if v == 4:
        walk = [(0, 0), (0, 1), (1, 1), (1, 0)]
    elif v >= 8 and v % 2 == 0:
        b = (v - 4) // 2
        walk = [(0, y) for y in range(b + 1)]
        walk += [(1, b), (2, b)]
        walk += [(2, y) for y in range(b - 1, -1, -1)]
        walk += [(1, 0)]
    else:
        raise BadCycleLength(
            f"no c_1 rectangle-perimeter realization for length {v}"
        )
    img = build_from_points(walk, 1)
    indexing = tuple(img.point_index[p] for p in walk)
    return img, indexing


def product(
    imgs: Sequence[DigitalImage],
    u: int,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> DigitalImage:
    """Generalized normal product of factor images.

    A product vertex is a tuple of factor vertices; two product vertices are
    adjacent when between 1 and u factor coordinates are adjacent in their
    factor and the remaining coordinates are equal.  When every factor is
    grid-embedded the product is embedded with concatenated coordinates.
    """
    k = len(imgs)
    if k < 1:
        raise ValueError("a product needs at least one factor")
    if not 1 <= u <= k:
        raise BadAdjacency(f"normal product requires 1 <= u <= {k}, got u={u}")
    count = 1
    for f in imgs:
        count *= f.n
        if count > point_budget:
            raise BudgetExceeded(f"product has more than {point_budget} points")
    tuples = tuple(itertools.product(*(range(f.n) for f in imgs)))
    index = {t: i for i, t in enumerate(tuples)}
    masks = [0] * len(tuples)
    positions = list(range(k))
    subsets = [
        s
        for r in range(1, u + 1)
        for s in itertools.combinations(positions, r)
    ]
    for i, t in enumerate(tuples):
        m = 0
        for s in subsets:
            choices = [list(_bits(imgs[j].neighbor_masks[t[j]])) for j in s]
            for combo in itertools.product(*choices):
                q = list(t)
                for j, w in zip(s, combo):
                    q[j] = w
                m |= 1 << index[tuple(q)]
        masks[i] = m
    all_grid = all(f.is_grid for f in imgs)
    points = None
    if all_grid:
        points = tuple(
            tuple(c for j, f in enumerate(imgs) for c in f.points[t[j]])
            for t in tuples
        )
    kind = AdjacencyKind.npu(u, [f.adjacency for f in imgs])
    return DigitalImage(
        points=points,
        dim=sum(f.dim for f in imgs) if all_grid else 0,
        adjacency=kind,
        neighbor_masks=tuple(masks),
        factors=tuple(imgs),
        factor_tuples=tuples,
    )


def induced(img: DigitalImage, mask: SubsetMask) -> tuple[DigitalImage, tuple[int, ...]]:
    """Subimage induced on the masked vertices, plus their ambient indices.

    The induced adjacency keeps exactly the ambient edges between kept
    vertices, which for c_u images coincides with re-applying the c_u rule.
    """
    check_mask(img, mask)
    ids = tuple(_bits(mask))
    if not ids:
        raise ValueError("cannot induce on an empty subset")
    pos = {a: i for i, a in enumerate(ids)}
    masks = []
    for a in ids:
        m = 0
        kept = img.neighbor_masks[a] & mask
        for b in _bits(kept):
            m |= 1 << pos[b]
        masks.append(m)
    points = tuple(img.points[a] for a in ids) if img.points is not None else None
    sub = DigitalImage(
        points=points,
        dim=img.dim,
        adjacency=img.adjacency if points is not None else AdjacencyKind.explicit(),
        neighbor_masks=tuple(masks),
    )
    return sub, ids


# -- metric and queries ----------------------------------------------------


def _all_pairs_distances(img: DigitalImage) -> np.ndarray:
    n = img.n
    if n == 1:
        d = np.zeros((1, 1), dtype=np.uint16)
        d.flags.writeable = False
        return d
    rows, cols = [], []
    for i in range(n):
        for j in _bits(img.neighbor_masks[i]):
            rows.append(i)
            cols.append(j)
    graph = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    dist = shortest_path(graph, method="D", unweighted=True, directed=False)
    out = np.where(np.isinf(dist), INF, dist).astype(np.uint16)
    out.flags.writeable = False
    return out


def metric(img: DigitalImage) -> np.ndarray:
    """Shortest-path metric of the image as a cached uint16 matrix."""
    return img.metric_matrix()


def diameter(img: DigitalImage) -> int:
    return img.diameter_value()


def metric_ball(img: DigitalImage, x: int, m: int) -> SubsetMask:
    """Mask of vertices within distance m of x."""
    if not 0 <= x < img.n:
        raise ValueError(f"vertex {x} out of range")
    row = img.metric_matrix()[x]
    out = 0
    for j in np.flatnonzero(row <= m):
        out |= 1 << int(j)
    return out


def boundary(img: DigitalImage) -> SubsetMask:
    """Vertices with some c_1-adjacent lattice point outside the image.

    Only grid-embedded images have a boundary in this sense.
    """
    if img.points is None:
        raise NotEmbedded("boundary requires a grid-embedded image")
    out = 0
    for i, p in enumerate(img.points):
        for axis in range(img.dim):
            for step in (-1, 1):
                q = list(p)
                q[axis] += step
                if tuple(q) not in img.point_index:
                    out |= 1 << i
                    break
            if out >> i & 1:
                break
    return out


def unique_shortest_path(img: DigitalImage, x: int, y: int) -> list[int] | None:
    """The unique geodesic from x to y as vertex indices, or None if several."""
    if not (0 <= x < img.n and 0 <= y < img.n):
        raise ValueError("vertex index out of range")
    row = img.dist_lists()[x]
    if row[y] >= INF:
        raise Disconnected("vertices lie in different components")
    order = sorted(range(img.n), key=lambda v: (row[v], v))
    count = [0] * img.n
    count[x] = 1
    for v in order:
        if v == x or row[v] >= INF:
            continue
        c = 0
        for p in _bits(img.neighbor_masks[v]):
            if row[p] == row[v] - 1:
                c += count[p]
        count[v] = c
    if count[y] != 1:
        return None
    path = [y]
    cur = y
    while cur != x:
        for p in _bits(img.neighbor_masks[cur]):
            if row[p] == row[cur] - 1 and count[p] > 0:
                cur = p
                break
        path.append(cur)
    path.reverse()
    return path


def is_k_cover(img: DigitalImage, mask: SubsetMask, k: int) -> bool:
    """Every vertex lies within distance k of some vertex of the subset."""
    check_mask(img, mask)
    if k < 0:
        raise ValueError("cover radius must be nonnegative")
    if mask == 0:
        return img.n == 0
    ids = mask_indices(mask)
    dist = img.metric_matrix()
    best = dist[:, ids].min(axis=1)
    return bool((best <= k).all())


def is_dominating(img: DigitalImage, mask: SubsetMask) -> bool:
    """Every vertex equals or is adjacent to some vertex of the subset."""
    return is_k_cover(img, mask, 1)


def leaves(img: DigitalImage) -> SubsetMask:
    out = 0
    for i in range(img.n):
        if img.degree(i) == 1:
            out |= 1 << i
    return out


def is_tree(img: DigitalImage) -> bool:
    return img.is_connected() and img.edge_count == img.n - 1


# -- grid isometries -------------------------------------------------------


def apply_grid_isometry(
    img: DigitalImage,
    *,
    axis_perm: Sequence[int],
    signs: Sequence[int],
    shift: Sequence[int],
) -> tuple[DigitalImage, list[int]]:
    """Apply p'[i] = signs[i] * p[axis_perm[i]] + shift[i] to a c_u grid image.

    Axis permutations, reflections, and translations preserve c_u adjacency,
    so the result is the same image up to relabeling.  Returns the new image
    and the map from old vertex indices to new ones.
    """
    if img.points is None or img.adjacency.kind != "cu":
        raise NotEmbedded("grid isometries apply to c_u grid images")
    d = img.dim
    if sorted(axis_perm) != list(range(d)) or len(signs) != d or len(shift) != d:
        raise ValueError("isometry parameters must match the image dimension")
    if any(s not in (-1, 1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    moved = [
        tuple(signs[i] * p[axis_perm[i]] + shift[i] for i in range(d))
        for p in img.points
    ]
    out = build_from_points(moved, img.adjacency.u, point_budget=img.n)
    vmap = [out.point_index[q] for q in moved]
    return out, vmap


def map_mask(mask: SubsetMask, vmap: Sequence[int]) -> SubsetMask:
    """Push a subset mask through a vertex index map."""
    out = 0
    for i in _bits(mask):
        out |= 1 << vmap[i]
    return out
