"""Maps between digital images: continuity, displacement, search, homotopy.

A map is continuous when adjacent vertices land on equal or adjacent
vertices.  For total maps this is equivalent to being nonexpansive in the
shortest-path metric, which is what the search engine exploits: a partial
assignment is abandoned as soon as two assigned vertices violate
d(f(x), f(y)) <= d(x, y), and candidate sets are narrowed by intersecting
metric balls.  Every completed assignment that survives the pruning is
therefore continuous, and no continuous map is missed.

All searches are deterministic: vertices are assigned in a fixed order
(canonical, or breadth-first from a distinguished subset) and candidate
values are tried in ascending canonical order, so the first witness found
is the first in search order.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import (
    BudgetExceeded,
    Disconnected,
    DomainMismatch,
    NotACycle,
    Unclassifiable,
)
from .image import (
    INF,
    DigitalImage,
    SubsetMask,
    _bits,
    check_mask,
    mask_from_indices,
)

#: Enumeration and search refuse images with more vertices than this.
DEFAULT_MAX_VERTICES = 16

#: Default cap on attempted assignments in a counterexample search.
DEFAULT_NODE_BUDGET = 5_000_000

#: Default cap on maps visited by the homotopy breadth-first search.
DEFAULT_MAX_VISITED = 200_000


@dataclass(frozen=True)
class MapTable:
    """A total map between digital images, stored as an index table."""

    domain: DigitalImage
    codomain: DigitalImage
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.domain.n:
            raise ValueError("table length must equal the domain size")
        if any(not 0 <= v < self.codomain.n for v in self.table):
            raise ValueError("table entry out of codomain range")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def image_mask(self) -> SubsetMask:
        return mask_from_indices(self.table)

    def is_identity(self) -> bool:
        return self.domain == self.codomain and all(
            v == i for i, v in enumerate(self.table)
        )


def identity(img: DigitalImage) -> MapTable:
    return MapTable(img, img, tuple(range(img.n)))


def constant(img: DigitalImage, v: int) -> MapTable:
    return MapTable(img, img, (v,) * img.n)


def from_point_function(
    dom: DigitalImage, cod: DigitalImage, fn: Callable[[tuple], tuple]
) -> MapTable:
    """Build a table from a coordinate-level function on grid images."""
    table = []
    for p in dom.points:
        q = tuple(fn(p))
        if q not in cod.point_index:
            raise ValueError(f"function sends {p} to {q}, outside the codomain")
        table.append(cod.point_index[q])
    return MapTable(dom, cod, tuple(table))


def compose(g: MapTable, f: MapTable) -> MapTable:
    """g after f; the inner codomain must match the outer domain."""
    if f.codomain != g.domain:
        raise DomainMismatch("codomain of the inner map must equal the outer domain")
    return MapTable(f.domain, g.codomain, tuple(g.table[v] for v in f.table))


def is_continuous(f: MapTable) -> bool:
    """Adjacent vertices map to equal or adjacent vertices."""
    dom, cod, t = f.domain, f.codomain, f.table
    for i in range(dom.n):
        ti = t[i]
        star = cod.nstar_mask(ti)
        m = dom.neighbor_masks[i] >> (i + 1) << (i + 1)
        for j in _bits(m):
            if not star >> t[j] & 1:
                return False
    return True


def fixed_points(f: MapTable) -> SubsetMask:
    if f.domain != f.codomain:
        raise DomainMismatch("fixed points require a self-map")
    out = 0
    for i, v in enumerate(f.table):
        if i == v:
            out |= 1 << i
    return out


def displacement(f: MapTable) -> int:
    """Largest distance any vertex moves; requires a connected self-map."""
    if f.domain != f.codomain:
        raise DomainMismatch("displacement requires a self-map")
    if not f.domain.is_connected():
        raise Disconnected("displacement requires a connected image")
    dist = f.domain.dist_lists()
    return max(dist[i][v] for i, v in enumerate(f.table))


def is_n_map(f: MapTable, n: int) -> bool:
    """Continuous self-map moving every vertex at most n."""
    return is_continuous(f) and displacement(f) <= n


def is_n_map_on(f: MapTable, mask: SubsetMask, n: int) -> bool:
    """The restriction of f to the masked set is continuous (under the
    induced adjacency) and moves each of its vertices at most n.

    An empty set restricts vacuously, so the answer is then True.
    """
    if f.domain != f.codomain:
        raise DomainMismatch("restricted displacement requires a self-map")
    check_mask(f.domain, mask)
    img, t = f.domain, f.table
    dist = img.dist_lists()
    ids = list(_bits(mask))
    for a in ids:
        if dist[a][t[a]] > n:
            return False
    for a in ids:
        star = img.nstar_mask(t[a])
        for b in _bits(img.neighbor_masks[a] & mask):
            if b > a and not star >> t[b] & 1:
                return False
    return True


def is_retraction(f: MapTable) -> bool:
    """Continuous self-map fixing every vertex of its image."""
    if f.domain != f.codomain:
        raise DomainMismatch("retractions are self-maps")
    if not is_continuous(f):
        return False
    return all(f.table[v] == v for v in set(f.table))


# -- search engine ---------------------------------------------------------


class _PairSpace:
    """Distance rows of the domain and radius balls of the codomain.

    ball(v, r) is the mask of codomain vertices within distance r of v;
    r may be the INF sentinel, matching everything.
    """

    __slots__ = ("dom", "cod", "dist_dom", "full", "max_r", "balls")

    def __init__(self, dom: DigitalImage, cod: DigitalImage):
        self.dom = dom
        self.cod = cod
        self.dist_dom = dom.dist_lists()
        cod_dist = cod.dist_lists()
        self.full = (1 << cod.n) - 1
        finite = [d for row in cod_dist for d in row if d < INF]
        self.max_r = max(finite) if finite else 0
        balls = []
        for v in range(cod.n):
            by_r = []
            cur = 0
            for r in range(self.max_r + 1):
                for w in range(cod.n):
                    if cod_dist[w][v] == r:
                        cur |= 1 << w
                by_r.append(cur)
            balls.append(by_r)
        self.balls = balls

    def ball(self, v: int, r: int) -> int:
        if r >= INF:
            return self.full
        by_r = self.balls[v]
        return by_r[r] if r <= self.max_r else by_r[self.max_r]


def _assignments(
    space: _PairSpace,
    order: Sequence[int],
    cand: Sequence[int],
    viol: Sequence[int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield all surviving complete assignments in canonical DFS order.

    With viol given, only assignments placing some vertex x on a value in
    viol[x] are yielded, and branches that can no longer do so are cut.
    """
    dist = space.dist_dom
    ball = space.ball
    assign = [0] * space.dom.n

    def rec(pos: int, cand: list[int], violated: bool) -> Iterator[tuple[int, ...]]:
        if pos == len(order):
            yield tuple(assign)
            return
        x = order[pos]
        rest = order[pos + 1 :]
        dx = dist[x]
        for v in _bits(cand[x]):
            assign[x] = v
            vio = violated or (viol is not None and bool(viol[x] >> v & 1))
            nc = list(cand)
            ok = True
            for y in rest:
                ny = nc[y] & ball(v, dx[y])
                if not ny:
                    ok = False
                    break
                nc[y] = ny
            if not ok:
                continue
            if viol is not None and not vio:
                if not any(nc[y] & viol[y] for y in rest):
                    continue
            yield from rec(pos + 1, nc, vio)

    return rec(0, list(cand), False)


class _CapHit(Exception):
    pass


@dataclass
class _BranchResult:
    status: str  # "witness" | "exhausted" | "truncated"
    table: tuple[int, ...] | None
    nodes: int  # attempted assignments; equals the witness index on a hit


def _first_witness(
    space: _PairSpace,
    order: Sequence[int],
    cand: Sequence[int],
    viol: Sequence[int],
    cap: int,
) -> _BranchResult:
    """Budgeted depth-first search for the first violating assignment."""
    dist = space.dist_dom
    ball = space.ball
    assign = [0] * space.dom.n
    nodes = 0

    def rec(pos: int, cand: list[int], violated: bool) -> tuple[int, ...] | None:
        nonlocal nodes
        if pos == len(order):
            return tuple(assign) if violated else None
        x = order[pos]
        rest = order[pos + 1 :]
        dx = dist[x]
        for v in _bits(cand[x]):
            nodes += 1
            if nodes > cap:
                raise _CapHit
            assign[x] = v
            vio = violated or bool(viol[x] >> v & 1)
            nc = list(cand)
            ok = True
            for y in rest:
                ny = nc[y] & ball(v, dx[y])
                if not ny:
                    ok = False
                    break
                nc[y] = ny
            if not ok:
                continue
            if not vio and not any(nc[y] & viol[y] for y in rest):
                continue
            hit = rec(pos + 1, nc, vio)
            if hit is not None:
                return hit
        return None

    try:
        w = rec(0, list(cand), False)
    except _CapHit:
        return _BranchResult("truncated", None, nodes)
    if w is None:
        return _BranchResult("exhausted", None, nodes)
    return _BranchResult("witness", w, nodes)


@dataclass
class SearchOutcome:
    """Result of a counterexample search.

    status is "witness" (violating map found), "exhausted" (none exists),
    or "budget" (node budget hit first).  nodes counts attempted
    assignments, accumulated in deterministic branch order, so outcomes do
    not depend on how branches were scheduled.
    """

    status: str
    witness: MapTable | None
    nodes: int

    @property
    def decided(self) -> bool:
        return self.status != "budget"


def _bfs_order_from(img: DigitalImage, mask: SubsetMask) -> list[int]:
    """Vertices sorted by breadth-first distance from the masked set,
    ties broken by canonical index.  An empty set gives canonical order."""
    da = [INF] * img.n
    queue = deque()
    for a in _bits(mask):
        da[a] = 0
        queue.append(a)
    while queue:
        x = queue.popleft()
        for y in _bits(img.neighbor_masks[x]):
            if da[y] == INF:
                da[y] = da[x] + 1
                queue.append(y)
    return sorted(range(img.n), key=lambda x: (da[x], x))


def run_counterexample_search(
    img: DigitalImage,
    subset: SubsetMask,
    m: int,
    n: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> SearchOutcome:
    """Search for a continuous self-map whose restriction to the subset
    moves each subset vertex at most m while some vertex moves more than n.

    The search assigns vertices breadth-first from the subset and splits on
    the first vertex's candidate values; with threads > 1 the top-level
    branches run concurrently and are merged in branch order, so verdict,
    witness, and node count are independent of the schedule.
    """
    check_mask(img, subset)
    if m < 0 or n < 0:
        raise ValueError("displacement bounds must be nonnegative")
    if img.n > max_vertices:
        raise BudgetExceeded(
            f"search on {img.n} vertices exceeds the {max_vertices}-vertex cap"
        )
    if not img.is_connected():
        raise Disconnected("counterexample search requires a connected image")
    space = _PairSpace(img, img)
    order = _bfs_order_from(img, subset)
    cand0 = [space.full] * img.n
    for a in _bits(subset):
        cand0[a] = space.ball(a, m)
    viol = [space.full & ~space.ball(x, n) for x in range(img.n)]
    if not any(cand0[x] & viol[x] for x in range(img.n)):
        return SearchOutcome("exhausted", None, 0)

    x0 = order[0]
    roots = list(_bits(cand0[x0]))

    def run_branch(v0: int) -> _BranchResult:
        cand = list(cand0)
        cand[x0] = 1 << v0
        return _first_witness(space, order, cand, viol, node_budget)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results: Iterator[_BranchResult] = iter(list(pool.map(run_branch, roots)))
    else:
        results = (run_branch(v0) for v0 in roots)

    cum = 0
    for br in results:
        if br.status == "witness":
            if cum + br.nodes <= node_budget:
                return SearchOutcome(
                    "witness", MapTable(img, img, br.table), cum + br.nodes
                )
            return SearchOutcome("budget", None, node_budget)
        if br.status == "truncated":
            return SearchOutcome("budget", None, node_budget)
        cum += br.nodes
        if cum > node_budget:
            return SearchOutcome("budget", None, node_budget)
    return SearchOutcome("exhausted", None, cum)


def search_counterexample(
    img: DigitalImage,
    subset: SubsetMask,
    m: int,
    n: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> MapTable | None:
    """First counterexample in search order, None if none exists.

    Raises BudgetExceeded when the node budget ran out before the space
    was exhausted; that outcome is deliberately distinct from None.
    """
    out = run_counterexample_search(
        img,
        subset,
        m,
        n,
        node_budget=node_budget,
        threads=threads,
        max_vertices=max_vertices,
    )
    if out.status == "budget":
        raise BudgetExceeded(
            f"search stopped after {out.nodes} nodes without exhausting the space"
        )
    return out.witness


def iter_counterexamples(
    img: DigitalImage,
    subset: SubsetMask,
    m: int,
    n: int,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> Iterator[MapTable]:
    """All counterexamples for the query, in deterministic search order."""
    check_mask(img, subset)
    if img.n > max_vertices:
        raise BudgetExceeded(
            f"search on {img.n} vertices exceeds the {max_vertices}-vertex cap"
        )
    if not img.is_connected():
        raise Disconnected("counterexample search requires a connected image")
    space = _PairSpace(img, img)
    order = _bfs_order_from(img, subset)
    cand0 = [space.full] * img.n
    for a in _bits(subset):
        cand0[a] = space.ball(a, m)
    viol = [space.full & ~space.ball(x, n) for x in range(img.n)]
    for table in _assignments(space, order, cand0, viol):
        yield MapTable(img, img, table)


def enumerate_continuous_self_maps(
    img: DigitalImage, *, max_vertices: int = DEFAULT_MAX_VERTICES
) -> Iterator[MapTable]:
    """Every continuous self-map exactly once, in lexicographic table order."""
    yield from continuous_maps_between(img, img, max_vertices=max_vertices)


def continuous_maps_between(
    dom: DigitalImage,
    cod: DigitalImage,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> Iterator[MapTable]:
    """Every continuous map from dom to cod, in lexicographic table order."""
    if dom.n > max_vertices or cod.n > max_vertices:
        raise BudgetExceeded(
            f"enumeration beyond {max_vertices} vertices is refused"
        )
    space = _PairSpace(dom, cod)
    cand = [space.full] * dom.n
    for table in _assignments(space, range(dom.n), cand):
        yield MapTable(dom, cod, table)


# -- homotopy --------------------------------------------------------------


def _check_homotopy_args(f: MapTable, g: MapTable) -> None:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DomainMismatch("homotopy compares maps between the same images")
    if not (is_continuous(f) and is_continuous(g)):
        raise ValueError("homotopy is defined for continuous maps")


def _one_step_neighbors(space: _PairSpace, table: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    # One homotopy step: every vertex may move to an equal or adjacent value,
    # and the result must again be continuous.
    cod = space.cod
    cand = [cod.nstar_mask(v) for v in table]
    return _assignments(space, range(space.dom.n), cand)


def is_homotopic(
    f: MapTable,
    g: MapTable,
    *,
    max_visited: int = DEFAULT_MAX_VISITED,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> bool:
    """Whether a chain of one-step deformations links f to g.

    Breadth-first search over continuous maps, where one step changes every
    vertex by at most one adjacency hop.  Visited maps are memoized by
    table; exceeding max_visited raises BudgetExceeded.
    """
    _check_homotopy_args(f, g)
    if f.domain.n > max_vertices:
        raise BudgetExceeded(
            f"homotopy search beyond {max_vertices} vertices is refused"
        )
    if f.table == g.table:
        return True
    space = _PairSpace(f.domain, f.codomain)
    target = g.table
    visited = {f.table}
    queue = deque([f.table])
    while queue:
        cur = queue.popleft()
        for nb in _one_step_neighbors(space, cur):
            if nb == target:
                return True
            if nb not in visited:
                visited.add(nb)
                if len(visited) > max_visited:
                    raise BudgetExceeded(
                        f"homotopy search visited more than {max_visited} maps"
                    )
                queue.append(nb)
    return False


def is_rigid(
    img: DigitalImage, *, max_vertices: int = DEFAULT_MAX_VERTICES
) -> bool:
    """The homotopy class of the identity contains only the identity.

    Homotopy classes are the connected components of the one-step map
    graph, so the identity sits alone exactly when its one-step
    neighborhood contains nothing else; the breadth-first search collapses
    to a single expansion.
    """
    if img.n > max_vertices:
        raise BudgetExceeded(
            f"rigidity check beyond {max_vertices} vertices is refused"
        )
    ident = tuple(range(img.n))
    space = _PairSpace(img, img)
    for nb in _one_step_neighbors(space, ident):
        if nb != ident:
            return False
    return True


def only_identity_is_1map(
    img: DigitalImage, *, max_vertices: int = DEFAULT_MAX_VERTICES
) -> bool:
    """No continuous self-map other than the identity moves every vertex
    by at most one step."""
    if img.n > max_vertices:
        raise BudgetExceeded(
            f"enumeration beyond {max_vertices} vertices is refused"
        )
    space = _PairSpace(img, img)
    cand = [img.nstar_mask(x) for x in range(img.n)]
    ident = tuple(range(img.n))
    for table in _assignments(space, range(img.n), cand):
        if table != ident:
            return False
    return True


# -- cycle self-maps -------------------------------------------------------

NONSURJECTIVE = "nonsurjective"
ROTATION = "rotation"
FLIP_ROTATION = "flip_rotation"


@dataclass(frozen=True)
class CycleMapClass:
    """Class of a continuous cycle self-map relative to the derived
    circular indexing: nonsurjective, a rotation by d, or a reflection
    composed with a rotation by d (position i goes to d - i)."""

    kind: str
    d: int | None = None


def cycle_indexing(img: DigitalImage) -> tuple[int, ...]:
    """Circular vertex order of a cycle image, derived deterministically.

    Starts at vertex 0 and walks toward its lowest-index neighbor.
    """
    if img.n < 4:
        raise NotACycle("cycles have at least 4 vertices")
    if not img.is_connected() or any(img.degree(i) != 2 for i in range(img.n)):
        raise NotACycle("image is not connected and 2-regular")
    order = [0]
    prev, cur = -1, 0
    for _ in range(img.n - 1):
        nxt = min(w for w in _bits(img.neighbor_masks[cur]) if w != prev)
        order.append(nxt)
        prev, cur = cur, nxt
    if not img.adjacent(order[-1], order[0]):
        raise NotACycle("walk did not close into a cycle")
    return tuple(order)


def rotation(img: DigitalImage, d: int) -> MapTable:
    """Rotation by d positions along the derived circular indexing."""
    idx = cycle_indexing(img)
    v = img.n
    table = [0] * v
    for i in range(v):
        table[idx[i]] = idx[(i + d) % v]
    return MapTable(img, img, tuple(table))


def flip_map(img: DigitalImage) -> MapTable:
    """Reflection fixing position 0: position i goes to -i."""
    idx = cycle_indexing(img)
    v = img.n
    table = [0] * v
    for i in range(v):
        table[idx[i]] = idx[(-i) % v]
    return MapTable(img, img, tuple(table))


def classify_cycle_map(img: DigitalImage, f: MapTable) -> CycleMapClass:
    """Classify a continuous cycle self-map.

    Surjective continuous self-maps of a cycle are exactly its graph
    automorphisms, so every map is nonsurjective, a rotation, or a flipped
    rotation; anything else raises Unclassifiable.
    """
    idx = cycle_indexing(img)
    if f.domain != img or f.codomain != img:
        raise DomainMismatch("map is not a self-map of the given cycle")
    if not is_continuous(f):
        raise ValueError("cycle classification applies to continuous maps")
    v = img.n
    if len(set(f.table)) < v:
        return CycleMapClass(NONSURJECTIVE)
    pos = {vert: i for i, vert in enumerate(idx)}
    a = pos[f.table[idx[0]]]
    nxt = pos[f.table[idx[1]]]
    if nxt == (a + 1) % v:
        if all(f.table[idx[i]] == idx[(a + i) % v] for i in range(v)):
            return CycleMapClass(ROTATION, a)
    elif nxt == (a - 1) % v:
        if all(f.table[idx[i]] == idx[(a - i) % v] for i in range(v)):
            return CycleMapClass(FLIP_ROTATION, a)
    raise Unclassifiable("surjective cycle self-map is not an automorphism")
