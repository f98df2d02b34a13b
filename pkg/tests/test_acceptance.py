"""Acceptance gate: one test and one [PASS]/[FAIL] line per criterion.

Each criterion is stated as behavior and checked at full strength; where a
stated expectation is not actually attainable the test still asserts it
and is allowed to fail, with the finding explained in the assertion
message rather than weakened or hidden.
"""

from __future__ import annotations

import itertools
import random
import time

import networkx as nx
import pytest

import oracle
from digtopo.cli import run
from digtopo.image import (
    apply_grid_isometry,
    build_box,
    build_cycle,
    build_explicit,
    build_from_points,
    full_mask,
    leaves,
    map_mask,
    mask_from_indices,
    mask_from_points,
    mask_indices,
    metric,
)
from digtopo.maps import (
    FLIP_ROTATION,
    NONSURJECTIVE,
    ROTATION,
    classify_cycle_map,
    displacement,
    enumerate_continuous_self_maps,
    from_point_function,
    is_continuous,
    is_n_map,
    is_n_map_on,
    iter_counterexamples,
)
from digtopo.limiting import (
    cover_displacement_bound,
    cycle_triple_bound,
    is_freezing,
    is_limiting,
    is_minimal_limiting,
    is_s_cold,
    retract_displacement_bound,
)
from digtopo.metrics import (
    hausdorff,
    metric_of_continuity,
    subset_diameter_ambient,
    subset_diameter_induced,
)


def _gate(capsys, number: int, title: str, problems: list[str],
          elapsed: float, limit: float):
    if elapsed > limit:
        problems.append(f"took {elapsed:.1f}s, limit {limit:.0f}s")
    tag = "PASS" if not problems else "FAIL"
    with capsys.disabled():
        print(f"\n[{tag}] criterion {number}: {title} ({elapsed:.1f}s)")
    assert not problems, f"criterion {number}: " + "; ".join(problems)


def test_criterion_01_square_corner_queries(write_json, capsys):
    """The explicit corner-respecting 2-map is validated, and the corner
    set of the 3x3 square under full diagonal adjacency fails (1,1) but
    holds (0,1), both through the command line."""
    started = time.perf_counter()
    problems = []
    sq = build_box([(0, 2), (0, 2)], 2)
    corners = mask_from_points(sq, [(0, 0), (0, 2), (2, 0), (2, 2)])
    moves = {(0, 0): (0, 1), (2, 0): (2, 1), (1, 0): (1, 2)}
    f = from_point_function(sq, sq, lambda p: moves.get(p, p))
    if not is_continuous(f):
        problems.append("explicit map not continuous")
    if not (is_n_map(f, 2) and not is_n_map(f, 1)):
        problems.append("explicit map is not exactly a 2-map")
    d = metric(sq)
    i = sq.point_index[(1, 0)]
    if d[i, f.table[i]] != 2:
        problems.append("displacement 2 not attained at (1,0)")
    if not is_n_map_on(f, corners, 1):
        problems.append("explicit map does not keep corners within 1")
    img = write_json(
        "sq.json",
        {"constructor": "box", "intervals": [[0, 2], [0, 2]], "adjacency": "c2"},
    )
    sub = write_json("corners.json", {"points": [[0, 0], [0, 2], [2, 0], [2, 2]]})
    code = run(["verify-limiting", "--image", img, "--set", sub, "--m", "1", "--n", "1"])
    if code != 1:
        problems.append(f"(1,1) query exited {code}, want 1")
    v = is_limiting(sq, corners, 1, 1)
    if v.witness is None or displacement(v.witness) < 2:
        problems.append("(1,1) witness does not move a point by 2")
    code = run(["verify-limiting", "--image", img, "--set", sub, "--m", "0", "--n", "1"])
    if code != 0:
        problems.append(f"(0,1) query exited {code}, want 0")
    capsys.readouterr()
    _gate(capsys, 1, "square corner-set queries", problems, time.perf_counter() - started, 5.0)


def test_criterion_02_rectangle_corners_freeze(capsys):
    """Corner sets of [0,k]x[0,j] under one-step axis adjacency are
    minimal freezing sets for k,j up to 3."""
    started = time.perf_counter()
    problems = []
    for k in (1, 2, 3):
        for j in (1, 2, 3):
            box_started = time.perf_counter()
            img = build_box([(0, k), (0, j)], 1)
            corners = mask_from_points(
                img, [(x, y) for x in (0, k) for y in (0, j)]
            )
            v = is_minimal_limiting(img, corners, 0, 0)
            if v.holds is not True:
                problems.append(f"[0,{k}]x[0,{j}] corners not minimal freezing")
            if time.perf_counter() - box_started > 30:
                problems.append(f"[0,{k}]x[0,{j}] exceeded 30s")
    _gate(capsys, 2, "rectangle corners freeze minimally", problems,
          time.perf_counter() - started, 300.0)


def test_criterion_03_interval_endpoints(capsys):
    """Endpoints of [0,b] are (m,m)-limiting for m <= b, minimally
    exactly when m < b."""
    started = time.perf_counter()
    problems = []
    for b in (1, 2, 3, 4, 5):
        img = build_box([(0, b)], 1)
        ends = mask_from_points(img, [(0,), (b,)])
        for m in range(b + 1):
            v = is_minimal_limiting(img, ends, m, m)
            want_minimal = b > m
            base = is_limiting(img, ends, m, m)
            if base.holds is not True:
                problems.append(f"b={b} m={m}: endpoints not ({m},{m})-limiting")
            if v.holds is not want_minimal:
                problems.append(f"b={b} m={m}: minimality {v.holds}, want {want_minimal}")
    _gate(capsys, 3, "interval endpoint profiles", problems, time.perf_counter() - started, 1.0)


def _all_trees():
    yield build_explicit(1, [])
    for order in range(2, 9):
        for g in nx.nonisomorphic_trees(order):
            yield build_explicit(order, sorted(tuple(sorted(e)) for e in g.edges))


def test_criterion_04_tree_leaf_sets(capsys):
    """Leaf sets of trees up to 8 vertices are (1,1)-limiting, minimal
    except for the 2-vertex tree, and deleting a leaf is always defeated
    by the map that slides the deleted leaf two steps into the tree."""
    started = time.perf_counter()
    problems = []
    count = 0
    for img in _all_trees():
        count += 1
        leaf_mask = leaves(img)
        v = is_limiting(img, leaf_mask, 1, 1)
        if v.holds is not True:
            problems.append(f"tree #{count} (n={img.n}): leaves not (1,1)-limiting")
            continue
        minimal = is_minimal_limiting(img, leaf_mask, 1, 1)
        want_minimal = img.n != 2
        if minimal.holds is not want_minimal:
            problems.append(
                f"tree #{count} (n={img.n}): minimality {minimal.holds}, "
                f"want {want_minimal}"
            )
        if img.n < 3:
            continue
        leaf_ids = mask_indices(leaf_mask)
        drop = leaf_ids[0]
        rest = leaf_mask & ~(1 << drop)
        neighbor = next(iter(mask_indices(img.neighbors_of(drop))))
        two_out = next(
            w for w in mask_indices(img.neighbors_of(neighbor)) if w != drop
        )
        table = list(range(img.n))
        table[drop] = two_out
        found = any(
            w.table == tuple(table) for w in iter_counterexamples(img, rest, 1, 1)
        )
        if not found:
            problems.append(
                f"tree #{count} (n={img.n}): slide-two witness not produced"
            )
    if count != 48:
        problems.append(f"expected 48 trees, saw {count}")
    _gate(capsys, 4, "tree leaf sets", problems, time.perf_counter() - started, 60.0)


def test_criterion_05_cycle_censuses(capsys):
    """Every continuous cycle self-map for lengths 4..10 classifies as
    nonsurjective, a rotation, or a flipped rotation; on even lengths
    every nonsurjective map pinches an antipodal pair and moves some
    point at least (v-2)/4."""
    started = time.perf_counter()
    problems = []
    totals = {4: 84, 5: 265, 6: 858, 7: 2765, 8: 8872, 9: 28269, 10: 89550}
    for v in range(4, 11):
        img, _ = build_cycle(v)
        d = metric(img)
        counts = {NONSURJECTIVE: 0, ROTATION: 0, FLIP_ROTATION: 0}
        for f in enumerate_continuous_self_maps(img):
            kind = classify_cycle_map(img, f).kind
            counts[kind] += 1
            if v % 2 == 0 and kind == NONSURJECTIVE:
                half = v // 2
                if not any(
                    d[f.table[u], f.table[(u + half) % v]] <= 1 for u in range(v)
                ):
                    problems.append(f"v={v}: no pinched antipodal pair {f.table}")
                if 4 * displacement(f) < v - 2:
                    problems.append(f"v={v}: displacement too small {f.table}")
        if counts[ROTATION] != v or counts[FLIP_ROTATION] != v:
            problems.append(f"v={v}: surjective counts {counts}")
        if sum(counts.values()) != totals[v]:
            problems.append(f"v={v}: census total {sum(counts.values())}")
    _gate(capsys, 5, "cycle self-map censuses", problems, time.perf_counter() - started, 60.0)


def test_criterion_06_cycle_triple_bound(capsys):
    """The equally spaced triple on the 12-cycle is expected to be
    (m,m)-limiting for every m up to its computed bound of 2.  The m=2
    case is asserted as stated even though exhaustive search refutes it;
    see the assertion message for the refuting map."""
    started = time.perf_counter()
    problems = []
    img, _ = build_cycle(12)
    triple = (0, 4, 8)
    subset = mask_from_indices(triple)
    bound = cycle_triple_bound(img, *triple)
    if bound != 2:
        problems.append(f"triple bound {bound}, want 2")
    d = metric(img)
    for m in range(bound + 1):
        v = is_limiting(img, subset, m, m)
        if v.holds is not True:
            w = v.witness
            detail = ""
            if w is not None:
                anchors = [int(d[a, w.table[a]]) for a in triple]
                detail = (
                    f" refuted by {w.table}: continuous, anchor displacements "
                    f"{anchors} all <= {m}, but overall displacement "
                    f"{displacement(w)}"
                )
            problems.append(f"({m},{m}) expected to hold;{detail}")
    _gate(capsys, 6, "12-cycle triple at its bound", problems,
          time.perf_counter() - started, 60.0)


def test_criterion_07_diameter_and_metric_chain(capsys):
    """Over every continuous self-map of a small fixture family: the
    image diameter drops by at most twice the displacement (both
    diameter conventions), and Hausdorff <= metric of continuity <=
    displacement."""
    started = time.perf_counter()
    problems = []
    fixtures = [
        build_box([(0, 2)], 1),
        build_box([(0, 1), (0, 2)], 1),
        build_cycle(6)[0],
        build_from_points(
            [(0, 0), (1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (3, 1)], 1
        ),
        build_box([(0, 1), (0, 1)], 2),
    ]
    for img in fixtures:
        allm = full_mask(img)
        dx = subset_diameter_ambient(img, allm)
        cache = {}
        for f in enumerate_continuous_self_maps(img):
            m = displacement(f)
            image = f.image_mask()
            if image not in cache:
                cache[image] = (
                    subset_diameter_ambient(img, image),
                    subset_diameter_induced(img, image),
                    hausdorff(img, allm, image),
                    metric_of_continuity(img, allm, image),
                )
            da, di, h, delta = cache[image]
            if da < dx - 2 * m or di < dx - 2 * m:
                problems.append(f"diameter drop violated by {f.table}")
            if not h <= delta <= m:
                problems.append(f"metric chain violated by {f.table}")
    _gate(capsys, 7, "diameter drop and metric chain", problems,
          time.perf_counter() - started, 60.0)


def test_criterion_08_equivalence_suite(capsys):
    """On every labeled connected graph with at most 4 vertices the
    pruned enumeration equals the unpruned filter exactly, and the
    freezing / cold verdicts match their limiting reformulations."""
    started = time.perf_counter()
    problems = []
    graphs = 0
    for n in range(1, 5):
        for edges in oracle.connected_graphs(n):
            graphs += 1
            img = build_explicit(n, edges)
            mine = {f.table for f in enumerate_continuous_self_maps(img)}
            naive = oracle.continuous_self_maps(img)
            if mine != naive:
                problems.append(f"map space mismatch on {n} vertices {edges}")
            ids = list(range(n))
            for size in range(n + 1):
                subset = mask_from_indices(ids[:size])
                if is_freezing(img, subset).holds != oracle.is_freezing(
                    img, ids[:size]
                ):
                    problems.append(f"freezing mismatch {edges} size {size}")
                for s in (1, 2):
                    lib = is_s_cold(img, subset, s).holds
                    ref = oracle.is_s_cold(img, ids[:size], s)
                    if lib != ref:
                        problems.append(f"{s}-cold mismatch {edges} size {size}")
    if graphs != 44:
        problems.append(f"expected 44 graphs, saw {graphs}")
    _gate(capsys, 8, "brute-force equivalence suite", problems,
          time.perf_counter() - started, 60.0)


def test_criterion_09_isometry_invariance(capsys):
    """One hundred random axis permutations, reflections, and shifts
    leave every fixture verdict, including minimality, unchanged."""
    started = time.perf_counter()
    problems = []
    rng = random.Random(20260823)
    sq = build_box([(0, 2), (0, 2)], 2)
    sq_corners = mask_from_points(sq, [(0, 0), (0, 2), (2, 0), (2, 2)])
    iv = build_box([(0, 3)], 1)
    iv_ends = mask_from_points(iv, [(0,), (3,)])
    tree = build_from_points([(0, 0), (1, 0), (2, 0), (1, 1)], 1)
    tree_leaves = leaves(tree)
    queries = [
        (sq, sq_corners, 1, 1, False),
        (sq, sq_corners, 0, 1, False),
        (sq, sq_corners, 0, 1, True),
        (iv, iv_ends, 2, 2, True),
        (tree, tree_leaves, 1, 1, True),
    ]
    base = []
    for img, subset, m, n, minimal in queries:
        fn = is_minimal_limiting if minimal else is_limiting
        base.append(fn(img, subset, m, n).holds)
    trials = 0
    while trials < 100:
        for qi, (img, subset, m, n, minimal) in enumerate(queries):
            if trials >= 100:
                break
            trials += 1
            dim = img.dim
            perm = list(range(dim))
            rng.shuffle(perm)
            signs = [rng.choice((1, -1)) for _ in range(dim)]
            shift = [rng.randint(-6, 6) for _ in range(dim)]
            moved, vmap = apply_grid_isometry(
                img, axis_perm=perm, signs=signs, shift=shift
            )
            fn = is_minimal_limiting if minimal else is_limiting
            got = fn(moved, map_mask(subset, vmap), m, n).holds
            if got != base[qi]:
                problems.append(
                    f"query {qi} changed under perm={perm} signs={signs} "
                    f"shift={shift}: {got} vs {base[qi]}"
                )
    _gate(capsys, 9, "isometry invariance, 100 trials", problems,
          time.perf_counter() - started, 120.0)


def test_criterion_10_bound_arithmetic_and_fold_witness(capsys):
    """Displacement bounds m+2k (covering) and n+2h+eps (retract) are
    computed literally, and the fold map x -> |x| on [-1,1] surfaces as
    a witness that the covering bound cannot improve to m+1."""
    started = time.perf_counter()
    problems = []
    for m, k in itertools.product(range(4), range(4)):
        if cover_displacement_bound(m, k) != m + 2 * k:
            problems.append(f"cover bound wrong at {(m, k)}")
    for n, h, eps in itertools.product(range(3), range(3), range(3)):
        if retract_displacement_bound(n, h, eps) != n + 2 * h + eps:
            problems.append(f"retract bound wrong at {(n, h, eps)}")
    img = build_from_points([(-1,), (0,), (1,)], 1)
    center = mask_from_points(img, [(0,)])
    if is_limiting(img, center, 0, cover_displacement_bound(0, 1)).holds is not True:
        problems.append("(0, m+2k) fails on the dominated interval")
    fold = from_point_function(img, img, lambda p: (abs(p[0]),))
    witnesses = [w.table for w in iter_counterexamples(img, center, 0, 1)]
    if fold.table not in witnesses:
        problems.append("fold map not produced as a witness against (0,1)")
    if not (is_n_map(fold, 2) and not is_n_map(fold, 1)):
        problems.append("fold map is not exactly a 2-map")
    _gate(capsys, 10, "displacement bound arithmetic and fold witness", problems,
          time.perf_counter() - started, 60.0)
