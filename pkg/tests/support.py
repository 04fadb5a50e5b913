"""Shared oracles and random generators for the test suite.

The oracles here deliberately avoid the library's own decision paths: the
configuration oracle enumerates every ordered boundary triple and verifies
membership sample by sample, and the planner oracle is a plain flood fill
over a boolean grid.
"""

from fractions import Fraction

from conicbundle import (
    ConicModel,
    IntervalConfig,
    Moebius,
    Rect,
    Region,
    find_fiber_point,
    moebius_from_triples,
)
from conicbundle.errors import InvalidTriple

# ---------------------------------------------------------------------------
# Configuration-equivalence oracle: try every ordered boundary triple.


def _verify_by_membership(m, c1, c2):
    """Permutation nu if m maps c1 onto c2, decided by boundary bijection
    plus one interior membership sample per arc."""
    b1 = c1.boundary_points()
    b2 = set(c2.boundary_points())
    if {m.apply(p) for p in b1} != b2:
        return None
    nu = []
    for arc in c1.intervals:
        image_sample = m.apply(arc.interior_point())
        hit = [j for j, target in enumerate(c2.intervals) if target.contains(image_sample)]
        if len(hit) != 1:
            return None
        nu.append(hit[0])
    if sorted(nu) != list(range(c1.r)):
        return None
    return tuple(nu)


def oracle_equiv_all(c1, c2):
    """Every (witness, permutation) pair found by brute force over triples."""
    if c1.r != c2.r:
        return []
    if c1.r == 0:
        return [(Moebius.identity(), ())]
    found = []
    seen = set()
    b1 = c1.boundary_points()
    b2 = c2.boundary_points()
    if c1.r == 1:
        i1 = c1.intervals[0].interior_point()
        i2 = c2.intervals[0].interior_point()
        candidates = [(b2[0], b2[1], i2), (b2[1], b2[0], i2)]
        sources = (b1[0], b1[1], i1)
        for cand in candidates:
            try:
                m = moebius_from_triples(*sources, *cand)
            except InvalidTriple:
                continue
            nu = _verify_by_membership(m, c1, c2)
            if nu is not None and (m.a, m.b, m.c, m.d) not in seen:
                seen.add((m.a, m.b, m.c, m.d))
                found.append((m, nu))
        return found
    for t0 in b2:
        for t1 in b2:
            if t1 == t0:
                continue
            for t2 in b2:
                if t2 == t0 or t2 == t1:
                    continue
                m = moebius_from_triples(b1[0], b1[1], b1[2], t0, t1, t2)
                key = (m.a, m.b, m.c, m.d)
                if key in seen:
                    continue
                nu = _verify_by_membership(m, c1, c2)
                if nu is not None:
                    seen.add(key)
                    found.append((m, nu))
    return found


def oracle_equiv(c1, c2, nu=None):
    for m, found in oracle_equiv_all(c1, c2):
        if nu is None or found == tuple(nu):
            return m, found
    return None


def witness_maps_config(m, c1, c2, nu):
    """Exact re-validation of a claimed witness, endpoint by endpoint."""
    for i, arc in enumerate(c1.intervals):
        target = c2.intervals[nu[i]]
        images = {m.apply(arc.start), m.apply(arc.end)}
        if images != {target.start, target.end}:
            return False
        if not target.contains(m.apply(arc.interior_point())):
            return False
    return True


# ---------------------------------------------------------------------------
# Random generators.


def random_config(rng, r, low=-60, high=60, dens=(1, 1, 1, 2, 2, 3, 4, 5, 6)):
    """A configuration of r disjoint finite intervals with random rational
    boundaries."""
    while True:
        points = set()
        while len(points) < 2 * r:
            points.add(Fraction(rng.randint(low, high), rng.choice(dens)))
        ordered = sorted(points)
        pairs = [(ordered[2 * i], ordered[2 * i + 1]) for i in range(r)]
        return IntervalConfig.from_rat_pairs(pairs)


def random_model(rng, r, low=-8, high=8):
    roots = set()
    while len(roots) < 2 * r:
        roots.add(rng.randint(low, high))
    return ConicModel(tuple(sorted(Fraction(a) for a in roots)))


def random_moebius(rng, size=6):
    while True:
        a, b, c, d = (rng.randint(-size, size) for _ in range(4))
        if a * d - b * c != 0:
            return Moebius(a, b, c, d)


def model_fibers_with_points(model, want, skip=()):
    """Distinct fiber parameters carrying rational points, by ladder search."""
    out = []
    per_interval = -(-want // model.r) + 1
    for i in range(model.r):
        lo, hi = model.roots[2 * i], model.roots[2 * i + 1]
        found_here = 0
        for den in (2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 16):
            if found_here >= per_interval:
                break
            for num in range(1, den):
                x = lo + Fraction(num, den) * (hi - lo)
                if x in skip or any(p.x == x for p in out):
                    continue
                point = find_fiber_point(model, x)
                if point is not None and point.y ** 2 + point.z ** 2 > 0:
                    out.append(point)
                    found_here += 1
                    break
    return out[:want]


# ---------------------------------------------------------------------------
# Planner oracle: flood fill on the cut-plus-midpoint grid.


def _oracle_grid(cuts):
    values = sorted(set(Fraction(c) for c in cuts))
    grid = []
    for i, v in enumerate(values):
        grid.append(v)
        if i + 1 < len(values):
            grid.append((v + values[i + 1]) / 2)
    return grid


def _inside_rects(rects, p):
    return any(r[0] <= p[0] <= r[1] and r[2] <= p[1] <= r[3] for r in rects)


def grid_reachable(region, start, end, forbidden_x=(), forbidden_y=()):
    """Flood-fill reachability over a grid finer than every coordinate gap."""
    rects = [(r.x0, r.x1, r.y0, r.y1) for r in region.rects]
    start = (Fraction(start[0]), Fraction(start[1]))
    end = (Fraction(end[0]), Fraction(end[1]))
    fx = {Fraction(v) for v in forbidden_x}
    fy = {Fraction(v) for v in forbidden_y}
    xs = _oracle_grid([r[0] for r in rects] + [r[1] for r in rects]
                      + list(fx) + [start[0], end[0]])
    ys = _oracle_grid([r[2] for r in rects] + [r[3] for r in rects]
                      + list(fy) + [start[1], end[1]])
    inside = [[_inside_rects(rects, (x, y)) for y in ys] for x in xs]
    six, siy = xs.index(start[0]), ys.index(start[1])
    eix, eiy = xs.index(end[0]), ys.index(end[1])
    if not inside[six][siy] or not inside[eix][eiy]:
        return False
    frontier = [(six, siy)]
    seen = {(six, siy)}
    while frontier:
        i, j = frontier.pop()
        if (i, j) == (eix, eiy):
            return True
        steps = []
        if i + 1 < len(xs):
            steps.append((i + 1, j, "h"))
        if i - 1 >= 0:
            steps.append((i - 1, j, "h"))
        if j + 1 < len(ys):
            steps.append((i, j + 1, "v"))
        if j - 1 >= 0:
            steps.append((i, j - 1, "v"))
        for ni, nj, axis in steps:
            if (ni, nj) in seen or not inside[ni][nj]:
                continue
            if axis == "v" and xs[i] in fx:
                continue
            if axis == "h" and ys[j] in fy:
                continue
            mid = ((xs[i] + xs[ni]) / 2, (ys[j] + ys[nj]) / 2)
            if not _inside_rects(rects, mid):
                continue
            seen.add((ni, nj))
            frontier.append((ni, nj))
    return False


def random_region(rng, max_rects=5, span=8):
    rects = []
    for _ in range(rng.randint(2, max_rects)):
        x0 = rng.randint(0, span - 1)
        y0 = rng.randint(0, span - 1)
        rects.append(Rect(x0, x0 + rng.randint(1, 3), y0, y0 + rng.randint(1, 3)))
    return Region(tuple(rects))


def random_region_point(rng, region):
    rect = rng.choice(region.rects)
    x = rect.x0 + Fraction(rng.randint(1, 3), 4) * (rect.x1 - rect.x0)
    y = rect.y0 + Fraction(rng.randint(1, 3), 4) * (rect.y1 - rect.y0)
    return (x, y)
