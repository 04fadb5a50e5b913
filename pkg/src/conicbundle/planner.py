"""Rectilinear path planning inside a union of axis-aligned rectangles.

The region is cut by every rectangle edge, every forbidden line and the two
endpoints into a rational grid (cut values plus gap midpoints).  Membership
is constant on each grid cell, so breadth-first search over grid moves with
exact midpoint tests decides reachability; the returned polyline is merged
into alternating horizontal and vertical segments and re-validated exactly.
Vertical moves never run along a forbidden x-line, horizontal moves never
along a forbidden y-line.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidModel, OnForbiddenLine, OutsideRegion
from .projline import Rat, format_rat, parse_rat

Point = Tuple[Rat, Rat]


@dataclass(frozen=True)
class Rect:
    """A closed axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: Rat
    x1: Rat
    y0: Rat
    y1: Rat

    def __post_init__(self):
        for name in ("x0", "x1", "y0", "y1"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise InvalidModel("rectangle ranges must be nonempty")

    def contains(self, p: Point) -> bool:
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1

    def as_json(self) -> list:
        return [[format_rat(self.x0), format_rat(self.x1)],
                [format_rat(self.y0), format_rat(self.y1)]]

    @staticmethod
    def from_json(pair) -> "Rect":
        (x0, x1), (y0, y1) = pair
        return Rect(parse_rat(x0), parse_rat(x1), parse_rat(y0), parse_rat(y1))


@dataclass(frozen=True)
class Region:
    """A finite union of rectangles; overlaps are allowed."""

    rects: tuple

    def __post_init__(self):
        rects = tuple(self.rects)
        if not rects:
            raise InvalidModel("a region needs at least one rectangle")
        object.__setattr__(self, "rects", rects)

    def contains(self, p: Point) -> bool:
        return any(r.contains(p) for r in self.rects)

    def as_json(self) -> list:
        return [r.as_json() for r in self.rects]

    @staticmethod
    def from_json(items) -> "Region":
        return Region(tuple(Rect.from_json(it) for it in items))


@dataclass(frozen=True)
class Segment:
    """A nondegenerate horizontal or vertical segment."""

    a: Point
    b: Point

    def __post_init__(self):
        a = (Fraction(self.a[0]), Fraction(self.a[1]))
        b = (Fraction(self.b[0]), Fraction(self.b[1]))
        if a == b:
            raise InvalidModel("zero-length segment")
        if a[0] != b[0] and a[1] != b[1]:
            raise InvalidModel("segment is neither horizontal nor vertical")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_vertical(self) -> bool:
        return self.a[0] == self.b[0]

    def as_json(self) -> list:
        return [[format_rat(self.a[0]), format_rat(self.a[1])],
                [format_rat(self.b[0]), format_rat(self.b[1])]]


@dataclass(frozen=True)
class SegPath:
    """Alternating axis-parallel segments, consecutive ones sharing a point."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        for prev, cur in zip(segs, segs[1:]):
            if prev.b != cur.a:
                raise InvalidModel("consecutive segments must share an endpoint")
            if prev.is_vertical == cur.is_vertical:
                raise InvalidModel("consecutive segments must alternate orientation")
        object.__setattr__(self, "segments", segs)

    def __len__(self):
        return len(self.segments)

    def as_json(self) -> list:
        return [s.as_json() for s in self.segments]


def _as_point(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _grid_values(cuts: Iterable[Rat]) -> List[Rat]:
    values = sorted(set(Fraction(c) for c in cuts))
    grid = []
    for i, v in enumerate(values):
        grid.append(v)
        if i + 1 < len(values):
            grid.append((v + values[i + 1]) / 2)
    return grid


def _segment_points(path_points: List[Point]) -> List[Segment]:
    # Merge collinear runs of the polyline into maximal segments.
    segments = []
    i = 0
    while i + 1 < len(path_points):
        j = i + 1
        vertical = path_points[i][0] == path_points[j][0]
        while j + 1 < len(path_points):
            same = path_points[j][0] == path_points[j + 1][0]
            if same != vertical:
                break
            j += 1
        segments.append(Segment(path_points[i], path_points[j]))
        i = j
    return segments


def validate_path(region: Region, path: SegPath, start, end,
                  forbidden_x: Sequence = (), forbidden_y: Sequence = ()) -> bool:
    """Exact check: endpoints, containment in the union, forbidden avoidance."""
    start, end = _as_point(start), _as_point(end)
    forbidden_x = {Fraction(v) for v in forbidden_x}
    forbidden_y = {Fraction(v) for v in forbidden_y}
    if not path.segments:
        return start == end and region.contains(start)
    if path.segments[0].a != start or path.segments[-1].b != end:
        return False
    x_cuts = sorted({r.x0 for r in region.rects} | {r.x1 for r in region.rects})
    y_cuts = sorted({r.y0 for r in region.rects} | {r.y1 for r in region.rects})
    for seg in path.segments:
        if seg.is_vertical:
            if seg.a[0] in forbidden_x:
                return False
            lo, hi = sorted((seg.a[1], seg.b[1]))
            stops = [lo] + [c for c in y_cuts if lo < c < hi] + [hi]
            probes = [(seg.a[0], (u + v) / 2) for u, v in zip(stops, stops[1:])]
            probes += [(seg.a[0], c) for c in stops]
        else:
            if seg.a[1] in forbidden_y:
                return False
            lo, hi = sorted((seg.a[0], seg.b[0]))
            stops = [lo] + [c for c in x_cuts if lo < c < hi] + [hi]
            probes = [((u + v) / 2, seg.a[1]) for u, v in zip(stops, stops[1:])]
            probes += [(c, seg.a[1]) for c in stops]
        if not all(region.contains(p) for p in probes):
            return False
    return True


def find_rect_path(region: Region, start, end,
                   forbidden_x: Sequence = (), forbidden_y: Sequence = ()) -> Optional[SegPath]:
    """A validated rectilinear path from start to end inside the region.

    Vertical segments avoid the forbidden x-values and horizontal segments
    the forbidden y-values.  Returns None when the endpoints lie in distinct
    connected components (an empty path when start equals end).  The search
    minimizes the number of turns, then the number of grid steps, so the
    output is reproducible.
    """
    start, end = _as_point(start), _as_point(end)
    fx = {Fraction(v) for v in forbidden_x}
    fy = {Fraction(v) for v in forbidden_y}
    if not region.contains(start):
        raise OutsideRegion(f"start {start} is outside the region")
    if not region.contains(end):
        raise OutsideRegion(f"end {end} is outside the region")
    for p, name in ((start, "start"), (end, "end")):
        if p[0] in fx or p[1] in fy:
            raise OnForbiddenLine(f"{name} {p} lies on a forbidden line")
    if start == end:
        return SegPath(())

    xs = _grid_values([r.x0 for r in region.rects] + [r.x1 for r in region.rects]
                      + list(fx) + [start[0], end[0]])
    ys = _grid_values([r.y0 for r in region.rects] + [r.y1 for r in region.rects]
                      + list(fy) + [start[1], end[1]])
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    inside = [[region.contains((x, y)) for y in ys] for x in xs]

    def moves(i: int, j: int):
        # (di, dj, axis): axis 0 = horizontal, 1 = vertical
        if i + 1 < len(xs):
            yield i + 1, j, 0
        if i - 1 >= 0:
            yield i - 1, j, 0
        if j + 1 < len(ys):
            yield i, j + 1, 1
        if j - 1 >= 0:
            yield i, j - 1, 1

    start_state = (xi[start[0]], yi[start[1]], -1)
    goal = (xi[end[0]], yi[end[1]])
    best = {start_state: (0, 0)}
    parent = {}
    heap = [(0, 0, start_state)]
    goal_state = None
    while heap:
        turns, steps, state = heapq.heappop(heap)
        if best.get(state, (-1, -1)) != (turns, steps):
            continue
        i, j, axis = state
        if (i, j) == goal:
            goal_state = state
            break
        for ni, nj, naxis in moves(i, j):
            if not inside[ni][nj]:
                continue
            if naxis == 1 and xs[i] in fx:
                continue
            if naxis == 0 and ys[j] in fy:
                continue
            mid = ((xs[i] + xs[ni]) / 2, (ys[j] + ys[nj]) / 2)
            if not region.contains(mid):
                continue
            ncost = (turns + (1 if axis not in (-1, naxis) else 0), steps + 1)
            nstate = (ni, nj, naxis)
            if nstate not in best or ncost < best[nstate]:
                best[nstate] = ncost
                parent[nstate] = state
                heapq.heappush(heap, (ncost[0], ncost[1], nstate))
    if goal_state is None:
        return None
    points = []
    state = goal_state
    while state is not None:
        points.append((xs[state[0]], ys[state[1]]))
        state = parent.get(state)
    points.reverse()
    path = SegPath(tuple(_segment_points(points)))
    assert validate_path(region, path, start, end, fx, fy)
    return path
