"""Exact arithmetic on the real projective line P^1(Q).

Points, Moebius transformations, closed arcs and arc configurations, plus the
decision procedures for mapping one configuration onto another by an element
of PGL_2(Q).  Every value is immutable and every computation is exact; there
is no floating point anywhere in this module.

The circle P^1(R) carries a fixed positive orientation: increasing through
the finite reals, then through the point at infinity.  A closed arc is always
understood as traversed in that direction from its start to its end.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Optional

from .errors import InfiniteStabilizer, InvalidTriple, ParseError

Rat = Fraction

_RAT_RE = re.compile(r"^(-?\d+)(?:/(-?\d+))?$")


def parse_rat(token: str) -> Rat:
    """Parse a canonical rational token "p" or "p/q" (q positive, coprime)."""
    m = _RAT_RE.match(token.strip())
    if m is None:
        raise ParseError(f"not a rational token: {token!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ParseError(f"zero denominator in token: {token!r}")
    if den < 0:
        raise ParseError(f"negative denominator in token: {token!r}")
    if gcd(abs(num), den) != 1:
        raise ParseError(f"non-coprime rational token: {token!r}")
    return Fraction(num, den)


def format_rat(value: Rat) -> str:
    """Serialize a rational as "p/q", omitting "/q" when q is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^1(Q) as a normalized integer pair (u0 : u1).

    Normalized means gcd(|u0|, |u1|) = 1 with the leading nonzero entry
    positive; infinity is (1 : 0).
    """

    u0: int
    u1: int

    def __post_init__(self):
        u0, u1 = self.u0, self.u1
        if u0 == 0 and u1 == 0:
            raise ValueError("(0 : 0) is not a projective point")
        g = gcd(abs(u0), abs(u1))
        u0 //= g
        u1 //= g
        lead = u0 if u0 != 0 else u1
        if lead < 0:
            u0, u1 = -u0, -u1
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "u1", u1)

    @staticmethod
    def from_rat(value: Rat) -> "ProjPoint":
        value = Fraction(value)
        return ProjPoint(value.numerator, value.denominator)

    @staticmethod
    def infinity() -> "ProjPoint":
        return ProjPoint(1, 0)

    @property
    def is_infinity(self) -> bool:
        return self.u1 == 0

    def to_rat(self) -> Rat:
        if self.is_infinity:
            raise ValueError("infinity has no affine value")
        return Fraction(self.u0, self.u1)

    def to_token(self) -> str:
        return "inf" if self.is_infinity else format_rat(self.to_rat())

    @staticmethod
    def from_token(token: str) -> "ProjPoint":
        if token.strip() == "inf":
            return ProjPoint.infinity()
        return ProjPoint.from_rat(parse_rat(token))

    def __repr__(self):
        return f"ProjPoint({self.to_token()})"


ZERO = ProjPoint(0, 1)
ONE = ProjPoint(1, 1)
INF = ProjPoint.infinity()


def _arc_key(p: ProjPoint):
    # Linear order realizing one turn of the circle: finite ascending, then inf.
    if p.is_infinity:
        return (1, Fraction(0))
    return (0, p.to_rat())


def _walk_key(p: ProjPoint):
    # Walk order used for canonical configurations: starts at infinity.
    if p.is_infinity:
        return (0, Fraction(0))
    return (1, p.to_rat())


@dataclass(frozen=True)
class Moebius:
    """An element of PGL_2(Q) as a normalized integer matrix [[a, b], [c, d]].

    Normalized means the four entries are coprime integers whose first
    nonzero entry is positive.  The determinant sign is the orientation of
    the induced circle map.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if a * d - b * c == 0:
            raise ValueError("singular matrix does not define a Moebius map")
        g = gcd(gcd(abs(a), abs(b)), gcd(abs(c), abs(d)))
        a, b, c, d = a // g, b // g, c // g, d // g
        for entry in (a, b, c, d):
            if entry != 0:
                if entry < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @staticmethod
    def from_rational(a: Rat, b: Rat, c: Rat, d: Rat) -> "Moebius":
        a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
        lcm = 1
        for q in (a, b, c, d):
            lcm = lcm * q.denominator // gcd(lcm, q.denominator)
        return Moebius(int(a * lcm), int(b * lcm), int(c * lcm), int(d * lcm))

    @staticmethod
    def identity() -> "Moebius":
        return Moebius(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def orientation(self) -> int:
        return 1 if self.det > 0 else -1

    def apply(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.a * p.u0 + self.b * p.u1, self.c * p.u0 + self.d * p.u1)

    def apply_rat(self, value: Rat) -> ProjPoint:
        return self.apply(ProjPoint.from_rat(value))

    def compose(self, other: "Moebius") -> "Moebius":
        """Matrix product: (self . other)(p) = self(other(p))."""
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    def as_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "d": str(self.d)}

    @staticmethod
    def from_json(obj: dict) -> "Moebius":
        return Moebius.from_rational(*(parse_rat(obj[k]) for k in ("a", "b", "c", "d")))


def moebius_apply(m: Moebius, p: ProjPoint) -> ProjPoint:
    return m.apply(p)


def _through_standard(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint) -> Moebius:
    # The matrix sending (1:0), (0:1), (1:1) to p1, p2, p3: columns are
    # lam*(p1) and mu*(p2) where lam*p1 + mu*p2 = p3.
    det = p1.u0 * p2.u1 - p1.u1 * p2.u0
    lam = Fraction(p3.u0 * p2.u1 - p3.u1 * p2.u0, det)
    mu = Fraction(p1.u0 * p3.u1 - p1.u1 * p3.u0, det)
    return Moebius.from_rational(lam * p1.u0, mu * p2.u0, lam * p1.u1, mu * p2.u1)


def moebius_from_triples(
    p1: ProjPoint, p2: ProjPoint, p3: ProjPoint,
    q1: ProjPoint, q2: ProjPoint, q3: ProjPoint,
) -> Moebius:
    """The unique Moebius map sending (p1, p2, p3) to (q1, q2, q3)."""
    if len({p1, p2, p3}) != 3:
        raise InvalidTriple(f"repeated source point in ({p1}, {p2}, {p3})")
    if len({q1, q2, q3}) != 3:
        raise InvalidTriple(f"repeated target point in ({q1}, {q2}, {q3})")
    return _through_standard(q1, q2, q3).compose(_through_standard(p1, p2, p3).inverse())


def cross_ratio(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint, p4: ProjPoint) -> ProjPoint:
    """Image of p4 under the map sending (p1, p2, p3) to (0, 1, inf)."""
    if len({p1, p2, p3}) != 3:
        raise InvalidTriple(f"degenerate triple ({p1}, {p2}, {p3})")
    return moebius_from_triples(p1, p2, p3, ZERO, ONE, INF).apply(p4)


@dataclass(frozen=True)
class Interval:
    """The closed arc from start to end in the positive orientation."""

    start: ProjPoint
    end: ProjPoint

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("an arc needs two distinct boundary points")

    def contains(self, p: ProjPoint) -> bool:
        ks, ke, kp = _arc_key(self.start), _arc_key(self.end), _arc_key(p)
        if ks < ke:
            return ks <= kp <= ke
        return kp >= ks or kp <= ke

    def interior_contains(self, p: ProjPoint) -> bool:
        return self.contains(p) and p != self.start and p != self.end

    def interior_point(self) -> ProjPoint:
        """A rational point strictly inside the arc."""
        if self.start.is_infinity:
            return ProjPoint.from_rat(self.end.to_rat() - 1)
        if self.end.is_infinity or self.contains(INF):
            return ProjPoint.from_rat(self.start.to_rat() + 1)
        return ProjPoint.from_rat((self.start.to_rat() + self.end.to_rat()) / 2)

    def as_json(self) -> list:
        return [self.start.to_token(), self.end.to_token()]

    @staticmethod
    def from_json(pair) -> "Interval":
        return Interval(ProjPoint.from_token(pair[0]), ProjPoint.from_token(pair[1]))

    def __repr__(self):
        return f"Interval[{self.start.to_token()}, {self.end.to_token()}]"


def interval_image(m: Moebius, arc: Interval) -> Interval:
    """Pointwise image of a closed arc; endpoint roles follow orientation."""
    if m.orientation > 0:
        return Interval(m.apply(arc.start), m.apply(arc.end))
    return Interval(m.apply(arc.end), m.apply(arc.start))


@dataclass(frozen=True)
class IntervalConfig:
    """Pairwise disjoint closed arcs in canonical cyclic order.

    The canonical order walks the circle positively starting from infinity
    (or from the first boundary point after it) and lists each arc at its
    first boundary point encountered.  Two configurations are equal exactly
    when they are equal as sets of arcs.
    """

    intervals: tuple

    def __post_init__(self):
        arcs = tuple(self.intervals)
        boundary = [arc.start for arc in arcs] + [arc.end for arc in arcs]
        if len(set(boundary)) != len(boundary):
            raise ValueError("boundary points of a configuration must be distinct")
        for i, a in enumerate(arcs):
            for b in arcs[i + 1:]:
                if (a.contains(b.start) or a.contains(b.end)
                        or b.contains(a.start) or b.contains(a.end)):
                    raise ValueError(f"arcs {a} and {b} are not disjoint")
        ordered = tuple(sorted(arcs, key=lambda arc: min(_walk_key(arc.start), _walk_key(arc.end))))
        object.__setattr__(self, "intervals", ordered)

    @property
    def r(self) -> int:
        return len(self.intervals)

    def boundary_points(self) -> list:
        """All 2r boundary points in cyclic walk order."""
        pts = [arc.start for arc in self.intervals] + [arc.end for arc in self.intervals]
        return sorted(pts, key=_walk_key)

    def contains(self, p: ProjPoint) -> bool:
        return any(arc.contains(p) for arc in self.intervals)

    def apply(self, m: Moebius) -> "IntervalConfig":
        return IntervalConfig(tuple(interval_image(m, arc) for arc in self.intervals))

    def as_json(self) -> list:
        return [arc.as_json() for arc in self.intervals]

    @staticmethod
    def from_json(pairs) -> "IntervalConfig":
        return IntervalConfig(tuple(Interval.from_json(p) for p in pairs))

    @staticmethod
    def from_rat_pairs(pairs: Iterable) -> "IntervalConfig":
        return IntervalConfig(tuple(
            Interval(ProjPoint.from_rat(Fraction(s)), ProjPoint.from_rat(Fraction(e)))
            for s, e in pairs))

    def __repr__(self):
        return "IntervalConfig(" + ", ".join(map(repr, self.intervals)) + ")"


def _match_intervals(m: Moebius, source: IntervalConfig, target: IntervalConfig) -> Optional[tuple]:
    """Permutation nu with m(source[i]) == target[nu[i]], or None."""
    nu = []
    for arc in source.intervals:
        image = interval_image(m, arc)
        try:
            j = target.intervals.index(image)
        except ValueError:
            return None
        # Endpoints already matched exactly; confirm with an interior sample.
        if not target.intervals[j].contains(m.apply(arc.interior_point())):
            return None
        nu.append(j)
    return tuple(nu)


def _equiv_candidates(c1: IntervalConfig, c2: IntervalConfig) -> Iterator[tuple]:
    """Yield verified (moebius, nu) pairs mapping c1 onto c2.

    Any witness must send the 2r boundary points of c1 to those of c2
    respecting the cyclic order up to rotation (orientation +1) or reversal
    (orientation -1), so at most 2*(2r) candidate correspondences exist.
    Candidates are built from the first three boundary pairs and verified on
    everything else.  Orientation-preserving candidates come first, then each
    rotation in ascending order, so the first witness is reproducible.
    """
    if c1.r != c2.r:
        return
    if c1.r == 0:
        yield Moebius.identity(), ()
        return
    b1 = c1.boundary_points()
    b2 = c2.boundary_points()
    n = len(b1)
    if c1.r == 1:
        i1 = c1.intervals[0].interior_point()
        i2 = c2.intervals[0].interior_point()
        assignments = [(b2[0], b2[1]), (b2[1], b2[0])]
        for t0, t1 in assignments:
            try:
                m = moebius_from_triples(b1[0], b1[1], i1, t0, t1, i2)
            except InvalidTriple:
                continue
            nu = _match_intervals(m, c1, c2)
            if nu is not None:
                yield m, nu
        return
    seen = set()
    for sign in (1, -1):
        for k in range(n):
            targets = [b2[(k + sign * i) % n] for i in range(n)]
            m = moebius_from_triples(b1[0], b1[1], b1[2], targets[0], targets[1], targets[2])
            if any(m.apply(b1[i]) != targets[i] for i in range(3, n)):
                continue
            key = (m.a, m.b, m.c, m.d)
            if key in seen:
                continue
            seen.add(key)
            nu = _match_intervals(m, c1, c2)
            if nu is not None:
                yield m, nu


def config_equiv(c1: IntervalConfig, c2: IntervalConfig,
                 nu: Optional[tuple] = None) -> Optional[tuple]:
    """Decide whether a Moebius map sends c1 onto c2.

    With nu given, the witness must send interval i onto interval nu[i];
    otherwise any matching permutation is accepted.  Returns the first
    (witness, permutation) pair in the deterministic search order, or None.
    """
    for m, found in _equiv_candidates(c1, c2):
        if nu is None or found == tuple(nu):
            return m, found
    return None


def realizable_permutations(c: IntervalConfig) -> dict:
    """All permutations of the arcs realized by a Moebius map, with witnesses.

    Returns a dict permutation -> witness; the key set is a subgroup of
    Sym_r.
    """
    if c.r < 1:
        raise ValueError("need at least one interval")
    found = {}
    for m, nu in _equiv_candidates(c, c):
        if nu not in found:
            found[nu] = m
    return found


def stabilizer(points: Iterable) -> list:
    """The finite group of Moebius maps preserving a point set of size >= 3.

    Every stabilizing map sends ordered triples of the set to ordered
    triples, so enumerating the images of one fixed triple is exhaustive.
    """
    pts = sorted(set(points), key=_walk_key)
    if len(pts) < 3:
        raise InfiniteStabilizer(f"{len(pts)} points span an infinite stabilizer")
    base = pts[:3]
    found = {}
    pset = set(pts)
    for t0 in pts:
        for t1 in pts:
            if t1 == t0:
                continue
            for t2 in pts:
                if t2 == t0 or t2 == t1:
                    continue
                m = moebius_from_triples(base[0], base[1], base[2], t0, t1, t2)
                if {m.apply(p) for p in pts} == pset:
                    found.setdefault((m.a, m.b, m.c, m.d), m)
    return [found[k] for k in sorted(found)]
