"""The degree-2 del Pezzo double-conic model and its Geiser involution.

The surface is {x^2 m1(a,b) + y^2 m2(a,b) + z^2 m3(a,b) = 0} inside
P^2 x P^1, for three binary quadratic forms whose product has six distinct
roots.  Projection to P^1 is a conic bundle; projection to P^2 is a double
cover whose deck transformation (computed here by Vieta conjugation on the
fiber quadratic) exchanges the two roots over each plane point and yields
the second conic bundle structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional, Tuple

from .errors import (
    ImageIsWholeLine,
    InvalidModel,
    IrrationalBoundary,
    MoveInfinityFirst,
    NotOnSurface,
    TooManyIntervals,
    Unsupported,
    WitnessSearchFailed,
)
from .projline import (
    INF,
    Interval,
    IntervalConfig,
    ProjPoint,
    Rat,
    _walk_key,
    format_rat,
    parse_rat,
)


@dataclass(frozen=True)
class BinQuadForm:
    """A binary quadratic form m(a, b) = al*a^2 + be*a*b + ga*b^2."""

    al: Rat
    be: Rat
    ga: Rat

    def __post_init__(self):
        al, be, ga = Fraction(self.al), Fraction(self.be), Fraction(self.ga)
        if al == 0 and be == 0 and ga == 0:
            raise InvalidModel("the zero form is not allowed")
        object.__setattr__(self, "al", al)
        object.__setattr__(self, "be", be)
        object.__setattr__(self, "ga", ga)

    def evaluate(self, a: Rat, b: Rat) -> Rat:
        a, b = Fraction(a), Fraction(b)
        return self.al * a * a + self.be * a * b + self.ga * b * b

    def at_point(self, t: ProjPoint) -> Rat:
        """Value on the normalized integer representative (sign-meaningful)."""
        return self.evaluate(t.u0, t.u1)

    @property
    def disc(self) -> Rat:
        return self.be * self.be - 4 * self.al * self.ga

    def scaled(self, factor: Rat) -> "BinQuadForm":
        factor = Fraction(factor)
        return BinQuadForm(self.al * factor, self.be * factor, self.ga * factor)

    def rational_roots(self) -> List[ProjPoint]:
        """Roots in P^1(Q); raises when real roots exist but are irrational."""
        if self.al == 0:
            # m = b (be*a + ga*b); be != 0 here since the form has disc != 0
            # whenever it is non-degenerate, and be == 0 means a double root.
            roots = [INF]
            if self.be != 0:
                roots.append(ProjPoint.from_rat(Fraction(-self.ga, self.be) if self.ga != 0 else Fraction(0)))
            return roots
        d = self.disc
        if d < 0:
            return []
        n, den = d.numerator, d.denominator
        rn, rd = isqrt(n), isqrt(den)
        if rn * rn != n or rd * rd != den:
            raise IrrationalBoundary(f"form has irrational real roots (disc {d})")
        sq = Fraction(rn, rd)
        first = (-self.be + sq) / (2 * self.al)
        second = (-self.be - sq) / (2 * self.al)
        if first == second:
            return [ProjPoint.from_rat(first)]
        return [ProjPoint.from_rat(first), ProjPoint.from_rat(second)]

    def as_json(self) -> list:
        return [format_rat(self.al), format_rat(self.be), format_rat(self.ga)]

    @staticmethod
    def from_json(triple) -> "BinQuadForm":
        return BinQuadForm(*(parse_rat(t) for t in triple))


def _det3(m) -> Rat:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def resultant(f: BinQuadForm, g: BinQuadForm) -> Rat:
    """Sylvester resultant; zero exactly when the forms share a root."""
    rows = [
        [f.al, f.be, f.ga, Fraction(0)],
        [Fraction(0), f.al, f.be, f.ga],
        [g.al, g.be, g.ga, Fraction(0)],
        [Fraction(0), g.al, g.be, g.ga],
    ]
    total = Fraction(0)
    for col in range(4):
        if rows[0][col] == 0:
            continue
        minor = [[rows[r][c] for c in range(4) if c != col] for r in range(1, 4)]
        total += (-1) ** col * rows[0][col] * _det3(minor)
    return total


@dataclass(frozen=True)
class BiconicModel:
    """Forms (m1, m2, m3) with m1*m2*m3 squarefree of degree 6, plus the
    declared number k of genuine intervals in the real image."""

    m1: BinQuadForm
    m2: BinQuadForm
    m3: BinQuadForm
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= 3:
            raise InvalidModel("k must lie between 0 and 3")
        forms = (self.m1, self.m2, self.m3)
        for f in forms:
            if f.disc == 0:
                raise InvalidModel("a form has a double root")
        for i in range(3):
            for j in range(i + 1, 3):
                if resultant(forms[i], forms[j]) == 0:
                    raise InvalidModel("two forms share a root")

    @property
    def forms(self) -> tuple:
        return (self.m1, self.m2, self.m3)

    def values_at(self, t: ProjPoint) -> tuple:
        return tuple(f.at_point(t) for f in self.forms)

    def as_json(self) -> dict:
        return {"m1": self.m1.as_json(), "m2": self.m2.as_json(),
                "m3": self.m3.as_json(), "k": self.k}

    @staticmethod
    def from_json(obj: dict) -> "BiconicModel":
        return BiconicModel(BinQuadForm.from_json(obj["m1"]),
                            BinQuadForm.from_json(obj["m2"]),
                            BinQuadForm.from_json(obj["m3"]),
                            int(obj.get("k", 0)))


def _normalize_xyz(xyz) -> tuple:
    x, y, z = (int(v) for v in xyz)
    if x == 0 and y == 0 and z == 0:
        raise InvalidModel("(0 : 0 : 0) is not a point of the plane")
    g = gcd(gcd(abs(x), abs(y)), abs(z))
    x, y, z = x // g, y // g, z // g
    for v in (x, y, z):
        if v != 0:
            if v < 0:
                x, y, z = -x, -y, -z
            break
    return x, y, z


@dataclass(frozen=True)
class BiPoint:
    """A point ((x : y : z), t) of the surface inside P^2 x P^1."""

    xyz: tuple
    t: ProjPoint

    def __post_init__(self):
        object.__setattr__(self, "xyz", _normalize_xyz(self.xyz))

    def as_json(self) -> dict:
        return {"xyz": [str(v) for v in self.xyz],
                "t": [str(self.t.u0), str(self.t.u1)]}

    @staticmethod
    def from_json(obj: dict) -> "BiPoint":
        t = obj["t"]
        return BiPoint(tuple(int(v) for v in obj["xyz"]),
                       ProjPoint(int(t[0]), int(t[1])))


def on_biconic(model: BiconicModel, p: BiPoint) -> bool:
    x, y, z = p.xyz
    v1, v2, v3 = model.values_at(p.t)
    return x * x * v1 + y * y * v2 + z * z * v3 == 0


def _interval_form(arc: Interval) -> BinQuadForm:
    # -(a - s b)(a - e b), cleared to integers: vanishes at the boundary and
    # is non-negative exactly on the arc (which excludes infinity).
    s, e = arc.start.to_rat(), arc.end.to_rat()
    al, be, ga = Fraction(-1), s + e, -s * e
    lcm = 1
    for q in (be, ga):
        lcm = lcm * q.denominator // gcd(lcm, q.denominator)
    return BinQuadForm(al * lcm, be * lcm, ga * lcm)


def biconic_from_config(config: IntervalConfig) -> BiconicModel:
    """A biconic model whose real image is the given configuration (k <= 3)."""
    k = config.r
    if k > 3:
        raise TooManyIntervals(f"{k} intervals; the model supports at most 3")
    for arc in config.intervals:
        if arc.start.is_infinity or arc.end.is_infinity or arc.contains(INF):
            raise MoveInfinityFirst(f"{arc} touches infinity; conjugate it away first")
    forms = [_interval_form(arc) for arc in config.intervals]
    supply = 1
    while len(forms) < 3:
        candidate = BinQuadForm(Fraction(-1), Fraction(0), Fraction(-supply))
        supply += 1
        if candidate.disc == 0:
            continue
        if any(resultant(candidate, f) == 0 for f in forms):
            continue
        forms.append(candidate)
    model = BiconicModel(forms[0], forms[1], forms[2], k)
    if biconic_interval_image(model) != config:
        raise InvalidModel("constructed model does not reproduce the configuration")
    return model


def biconic_interval_image(model: BiconicModel) -> IntervalConfig:
    """Exact sign analysis of (m1, m2, m3) on the root partition of P^1(R).

    A parameter carries real points exactly when the three values do not all
    share one strict sign.  Boundaries must be rational to be representable.
    """
    roots = []
    for f in model.forms:
        for root in f.rational_roots():
            if root not in roots:
                roots.append(root)
    if not roots:
        sample = model.values_at(ProjPoint(0, 1))
        if all(v > 0 for v in sample) or all(v < 0 for v in sample):
            return IntervalConfig(())
        raise ImageIsWholeLine("every parameter carries real points")
    roots.sort(key=_walk_key)
    n = len(roots)
    gap_in_image = []
    for i in range(n):
        if n > 1:
            probe = Interval(roots[i], roots[(i + 1) % n]).interior_point()
        elif roots[0].is_infinity:
            probe = ProjPoint(0, 1)
        else:
            probe = ProjPoint.from_rat(roots[0].to_rat() + 1)
        values = model.values_at(probe)
        gap_in_image.append(not (all(v > 0 for v in values) or all(v < 0 for v in values)))
    if all(gap_in_image):
        raise ImageIsWholeLine("every parameter carries real points")
    # Walk gaps cyclically; maximal runs of in-image gaps bound the arcs.
    start_gap = next(i for i in range(n) if not gap_in_image[i])
    arcs = []
    i = (start_gap + 1) % n
    run_start = None
    for _ in range(n):
        if gap_in_image[i]:
            if run_start is None:
                run_start = roots[i]
        else:
            if run_start is not None:
                arcs.append(Interval(run_start, roots[i]))
                run_start = None
        i = (i + 1) % n
    if run_start is not None:
        arcs.append(Interval(run_start, roots[start_gap]))
    return IntervalConfig(tuple(arcs))


def _fiber_quadratic(model: BiconicModel, xyz) -> Tuple[Rat, Rat, Rat]:
    x, y, z = xyz
    x2, y2, z2 = x * x, y * y, z * z
    a = x2 * model.m1.al + y2 * model.m2.al + z2 * model.m3.al
    b = x2 * model.m1.be + y2 * model.m2.be + z2 * model.m3.be
    c = x2 * model.m1.ga + y2 * model.m2.ga + z2 * model.m3.ga
    return a, b, c


def geiser(model: BiconicModel, p: BiPoint) -> BiPoint:
    """The Geiser involution: same plane point, other root of the fiber
    quadratic.

    Fixing (x : y : z) turns the surface equation into a binary quadratic
    A a^2 + B ab + C b^2 in the P^1 coordinate; p.t is one root, and the
    image is the second root, obtained by dividing out the known factor so
    that every projective edge case (A = 0, root at infinity, double root)
    lands in the same formula.
    """
    if not on_biconic(model, p):
        raise NotOnSurface(f"{p.xyz} over {p.t} is not on the surface")
    a_coef, b_coef, c_coef = _fiber_quadratic(model, p.xyz)
    a0, b0 = p.t.u0, p.t.u1
    # A a^2 + B ab + C b^2 = (b0 a - a0 b)(pp a - qq b)
    if b0 != 0:
        pp = Fraction(a_coef, b0)
        qq = Fraction(c_coef, a0) if a0 != 0 else Fraction(-b_coef, b0)
    else:
        pp = Fraction(-b_coef)
        qq = Fraction(c_coef)
    if pp == 0 and qq == 0:
        raise Unsupported("fiber quadratic vanishes identically over this point")
    den = pp.denominator * qq.denominator // gcd(pp.denominator, qq.denominator)
    return BiPoint(p.xyz, ProjPoint(int(qq * den), int(pp * den)))


def second_fibration(model: BiconicModel, p: BiPoint) -> ProjPoint:
    """The P^1 coordinate of the Geiser image (the second conic bundle)."""
    return geiser(model, p).t


def _conic_point(c1: int, c2: int, c3: int, bound: int) -> Optional[tuple]:
    # First rational point on c1 x^2 + c2 y^2 + c3 z^2 = 0 in a growing box.
    for h in range(1, bound + 1):
        for x in range(0, h + 1):
            for y in range(-h, h + 1):
                for z in range(-h, h + 1):
                    if max(x, abs(y), abs(z)) != h:
                        continue
                    if x == 0 and y == 0 and z == 0:
                        continue
                    if c1 * x * x + c2 * y * y + c3 * z * z == 0:
                        return (x, y, z)
    return None


def _clear_to_int(values) -> tuple:
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints) if g else tuple(ints)


def fiber_points(model: BiconicModel, t: ProjPoint, want: int = 6,
                 bound: int = 20) -> list:
    """Rational points of the conic fiber over t, via one found point and
    the line parametrization through it."""
    c1, c2, c3 = _clear_to_int([Fraction(v) for v in model.values_at(t)])
    base = _conic_point(c1, c2, c3, bound)
    if base is None:
        return []

    def form(v) -> int:
        return c1 * v[0] * v[0] + c2 * v[1] * v[1] + c3 * v[2] * v[2]

    def bilinear(u, v) -> int:
        return 2 * (c1 * u[0] * v[0] + c2 * u[1] * v[1] + c3 * u[2] * v[2])

    # Two coordinate axes completing base to a basis span the pencil of
    # lines through it.
    axes = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    basis = next(
        (axes[i], axes[j])
        for i in range(3) for j in range(i + 1, 3)
        if _det3([list(base), list(axes[i]), list(axes[j])]) != 0)
    points = [BiPoint(base, t)]
    for u, v in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2),
                 (3, 1), (1, 3), (3, -1), (1, -3), (3, 2), (2, 3), (3, -2), (2, -3)):
        d = tuple(u * basis[0][i] + v * basis[1][i] for i in range(3))
        fd = form(d)
        ld = bilinear(base, d)
        candidate = tuple(fd * base[i] - ld * d[i] for i in range(3))
        if all(value == 0 for value in candidate):
            continue
        pt = BiPoint(candidate, t)
        if pt not in points and on_biconic(model, pt):
            points.append(pt)
        if len(points) >= want:
            break
    return points


def distinct_foliations_witness(model: BiconicModel, budget: int = 40) -> tuple:
    """Two surface points sharing the first fibration value but separated by
    the second fibration; exists whenever k >= 1."""
    if model.k < 1:
        raise Unsupported("a model with empty real part has no fibers to separate")
    image = biconic_interval_image(model)
    attempts = 0
    for arc in image.intervals:
        lo, hi = arc.start.to_rat(), arc.end.to_rat()
        for den in (2, 3, 4, 5, 7, 8, 11, 16):
            for num in range(1, den):
                if attempts >= budget:
                    raise WitnessSearchFailed(budget)
                attempts += 1
                t = ProjPoint.from_rat(lo + Fraction(num, den) * (hi - lo))
                pts = fiber_points(model, t, want=8)
                values = {}
                for p in pts:
                    values.setdefault(second_fibration(model, p), p)
                    if len(values) >= 2:
                        first, second = list(values.values())[:2]
                        return first, second
    raise WitnessSearchFailed(budget)
