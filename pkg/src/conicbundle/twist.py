"""Fiberwise rotation automorphisms of a conic-bundle model.

A twisting map acts on the model y^2 + z^2 = Q(x) by rotating every fiber
circle: (x, y, z) -> (x, R(x).(y, z)) where R(x) is a rotation depending
rationally on x.  Here R(x) = R0 * psi(lambda(x)) for a fixed rational base
rotation R0 and the rational parametrization psi(t) of the circle with pole
at (-1, 0); lambda is a polynomial, so the map is defined for every real x
and is exactly invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .conic_model import ConicModel, SurfPoint, on_surface
from .errors import (
    ChartPole,
    DuplicateNode,
    EmptyOrSingularFiber,
    FiberMismatch,
    NotOnFiber,
    NotOnSurface,
    PinCollision,
    SingularFiberTarget,
)
from .polynomial import RatPoly, solve_linear
from .projline import Rat, format_rat, parse_rat


@dataclass(frozen=True)
class Rotation:
    """A rational rotation (c, s) with c^2 + s^2 = 1."""

    c: Rat
    s: Rat

    def __post_init__(self):
        c, s = Fraction(self.c), Fraction(self.s)
        if c * c + s * s != 1:
            raise ValueError(f"({c}, {s}) is not on the unit circle")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)

    @staticmethod
    def identity() -> "Rotation":
        return Rotation(Fraction(1), Fraction(0))

    @property
    def is_identity(self) -> bool:
        return self.c == 1 and self.s == 0

    def compose(self, other: "Rotation") -> "Rotation":
        return Rotation(self.c * other.c - self.s * other.s,
                        self.s * other.c + self.c * other.s)

    def inverse(self) -> "Rotation":
        return Rotation(self.c, -self.s)

    def apply(self, y: Rat, z: Rat) -> Tuple[Rat, Rat]:
        return self.c * y - self.s * z, self.s * y + self.c * z

    def as_json(self) -> dict:
        return {"c": format_rat(self.c), "s": format_rat(self.s)}

    @staticmethod
    def from_json(obj: dict) -> "Rotation":
        return Rotation(parse_rat(obj["c"]), parse_rat(obj["s"]))


def rotation_from_param(lam: Rat) -> Rotation:
    """psi(lam) = ((1 - lam^2)/(1 + lam^2), 2 lam/(1 + lam^2))."""
    lam = Fraction(lam)
    den = 1 + lam * lam
    return Rotation((1 - lam * lam) / den, 2 * lam / den)


def rotation_between(model: ConicModel, x: Rat, frm: Tuple[Rat, Rat],
                     to: Tuple[Rat, Rat]) -> Rotation:
    """The rotation of the fiber circle over x sending frm to to."""
    rho = model.q_at(x)
    if rho <= 0:
        raise EmptyOrSingularFiber(f"Q({x}) = {rho} <= 0")
    y, z = Fraction(frm[0]), Fraction(frm[1])
    v, w = Fraction(to[0]), Fraction(to[1])
    if y * y + z * z != rho:
        raise NotOnFiber(f"({y}, {z}) is not on the circle of radius^2 {rho}")
    if v * v + w * w != rho:
        raise NotOnFiber(f"({v}, {w}) is not on the circle of radius^2 {rho}")
    return Rotation((y * v + z * w) / rho, (y * w - z * v) / rho)


def chart_param(base: Rotation, phi: Rotation) -> Rat:
    """The parameter lam with base * psi(lam) = phi (tangent half-angle)."""
    rel = base.inverse().compose(phi)
    if rel.c == -1:
        raise ChartPole(f"{phi} sits at the excluded point of the chart")
    return rel.s / (1 + rel.c)


def identity_param(base: Rotation) -> Rat:
    """The parameter whose fiber rotation is the identity."""
    return chart_param(base, Rotation.identity())


def rotation_supply() -> Iterator[Rotation]:
    """Deterministic supply: the identity, then the Pythagorean family."""
    yield Rotation.identity()
    k = 1
    while True:
        h = 2 * k * k + 2 * k + 1
        yield Rotation(Fraction(2 * k + 1, h), Fraction(2 * k * k + 2 * k, h))
        k += 1


def choose_base_rotation(required: Iterable[Rotation]) -> Rotation:
    """First supply rotation whose chart pole avoids id and all required ones."""
    needed = set(required)
    for candidate in rotation_supply():
        pole = Rotation(-candidate.c, -candidate.s)
        if not pole.is_identity and pole not in needed:
            return candidate
    raise AssertionError("unreachable: the supply is infinite")


def interpolate(nodes: Sequence) -> RatPoly:
    """Minimal-degree polynomial through values and optional derivatives.

    Nodes are (x, value) or (x, value, derivative) with pairwise distinct x.
    """
    xs = []
    equations = []
    rhs = []
    for node in nodes:
        x, value = Fraction(node[0]), Fraction(node[1])
        deriv = Fraction(node[2]) if len(node) > 2 and node[2] is not None else None
        if x in xs:
            raise DuplicateNode(f"repeated interpolation node x = {x}")
        xs.append(x)
        equations.append(("v", x, value))
        if deriv is not None:
            equations.append(("d", x, deriv))
    n = len(equations)
    if n == 0:
        return RatPoly.zero()
    rows = []
    for kind, x, target in equations:
        if kind == "v":
            rows.append([x ** j for j in range(n)])
        else:
            rows.append([(j * x ** (j - 1)) if j >= 1 else Fraction(0) for j in range(n)])
        rhs.append(target)
    return RatPoly(tuple(solve_linear(rows, rhs)))


@dataclass(frozen=True)
class TwistMap:
    """base rotation R0 and interpolant lambda; fiber map R0 * psi(lambda(x))."""

    base: Rotation
    lam: RatPoly

    def fiber_rotation(self, x: Rat) -> Rotation:
        return self.base.compose(rotation_from_param(self.lam.evaluate(x)))

    def as_json(self) -> dict:
        return {"base": self.base.as_json(), "lambda": self.lam.as_json()}

    @staticmethod
    def from_json(obj: dict) -> "TwistMap":
        return TwistMap(Rotation.from_json(obj["base"]), RatPoly.from_json(obj["lambda"]))


def twist_from_rotations(model: ConicModel, rotation_nodes: Sequence,
                         pins: Sequence = (), jets: Sequence = ()) -> TwistMap:
    """Twist realizing prescribed fiber rotations, pinned fibers and jets.

    rotation_nodes: pairs (x, Rotation) on fibers with Q(x) > 0, distinct x.
    pins: fiber parameters in the interval image whose rotation must be the
    identity.  jets: pairs (x0, mu0) demanding the identity rotation at x0
    together with tangent coefficient 2*mu0 (the x-derivative of the sine
    entry of the fiber rotation).
    """
    node_xs = []
    rotations = []
    for x, rot in rotation_nodes:
        x = Fraction(x)
        if model.q_at(x) <= 0:
            raise SingularFiberTarget(f"Q({x}) <= 0: no circle to rotate")
        if x in node_xs:
            raise DuplicateNode(f"two rotations prescribed over x = {x}")
        node_xs.append(x)
        rotations.append(rot)

    jet_list = []
    jet_xs = []
    for x0, mu0 in jets:
        x0, mu0 = Fraction(x0), Fraction(mu0)
        if x0 in node_xs:
            raise PinCollision(f"jet node x = {x0} collides with a transported fiber")
        if x0 in jet_xs:
            raise DuplicateNode(f"two jets prescribed at x = {x0}")
        if model.q_at(x0) <= 0:
            raise EmptyOrSingularFiber(f"jet fiber Q({x0}) <= 0")
        jet_xs.append(x0)
        jet_list.append((x0, mu0))

    pin_list = []
    for b in pins:
        b = Fraction(b)
        if b in node_xs:
            raise PinCollision(f"pin x = {b} collides with a transported fiber")
        if model.q_at(b) < 0:
            raise EmptyOrSingularFiber(f"pin x = {b} is outside the interval image")
        if b not in pin_list and b not in jet_xs:
            pin_list.append(b)

    base = choose_base_rotation(rotations)
    lam_id = identity_param(base)
    nodes = [(x, chart_param(base, rot)) for x, rot in zip(node_xs, rotations)]
    nodes += [(x0, lam_id, 2 * mu0 / (1 + base.c)) for x0, mu0 in jet_list]
    nodes += [(b, lam_id) for b in pin_list]
    twist = TwistMap(base, interpolate(nodes))

    for x, rot in zip(node_xs, rotations):
        assert twist.fiber_rotation(x) == rot
    for b in pin_list:
        assert twist.fiber_rotation(b).is_identity
    for x0, mu0 in jet_list:
        assert twist.fiber_rotation(x0).is_identity
        assert tangent_coefficient(twist, x0) == 2 * mu0
    return twist


def synthesize_twist(model: ConicModel, pairs: Sequence,
                     pins: Sequence = (), jets: Sequence = ()) -> TwistMap:
    """Twist transporting each point pair within its fiber, with pins and jets.

    pairs: (p, q) surface points with p.x = q.x and Q(p.x) > 0, the fiber
    parameters pairwise distinct.  pins and jets as in twist_from_rotations.
    """
    rotation_nodes = []
    for p, q in pairs:
        if not on_surface(model, p):
            raise NotOnSurface(f"source point ({p.x}, {p.y}, {p.z}) is off the surface")
        if not on_surface(model, q):
            raise NotOnSurface(f"target point ({q.x}, {q.y}, {q.z}) is off the surface")
        if p.x != q.x:
            raise FiberMismatch(f"pair spans two fibers: x = {p.x} vs x = {q.x}")
        if model.q_at(p.x) <= 0:
            raise SingularFiberTarget(f"Q({p.x}) <= 0: transport needs a circle")
        rotation_nodes.append((p.x, rotation_between(model, p.x, (p.y, p.z), (q.y, q.z))))
    return twist_from_rotations(model, rotation_nodes, pins=pins, jets=jets)


def apply_twist(model: ConicModel, twist: TwistMap, p: SurfPoint) -> SurfPoint:
    """Rotate the point within its fiber; exact and surface-preserving."""
    if not on_surface(model, p):
        raise NotOnSurface(f"({p.x}, {p.y}, {p.z}) is not on the surface")
    y, z = twist.fiber_rotation(p.x).apply(p.y, p.z)
    return SurfPoint(p.x, y, z)


def inverse_twist(twist: TwistMap) -> TwistMap:
    """The exact inverse: invert the base and negate the interpolant."""
    return TwistMap(twist.base.inverse(), -twist.lam)


def tangent_coefficient(twist: TwistMap, x0: Rat) -> Rat:
    """d/dx of the sine entry of the fiber rotation, evaluated at x0.

    At a fiber where the rotation is the identity this is the coefficient
    kappa of the linearized action [y] -> [y] - kappa [x] on the blown-up
    directions.
    """
    lam = twist.lam
    one = RatPoly.one()
    numer = twist.base.s * (one - lam * lam) + twist.base.c * (2 * lam)
    denom = one + lam * lam
    derivative = numer.derivative() * denom - numer * denom.derivative()
    x0 = Fraction(x0)
    return derivative.evaluate(x0) / (denom.evaluate(x0) ** 2)


def _rational_circle_point(rho: Rat) -> Optional[Tuple[Rat, Rat]]:
    # A rational point on y^2 + z^2 = rho, if the bounded search finds one.
    rho = Fraction(rho)
    if rho < 0:
        return None
    if rho == 0:
        return Fraction(0), Fraction(0)
    n = rho.numerator * rho.denominator
    if n > 10 ** 10:
        return None
    root = isqrt(n)
    for s in range(root + 1):
        rest = n - s * s
        t = isqrt(rest)
        if t * t == rest:
            return Fraction(s, rho.denominator), Fraction(t, rho.denominator)
    return None


def find_fiber_point(model: ConicModel, x: Rat) -> Optional[SurfPoint]:
    """A rational surface point over x, when the fiber circle has one."""
    x = Fraction(x)
    rho = model.q_at(x)
    got = _rational_circle_point(rho)
    if got is None:
        return None
    return SurfPoint(x, got[0], got[1])


def sample_surface_points(model: ConicModel, per_interval: int = 2) -> list:
    """Deterministic rational sample: root points plus interior fiber points."""
    points = [SurfPoint(a, 0, 0) for a in model.roots]
    spin = Rotation(Fraction(3, 5), Fraction(4, 5))
    for i in range(model.r):
        lo, hi = model.roots[2 * i], model.roots[2 * i + 1]
        found = 0
        for den in (2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16):
            if found >= per_interval:
                break
            for num in range(1, den):
                x = lo + Fraction(num, den) * (hi - lo)
                p = find_fiber_point(model, x)
                if p is not None and p.y * p.y + p.z * p.z > 0:
                    y2, z2 = spin.apply(p.y, p.z)
                    points.extend([p, SurfPoint(x, y2, z2)])
                    found += 1
                    break
    return points


@dataclass(frozen=True)
class TwistReport:
    """Outcome of the exactness certificate for a twisting map."""

    passed: bool
    failures: tuple
    points_checked: int


def verify_twist(model: ConicModel, twist: TwistMap) -> TwistReport:
    """Certify orthogonality, membership preservation and invertibility."""
    failures = []
    base = twist.base
    if base.c * base.c + base.s * base.s != 1:
        failures.append("orthogonality: base rotation has c^2 + s^2 != 1")
    lam = twist.lam
    one = RatPoly.one()
    lhs = (one - lam * lam) * (one - lam * lam) + (2 * lam) * (2 * lam)
    rhs = (one + lam * lam) * (one + lam * lam)
    if not (lhs - rhs).is_zero:
        failures.append("orthogonality: (1-l^2)^2 + (2l)^2 != (1+l^2)^2")
    if failures:
        # without orthogonality the fiber maps are not rotations at all
        return TwistReport(False, tuple(failures), 0)
    inv = inverse_twist(twist)
    points = sample_surface_points(model)
    for p in points:
        y, z = twist.fiber_rotation(p.x).apply(p.y, p.z)
        image = SurfPoint(p.x, y, z)
        if image.x != p.x:
            failures.append(f"fiber preservation broken over x = {p.x}")
        if not on_surface(model, image):
            failures.append(f"membership broken over x = {p.x}")
            continue
        back = apply_twist(model, inv, image)
        if back != p:
            failures.append(f"inverse does not undo the twist over x = {p.x}")
    return TwistReport(not failures, tuple(failures), len(points))
