"""Dense univariate polynomials over the rationals, exact throughout."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Rat = Fraction

NEG_INF = float("-inf")


@dataclass(frozen=True)
class RatPoly:
    """Coefficients low-to-high with trailing zeros trimmed; () is zero."""

    coeffs: tuple

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def zero() -> "RatPoly":
        return RatPoly(())

    @staticmethod
    def one() -> "RatPoly":
        return RatPoly((Fraction(1),))

    @staticmethod
    def constant(c) -> "RatPoly":
        return RatPoly((Fraction(c),))

    @staticmethod
    def x() -> "RatPoly":
        return RatPoly((Fraction(0), Fraction(1)))

    @property
    def degree(self):
        """Degree as an int, or -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Rat:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly(tuple(c * other for c in self.coeffs))
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(tuple(out))

    __rmul__ = __mul__

    def evaluate(self, x) -> Rat:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def derivative(self) -> "RatPoly":
        return RatPoly(tuple(c * k for k, c in enumerate(self.coeffs) if k > 0))

    @staticmethod
    def from_roots(roots: Iterable, scale=1) -> "RatPoly":
        """scale * prod (x - r) over the given roots."""
        poly = RatPoly.constant(scale)
        for r in roots:
            poly = poly * RatPoly((-Fraction(r), Fraction(1)))
        return poly

    def as_json(self) -> list:
        from .projline import format_rat
        return [format_rat(c) for c in self.coeffs]

    @staticmethod
    def from_json(tokens) -> "RatPoly":
        from .projline import parse_rat
        return RatPoly(tuple(parse_rat(t) for t in tokens))

    def __repr__(self):
        if self.is_zero:
            return "RatPoly(0)"
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "RatPoly(" + " + ".join(terms) + ")"


def solve_linear(rows: list, rhs: list) -> list:
    """Solve a square rational linear system by Gaussian elimination."""
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular linear system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]
