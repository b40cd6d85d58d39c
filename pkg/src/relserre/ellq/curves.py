"""Weierstrass models over Q and the factorization shape of the 2-division cubic."""
from __future__ import annotations

from dataclasses import dataclass, field

from sympy import Poly, symbols

from ..errors import ParseError
from .arith import valuation

_x = symbols("x")


@dataclass(frozen=True)
class CurveModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for f in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, f, int(getattr(self, f)))
        if self.disc == 0:
            raise ParseError(f"singular Weierstrass model {self.coefficients}")

    @classmethod
    def parse(cls, text: str, name: str | None = None) -> CurveModel:
        """Accepts 'a1,a2,a3,a4,a6' or short 'A,B'."""
        try:
            vals = [int(v) for v in text.replace("[", "").replace("]", "").split(",")]
        except ValueError as exc:
            raise ParseError(f"cannot parse curve {text!r}") from exc
        if len(vals) == 2:
            return cls(0, 0, 0, vals[0], vals[1], name=name)
        if len(vals) == 5:
            return cls(*vals, name=name)
        raise ParseError(f"curve {text!r} needs 2 or 5 coefficients")

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.coefficients
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def short_model(self) -> tuple:
        """(A, B) with y^2 = x^3 + A x + B isomorphic over Q."""
        return (-27 * self.c4, -54 * self.c6)

    def two_division_cubic(self) -> tuple:
        """Monic integral cubic (1, p, q, r) whose roots are x-coordinates of 2-torsion up to scaling."""
        if self.a1 == 0 and self.a3 == 0:
            return (1, self.a2, self.a4, self.a6)
        # X = 4x clears the completed square 4x^3 + b2 x^2 + 2 b4 x + b6
        return (1, self.b2, 8 * self.b4, 16 * self.b6)

    def minimal_disc_valuation(self, p: int) -> int:
        """Valuation of the minimal discriminant at p (exact for p >= 5, given model otherwise)."""
        v = valuation(self.disc, p)
        if p < 5:
            return v
        v4, v6 = valuation(self.c4, p), valuation(self.c6, p)
        while v >= 12 and v4 >= 4 and v6 >= 6:
            v, v4, v6 = v - 12, v4 - 4, v6 - 6
        return v

    def __str__(self):
        return self.name or "[" + ",".join(str(c) for c in self.coefficients) + "]"


@dataclass(frozen=True)
class Split:
    roots: tuple
    G = "2Cs"


@dataclass(frozen=True)
class PartialSplit:
    a: int
    b: int
    c: int
    G = "2B"


@dataclass(frozen=True)
class Irreducible:
    cubic: tuple
    G = "2Cn"


@dataclass(frozen=True)
class Full:
    cubic: tuple
    G = "none"


def cubic_disc(cubic) -> int:
    _, p, q, r = cubic
    return p * p * q * q - 4 * q**3 - 4 * p**3 * r - 27 * r * r + 18 * p * q * r


def _shape_of_cubic(cubic):
    _, p, q, r = cubic
    poly = Poly(_x**3 + p * _x**2 + q * _x + r, _x)
    _, factors = poly.factor_list()
    linear = []
    quad = None
    for f, e in factors:
        coeffs = [int(c) for c in f.all_coeffs()]
        if f.degree() == 1:
            linear.extend([-coeffs[1]] * e)
        elif f.degree() == 2:
            quad = coeffs
    if len(linear) == 3:
        return Split(tuple(sorted(linear, key=lambda v: (abs(v), v))))
    if len(linear) == 1 and quad is not None:
        return PartialSplit(quad[1], quad[2], -linear[0])
    from .arith import is_square
    if is_square(cubic_disc(cubic)):
        return Irreducible(tuple(cubic))
    return Full(tuple(cubic))


def classify_mod2(curve: CurveModel):
    """Shape of the 2-division cubic over Q (Split / PartialSplit / Irreducible / Full)."""
    return _shape_of_cubic(curve.two_division_cubic())


def factored_model_disc(roots) -> int:
    a, b, c = roots
    return 16 * ((a - b) * (a - c) * (b - c)) ** 2
