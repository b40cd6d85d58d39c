"""2x2 matrices over Z/NZ, CRT splitting, and vectorized packed-key helpers."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np
from sympy import factorint

from .errors import ModulusMismatchError, NonInvertibleError, ParseError


def prime_power_factors(n: int) -> list[int]:
    """Prime-power components of n in increasing prime order, e.g. 420 -> [4, 3, 5, 7]."""
    return [p**e for p, e in sorted(factorint(n).items())]


def gl2_order(n: int) -> int:
    """|GL2(Z/n)| = n^4 prod_{p|n} (1 - 1/p)(1 - 1/p^2)."""
    out = 1
    for p, e in factorint(n).items():
        out *= p ** (4 * (e - 1)) * (p * p - 1) * (p * p - p)
    return out


def sl2_order(n: int) -> int:
    out = 1
    for p, e in factorint(n).items():
        out *= p ** (3 * (e - 1)) * p * (p * p - 1)
    return out


@dataclass(frozen=True, slots=True)
class CharPolyData:
    """x^2 - t x + d over Z/N."""

    modulus: int
    trace: int
    det: int

    def __post_init__(self):
        object.__setattr__(self, "trace", self.trace % self.modulus)
        object.__setattr__(self, "det", self.det % self.modulus)

    def reduce(self, m: int) -> CharPolyData:
        return CharPolyData(m, self.trace, self.det)

    def __str__(self):
        t = (-self.trace) % self.modulus
        return f"x^2 + {t}*x + {self.det} (mod {self.modulus})"


@dataclass(frozen=True, slots=True)
class ResidueMatrix:
    """Row-major (a b; c d) over Z/N; entries reduced on construction."""

    modulus: int
    entries: tuple

    def __post_init__(self):
        n = self.modulus
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ParseError(f"bad modulus {n!r}")
        if len(self.entries) != 4:
            raise ParseError("a 2x2 matrix needs four entries")
        object.__setattr__(self, "modulus", int(n))
        object.__setattr__(self, "entries", tuple(int(x) % n for x in self.entries))

    @classmethod
    def of(cls, a, b, c, d, modulus: int) -> ResidueMatrix:
        return cls(modulus, (a, b, c, d))

    @classmethod
    def identity(cls, modulus: int) -> ResidueMatrix:
        return cls(modulus, (1, 0, 0, 1))

    @classmethod
    def from_text(cls, text: str, modulus: int) -> ResidueMatrix:
        try:
            vals = [int(x) for x in text.strip().split(",")]
        except ValueError as exc:
            raise ParseError(f"cannot parse matrix {text!r}") from exc
        if len(vals) != 4:
            raise ParseError(f"matrix {text!r} must have 4 entries")
        return cls(modulus, tuple(vals))

    @classmethod
    def from_key(cls, key: int, modulus: int) -> ResidueMatrix:
        n = modulus
        key, d = divmod(int(key), n)
        key, c = divmod(key, n)
        a, b = divmod(key, n)
        return cls(n, (a, b, c, d))

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.entries)

    @property
    def key(self) -> int:
        a, b, c, d = self.entries
        n = self.modulus
        return ((a * n + b) * n + c) * n + d

    @property
    def det(self) -> int:
        a, b, c, d = self.entries
        return (a * d - b * c) % self.modulus

    @property
    def trace(self) -> int:
        a, _, _, d = self.entries
        return (a + d) % self.modulus

    def is_invertible(self) -> bool:
        return gcd(self.det, self.modulus) == 1

    def reduce(self, m: int) -> ResidueMatrix:
        if self.modulus % m:
            raise ModulusMismatchError(f"{m} does not divide {self.modulus}")
        return ResidueMatrix(m, self.entries)

    def __matmul__(self, other: ResidueMatrix) -> ResidueMatrix:
        return mat_mul(self, other)

    def __pow__(self, k: int) -> ResidueMatrix:
        if k < 0:
            return mat_inv(self) ** (-k)
        out, base = ResidueMatrix.identity(self.modulus), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __repr__(self):
        a, b, c, d = self.entries
        return f"[{a} {b}; {c} {d}] mod {self.modulus}"


def mat_mul(A: ResidueMatrix, B: ResidueMatrix) -> ResidueMatrix:
    if A.modulus != B.modulus:
        raise ModulusMismatchError(f"moduli {A.modulus} and {B.modulus} differ")
    a, b, c, d = A.entries
    e, f, g, h = B.entries
    return ResidueMatrix(A.modulus, (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))


def mat_inv(A: ResidueMatrix) -> ResidueMatrix:
    n = A.modulus
    det = A.det
    if gcd(det, n) != 1:
        raise NonInvertibleError(f"determinant {det} is not a unit mod {n}")
    u = pow(det, -1, n) if n > 1 else 0
    a, b, c, d = A.entries
    return ResidueMatrix(n, (d * u, -b * u, -c * u, a * u))


def char_poly(A: ResidueMatrix) -> CharPolyData:
    return CharPolyData(A.modulus, A.trace, A.det)


def crt_split(A: ResidueMatrix, components: list[int] | None = None) -> list[ResidueMatrix]:
    comps = components if components is not None else prime_power_factors(A.modulus)
    if prod(comps) != A.modulus or any(gcd(x, y) != 1 for i, x in enumerate(comps) for y in comps[i + 1:]):
        raise ModulusMismatchError(f"components {comps} do not split {A.modulus}")
    return [A.reduce(q) for q in comps]


def crt_join(parts: list[ResidueMatrix]) -> ResidueMatrix:
    mods = [P.modulus for P in parts]
    for i, x in enumerate(mods):
        for y in mods[i + 1:]:
            if gcd(x, y) != 1:
                raise ModulusMismatchError(f"component moduli {x} and {y} are not coprime")
    n = prod(mods)
    entries = [0, 0, 0, 0]
    for P in parts:
        q = P.modulus
        m = n // q
        lift = m * pow(m, -1, q) if q > 1 else 0
        for i in range(4):
            entries[i] += P.entries[i] * lift
    return ResidueMatrix(n, tuple(entries))


def crt_scalar(residues: list[int], moduli: list[int]) -> int:
    n = prod(moduli)
    x = 0
    for r, q in zip(residues, moduli):
        m = n // q
        x += r * m * pow(m, -1, q) if q > 1 else 0
    return x % n


def parse_generators(text: str, modulus: int) -> list[ResidueMatrix]:
    parts = [s for s in text.split(";") if s.strip()]
    return [ResidueMatrix.from_text(s, modulus) for s in parts]


def format_generators(gens) -> str:
    return ";".join(g.to_text() for g in gens)


# vectorized helpers over packed keys (int64); safe while N^4 < 2^63

MAX_PACK_MODULUS = 55108


def decode(keys: np.ndarray, n: int):
    keys = np.asarray(keys, dtype=np.int64)
    d = keys % n
    keys = keys // n
    c = keys % n
    keys = keys // n
    return keys // n, keys % n, c, d


def encode(a, b, c, d, n: int) -> np.ndarray:
    return ((a * n + b) * n + c) * n + d


def mul_arrays(x, y, n: int):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def det_array(keys: np.ndarray, n: int) -> np.ndarray:
    a, b, c, d = decode(keys, n)
    return (a * d - b * c) % n


def trace_array(keys: np.ndarray, n: int) -> np.ndarray:
    a, _, _, d = decode(keys, n)
    return (a + d) % n
