"""Kummer frames: quadratic characters of G_E(4) pinned to explicit radicands.

A frame fixes a basis of E[4] adapted to the rational 2-torsion.  In that basis
each coordinate bit of a matrix mod 4 is a homomorphism on the ambient group
(2Cs-hat(4) or 2B-hat(4)), and the Weil pairing identifies the bit of a
Frobenius element with a Legendre symbol (u / p) for a radicand u built from
the 2-torsion x-coordinates.  Matrices act on column vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from sympy import factorint

from ..ellq.arith import kronecker
from ..ellq.curves import PartialSplit, Split
from ..errors import InconsistencyError
from ..modmat import decode

Bits = Callable[[tuple], np.ndarray]


def _x11(m):
    return ((m[0] % 4) // 2).astype(np.int64)


def _x12(m):
    return ((m[1] % 4) // 2).astype(np.int64)


def _x21(m):
    return ((m[2] % 4) // 2).astype(np.int64)


def _x22(m):
    return ((m[3] % 4) // 2).astype(np.int64)


def _b_s(m):
    return (m[1] % 2).astype(np.int64)


def _b_t(m):
    return ((m[2] % 4) // 2).astype(np.int64)


def _det_bit4(m):
    d = (m[0] * m[3] - m[1] * m[2]) % 4
    return (d == 3).astype(np.int64)


def _det_bit8_two(m):
    d = (m[0] * m[3] - m[1] * m[2]) % 8
    return np.isin(d, (3, 5)).astype(np.int64)


def legendre_bit(u: int, p: int) -> int:
    return 0 if kronecker(u, p) == 1 else 1


@dataclass(frozen=True)
class KummerFrame:
    """Radicands u_j with coordinate bits b_j such that b_j(Frob_p) = [(u_j/p) = -1]."""

    kind: str
    radicands: tuple
    bits: tuple  # callables on decoded (a, b, c, d) arrays

    def element_bits(self, elements: np.ndarray, modulus: int) -> np.ndarray:
        m = decode(elements, modulus)
        cols = [f(m) for f in self.bits]
        return np.stack(cols, axis=1) if cols else np.zeros((len(elements), 0), dtype=np.int64)

    def frobenius_bits(self, p: int) -> tuple:
        return tuple(legendre_bit(u, p) for u in self.radicands)

    def code(self, bits) -> int:
        out = 0
        for b in bits:
            out = 2 * out + int(b)
        return out

    def element_codes(self, elements: np.ndarray, modulus: int) -> np.ndarray:
        B = self.element_bits(elements, modulus)
        w = 2 ** np.arange(B.shape[1] - 1, -1, -1)
        return B @ w if B.shape[1] else np.zeros(len(elements), dtype=np.int64)

    def quadratic_character(self, d: int) -> FrameCharacter:
        return frame_character(self, d)


def frame_2cs(shape: Split) -> KummerFrame:
    a1, a2, a3 = shape.roots
    u11 = a1 - a2
    u22 = a2 - a1
    u21 = (a1 - a2) * (a1 - a3)
    u12 = (a2 - a1) * (a2 - a3)
    return KummerFrame("2Cs", (u11, u12, u21, u22), (_x11, _x12, _x21, _x22))


def frame_2b(shape: PartialSplit) -> KummerFrame:
    a, b, c = shape.a, shape.b, shape.c
    return KummerFrame("2B", (a * a - 4 * b, c * c - a * c + b), (_b_s, _b_t))


def frame_of(shape) -> KummerFrame | None:
    if isinstance(shape, Split):
        return frame_2cs(shape)
    if isinstance(shape, PartialSplit):
        return frame_2b(shape)
    return None


@dataclass(frozen=True)
class FrameCharacter:
    """Product of frame bits with optional det characters for -1 and 2 (values in Z/2)."""

    d: int
    frame_mask: tuple
    minus_one: int
    two: int

    @property
    def level(self) -> int:
        return 8 if self.two else 4

    def values(self, frame: KummerFrame, elements: np.ndarray, modulus: int) -> np.ndarray:
        B = frame.element_bits(elements, modulus)
        v = (B @ np.array(self.frame_mask, dtype=np.int64)) % 2 if B.shape[1] else np.zeros(len(elements), np.int64)
        m = decode(elements, modulus)
        if self.minus_one:
            v = (v + _det_bit4(m)) % 2
        if self.two:
            if modulus % 8:
                raise InconsistencyError("a character involving sqrt(2) needs modulus divisible by 8")
            v = (v + _det_bit8_two(m)) % 2
        return v


def _sf_vector(n: int, primes: list) -> list:
    """Exponent vector mod 2 of n over [-1] + primes."""
    fac = factorint(abs(n))
    vec = [1 if n < 0 else 0]
    for q in primes:
        vec.append(fac.get(q, 0) % 2)
    return vec


def frame_character(frame: KummerFrame, d: int) -> FrameCharacter:
    """Express sqrt(d) through the frame radicands, then -1 and 2 (det characters)."""
    gens = list(frame.radicands) + [-1, 2]
    primes = sorted({q for g in gens + [d] for q in factorint(abs(g))} | {2})
    rows = [_sf_vector(g, primes) for g in gens]
    target = _sf_vector(d, primes)
    n = len(gens)
    # Gaussian elimination over F2 on augmented columns (each generator is a column)
    basis: list[tuple[list, list]] = []  # (vector, combination)
    for j, r in enumerate(rows):
        v, comb = list(r), [0] * n
        comb[j] = 1
        for bv, bc in basis:
            piv = bv.index(1)
            if v[piv]:
                v = [(x + y) % 2 for x, y in zip(v, bv)]
                comb = [(x + y) % 2 for x, y in zip(comb, bc)]
        if any(v):
            basis.append((v, comb))
    v, comb = list(target), [0] * n
    for bv, bc in basis:
        piv = bv.index(1)
        if v[piv]:
            v = [(x + y) % 2 for x, y in zip(v, bv)]
            comb = [(x + y) % 2 for x, y in zip(comb, bc)]
    if any(v):
        raise InconsistencyError(f"sqrt({d}) is not generated by the frame radicands, -1 and 2")
    k = len(frame.radicands)
    return FrameCharacter(d, tuple(comb[:k]), comb[k], comb[k + 1])
