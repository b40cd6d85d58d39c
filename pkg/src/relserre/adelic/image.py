"""Adelic images as structural fiber products: a 2-adic group H at modulus 2^e
glued to GL2(Z/M) (M odd) by conditions eps(A_2) = chi(det A).

Such a group is never materialized at the full modulus.  Its order is counted
exactly from the fibers of the gluing characters, membership is a predicate,
and a generating set is written down and cross-checked by Schreier-Sims on a
faithful permutation representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from ..errors import InconsistencyError, ResourceCapError
from ..fingroup.core import GroupSlice, gl2, reduce_each
from ..modmat import (
    ResidueMatrix, crt_join, crt_split, decode, det_array, encode, gl2_order, sl2_order,
)
from .dirichlet import DirichletCharacter


@dataclass(frozen=True)
class FiberCondition:
    """eps(A mod 2^e) = chi(det A mod |chi|), both with values in Z/q."""

    name: str
    q: int
    two_values: np.ndarray = field(repr=False, compare=False)  # aligned with the 2-adic group's elements
    dirichlet: DirichletCharacter = field(compare=False)
    label: str = ""  # e.g. "eps_1" or "omega"

    def describe(self) -> dict:
        return {"two_adic": self.label or self.name, "dirichlet_modulus": self.dirichlet.modulus,
                "order": self.q, "dirichlet": self.dirichlet.name}


def _units(n: int) -> np.ndarray:
    return np.array([u for u in range(n) if gcd(u, n) == 1], dtype=np.int64)


class FiberImage:
    """{A in GL2(Z/2^e M) : A mod 2^e in H and every condition holds}."""

    def __init__(self, two_group: GroupSlice, odd_modulus: int, conditions: list):
        if odd_modulus % 2 == 0:
            raise InconsistencyError("odd part of the modulus must be odd")
        self.two_group = two_group
        self.two_modulus = two_group.modulus
        self.odd_modulus = int(odd_modulus)
        self.conditions = list(conditions)
        for c in self.conditions:
            if self.odd_modulus % c.dirichlet.modulus:
                raise InconsistencyError(f"{c.name}: Dirichlet modulus does not divide {odd_modulus}")

    # -- basic data -------------------------------------------------------
    @property
    def modulus(self) -> int:
        return self.two_modulus * self.odd_modulus

    def _two_vectors(self) -> np.ndarray:
        cols = [c.two_values for c in self.conditions]
        if not cols:
            return np.zeros((self.two_group.order, 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def _odd_vectors(self, units: np.ndarray) -> np.ndarray:
        cols = [c.dirichlet.values(units) for c in self.conditions]
        if not cols:
            return np.zeros((len(units), 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def _code(self, vecs: np.ndarray) -> np.ndarray:
        out = np.zeros(len(vecs), dtype=np.int64)
        for j, c in enumerate(self.conditions):
            out = out * c.q + vecs[:, j]
        return out

    def two_codes(self) -> np.ndarray:
        """Joint condition value of each element of the 2-adic group, packed as one integer."""
        return self._code(self._two_vectors())

    def odd_codes(self, units: np.ndarray) -> np.ndarray:
        """Joint Dirichlet value of each unit modulo the odd modulus."""
        return self._code(self._odd_vectors(units))

    # -- order and index ----------------------------------------------------
    def order(self) -> int:
        two = self._code(self._two_vectors())
        units = _units(self.odd_modulus) if self.odd_modulus > 1 else np.array([0])
        odd = self._code(self._odd_vectors(units)) if self.odd_modulus > 1 else np.zeros(1, dtype=np.int64)
        size = int(np.prod([c.q for c in self.conditions])) if self.conditions else 1
        n2 = np.bincount(two, minlength=size)
        nu = np.bincount(odd, minlength=size)
        sl = sl2_order(self.odd_modulus) if self.odd_modulus > 1 else 1
        return int((n2 * nu).sum()) * sl

    def index(self) -> int:
        total = gl2_order(self.modulus)
        o = self.order()
        if total % o:
            raise InconsistencyError("image order does not divide |GL2|")
        return total // o

    def det_surjective(self) -> bool:
        """Every pair (unit mod 2^e, unit mod M) is the determinant of some element."""
        two = self._code(self._two_vectors())
        d2 = det_array(self.two_group.elements, self.two_modulus)
        have = set(zip(d2.tolist(), two.tolist()))
        units2 = _units(self.two_modulus)
        if self.odd_modulus == 1:
            return set(units2.tolist()) <= {d for d, _ in have}
        unitsM = _units(self.odd_modulus)
        need = set(self._code(self._odd_vectors(unitsM)).tolist())
        return all((int(d), v) in have for d in units2 for v in need)

    # -- membership ---------------------------------------------------------
    def _split(self, A: ResidueMatrix):
        if A.modulus != self.modulus:
            A = A.reduce(self.modulus) if A.modulus % self.modulus == 0 else None
            if A is None:
                raise InconsistencyError("matrix modulus incompatible with the image modulus")
        a2 = A.reduce(self.two_modulus)
        return A, a2

    def contains(self, A: ResidueMatrix) -> bool:
        A, a2 = self._split(A)
        if not A.is_invertible():
            return False
        el = self.two_group.elements
        pos = int(np.searchsorted(el, a2.key))
        if pos >= len(el) or el[pos] != a2.key:
            return False
        d = A.det % self.odd_modulus if self.odd_modulus > 1 else 0
        for c in self.conditions:
            if int(c.two_values[pos]) != c.dirichlet(d):
                return False
        return True

    # -- generators -----------------------------------------------------------
    def generators(self) -> list:
        """Lifts of generators of H, SL2 generators at the odd part, and kernel units."""
        n2, M = self.two_modulus, self.odd_modulus
        if M == 1:
            return list(self.two_group.gens)
        units = _units(M)
        ucode = self._code(self._odd_vectors(units))
        rep = {}
        for u, c in zip(units.tolist(), ucode.tolist()):
            rep.setdefault(c, u)
        el = self.two_group.elements
        tcode = self._code(self._two_vectors())
        gens = []
        for h in self.two_group.gens:
            pos = int(np.searchsorted(el, h.key))
            c = int(tcode[pos])
            if c not in rep:
                raise InconsistencyError("no odd determinant matches a generator's character values")
            gens.append(crt_join([h, ResidueMatrix.of(1, 0, 0, rep[c], M)]))
        one2 = ResidueMatrix.identity(n2)
        for s in (ResidueMatrix.of(1, 1, 0, 1, M), ResidueMatrix.of(1, 0, 1, 1, M)):
            gens.append(crt_join([one2, s]))
        for u in _kernel_unit_generators(units, ucode, M):
            gens.append(crt_join([one2, ResidueMatrix.of(1, 0, 0, u, M)]))
        return gens

    def small_generators(self) -> list:
        """Greedy reduction: drop generators while the generated order is preserved."""
        gens = self.generators()
        target = permutation_order(gens)
        i = 0
        while i < len(gens):
            trial = gens[:i] + gens[i + 1:]
            if trial and permutation_order(trial) == target:
                gens = trial
            else:
                i += 1
        return gens

    # -- derived groups -------------------------------------------------------
    def at_two_modulus(self, e2: int) -> FiberImage:
        """Same image with the 2-part stored at modulus e2 | 2^e (must be a level)."""
        if self.two_modulus % e2:
            raise InconsistencyError("new 2-power modulus must divide the old one")
        el = self.two_group.elements
        red = reduce_each(el, self.two_modulus, e2)
        new_el, inv = np.unique(red, return_inverse=True)
        if len(el) != len(new_el) * (gl2_order(self.two_modulus) // gl2_order(e2)):
            raise InconsistencyError(f"2-adic group is not of level dividing {e2}")
        conds = []
        for c in self.conditions:
            vals = np.full(len(new_el), -1, dtype=np.int64)
            vals[inv] = c.two_values
            check = vals[inv]
            if not np.array_equal(check, c.two_values):
                raise InconsistencyError(f"{c.name} does not factor through modulus {e2}")
            conds.append(FiberCondition(c.name, c.q, vals, c.dirichlet, c.label))
        return FiberImage(GroupSlice(e2, elements=new_el), self.odd_modulus, conds)

    def materialize(self, cap: int = 2_000_000) -> GroupSlice:
        """All elements at the full modulus (only for small images)."""
        if self.order() > cap:
            raise ResourceCapError(f"image of order {self.order()} exceeds materialization cap {cap}")
        M, n2, n = self.odd_modulus, self.two_modulus, self.modulus
        if M == 1:
            return self.two_group
        odd = gl2(M).elements
        oa, ob, oc, od = decode(odd, M)
        ocode = self._code(self._odd_vectors((oa * od - ob * oc) % M))
        tcode = self._code(self._two_vectors())
        ta, tb, tc, td = decode(self.two_group.elements, n2)
        e1 = M * pow(M, -1, n2) % n
        e2 = n2 * pow(n2, -1, M) % n
        parts = []
        for code in np.unique(tcode):
            ti = np.flatnonzero(tcode == code)
            oi = np.flatnonzero(ocode == code)
            ent = [(x[ti][:, None] * e1 + y[oi][None, :] * e2) % n for x, y in zip((ta, tb, tc, td), (oa, ob, oc, od))]
            parts.append(encode(*(z.ravel() for z in ent), n))
        return GroupSlice(n, elements=np.concatenate(parts))

    def describe(self) -> list:
        return [c.describe() for c in self.conditions]


def _kernel_unit_generators(units: np.ndarray, codes: np.ndarray, M: int) -> list:
    """Greedy generators of the units u mod M on which every condition character vanishes."""
    chosen, span = [], {1 % M}
    for u in units[codes == 0].tolist():
        if u in span:
            continue
        chosen.append(u)
        new, power = set(span), u
        while power not in span:
            new |= {x * power % M for x in span}
            power = power * u % M
        span = new
    return chosen


# -- permutation representation ------------------------------------------------

@lru_cache(maxsize=64)
def _vector_block(q_power: int) -> tuple:
    pts = [(x, y) for x in range(q_power) for y in range(q_power)]
    return pts, {p: i for i, p in enumerate(pts)}


def permutation_of(A: ResidueMatrix) -> list:
    """Action of A on the disjoint union of (Z/q^e)^2 over the prime-power components of its modulus."""
    image, offset = [], 0
    for part in crt_split(A):
        pts, idx = _vector_block(part.modulus)
        a, b, c, d = part.entries
        n = part.modulus
        image.extend(offset + idx[((a * x + b * y) % n, (c * x + d * y) % n)] for x, y in pts)
        offset += len(pts)
    return image


def permutation_group(gens: list) -> PermutationGroup:
    if not gens:
        raise InconsistencyError("need at least one generator")
    return PermutationGroup([Permutation(permutation_of(g)) for g in gens])


def permutation_order(gens: list) -> int:
    return int(permutation_group(gens).order())


def conjugate_two_part(A: ResidueMatrix, x: ResidueMatrix) -> ResidueMatrix:
    """Conjugate the 2-power component of A by x (x at that 2-power modulus)."""
    parts = crt_split(A)
    out = []
    for p in parts:
        if p.modulus % 2 == 0:
            if p.modulus != x.modulus:
                x = x.reduce(p.modulus) if x.modulus % p.modulus == 0 else None
                if x is None:
                    raise InconsistencyError("conjugator modulus incompatible")
            out.append(x @ p @ (x ** -1))
        else:
            out.append(p)
    return crt_join(out)


def odd_part(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    return n


def two_part(n: int) -> int:
    return n // odd_part(n)


def two_adic_conjugators(image: FiberImage, gens: list) -> list:
    """All x in GL2(Z/2^e) that move every given matrix into the image by conjugating its 2-part."""
    out = []
    for key in gl2(image.two_modulus).elements:
        x = ResidueMatrix.from_key(int(key), image.two_modulus)
        if all(image.contains(conjugate_two_part(g, x)) for g in gens):
            out.append(x)
    return out
