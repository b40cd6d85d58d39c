"""Dirichlet characters on (Z/n)^x with values in Z/2 or Z/3, tabulated by residue."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import factorint, primitive_root

from ..ellq.arith import kronecker
from ..errors import InconsistencyError


@dataclass(frozen=True)
class DirichletCharacter:
    """chi: (Z/modulus)^x -> Z/order given by a table over all residues (-1 off the units)."""

    modulus: int
    order: int
    table: tuple
    name: str = ""

    def __call__(self, u: int) -> int:
        return self.table[u % self.modulus]

    def values(self, residues: np.ndarray) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)[np.asarray(residues) % self.modulus]

    def inverse(self) -> DirichletCharacter:
        t = tuple(-1 if v < 0 else (-v) % self.order for v in self.table)
        return DirichletCharacter(self.modulus, self.order, t, self.name + "^-1")


@lru_cache(maxsize=256)
def quadratic_character(n_prime: int) -> DirichletCharacter:
    """chi_{N'} = (N'/.) as a character mod |N'| with values 0 (for +1) and 1 (for -1)."""
    if n_prime % 4 != 1:
        raise InconsistencyError(f"{n_prime} is not 1 mod 4")
    m = abs(n_prime)
    if m == 1:
        return DirichletCharacter(1, 2, (0,), "chi_1")
    tab = []
    for u in range(m):
        if gcd(u, m) != 1:
            tab.append(-1)
        else:
            tab.append(0 if kronecker(n_prime, u) == 1 else 1)
    return DirichletCharacter(m, 2, tuple(tab), f"chi_{n_prime}")


def _component_moduli(f: int) -> list:
    out = []
    for p, e in sorted(factorint(f).items()):
        if p == 3:
            if e != 2:
                raise InconsistencyError(f"conductor {f} of a cubic character has 3-part 3^{e}")
            out.append(9)
        else:
            if e != 1 or p % 3 != 1:
                raise InconsistencyError(f"conductor {f} is not of cubic type")
            out.append(p)
    return out


@lru_cache(maxsize=64)
def _dlog_mod3(q: int) -> tuple:
    """u -> discrete log of u base a primitive root of q, reduced mod 3 (-1 off the units)."""
    g = primitive_root(q)
    tab = [-1] * q
    x = 1
    phi = sum(1 for u in range(1, q) if gcd(u, q) == 1)
    for k in range(phi):
        tab[x] = k % 3
        x = x * g % q
    return tuple(tab)


@lru_cache(maxsize=64)
def primitive_cubic_characters(f: int) -> tuple:
    """Primitive order-3 characters of conductor f, one from each inverse pair."""
    comps = _component_moduli(f)
    out = []
    for coeffs in itertools.product((1, 2), repeat=len(comps)):
        if coeffs[0] != 1:
            continue
        tab = []
        for u in range(f):
            if gcd(u, f) != 1:
                tab.append(-1)
                continue
            tab.append(sum(c * _dlog_mod3(q)[u % q] for c, q in zip(coeffs, comps)) % 3)
        out.append(DirichletCharacter(f, 3, tuple(tab), f"xi_{f}_{''.join(map(str, coeffs))}"))
    return tuple(out)
