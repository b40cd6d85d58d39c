"""Entanglement correction factors: closed forms and the character sum over Phi_E."""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from sympy import primitive_root

from ..adelic.image import FiberImage
from ..ellq.arith import is_squarefree, prime_divisors, squarefree_part
from ..errors import InconsistencyError, RelSerreError
from ..fingroup.core import reduce_each
from ..modmat import ResidueMatrix, gl2_order


class DomainError(RelSerreError, ValueError):
    """Correction factor requested where it is undefined (2Cs: C_E = 0)."""


def _term(ell: int) -> Fraction:
    return Fraction(-1, (ell * ell - 1) * (ell * ell - ell))


def _product(primes) -> Fraction:
    out = Fraction(1)
    for ell in primes:
        out *= _term(ell)
    return out


def correction_2b(disc: int) -> Fraction:
    d = squarefree_part(disc)
    if d % 4 != 1:
        return Fraction(1)
    return 1 + (-1) * _product(prime_divisors(d))


def correction_2cn(f: int) -> Fraction:
    if not is_squarefree(f):
        return Fraction(1)
    return 1 + 2 * Fraction(-1, 2) * _product(prime_divisors(f))


def correction_factor(result) -> Fraction:
    """Closed form for a classified 2B or 2Cn relative Serre curve."""
    if result.obstruction == "2Cs":
        raise DomainError("2Cs-Serre curves have C_E = 0; the correction factor is undefined")
    if result.obstruction not in ("2B", "2Cn") or not result.is_relative_serre:
        raise DomainError(f"{result.curve} is not a 2B- or 2Cn-Serre curve")
    if result.obstruction == "2B":
        return correction_2b(result.curve.disc)
    return correction_2cn(result.entanglement.cubic_conductor)


# -- character sum --------------------------------------------------------------

def _units(n: int) -> list:
    return [u for u in range(n) if gcd(u, n) == 1]


def _cyclic_log(H2_keys: list, modulus: int = 2) -> tuple:
    """Generator of the cyclic group H(2) and the exponent of each element with respect to it."""
    els = [ResidueMatrix.from_key(k, modulus) for k in H2_keys]
    one = ResidueMatrix.identity(modulus)
    gens = [g for g in els if g.key != one.key]
    if not gens:
        return 1, {one.key: 0}
    g = gens[0]
    logs, x, j = {}, one, 0
    while True:
        logs[x.key] = j
        x, j = x @ g, j + 1
        if x.key == one.key:
            break
    if len(logs) != len(els):
        raise InconsistencyError("mod-2 image is not cyclic")
    return len(logs), logs


def phi_pairs(image: FiberImage) -> tuple:
    """G_E(m) for m the squarefree part of the level, as pairs (x in H(2), u in (Z/m_odd)^x).

    Since G_E(m) contains SL2 at every odd prime, membership depends only on the
    mod-2 image and the determinant modulo the odd part of m.
    """
    H = image.two_group
    M = image.odd_modulus
    m_odd = 1
    for ell in prime_divisors(M):
        m_odd *= ell
    x_of = reduce_each(H.elements, H.modulus, 2)
    two = image.two_codes()
    V: dict = {}
    for x, c in zip(x_of.tolist(), two.tolist()):
        V.setdefault(x, set()).add(c)
    W: dict = {}
    if M > 1:
        units = np.array(_units(M), dtype=np.int64)
        for U, c in zip(units.tolist(), image.odd_codes(units).tolist()):
            W.setdefault(U % m_odd, set()).add(c)
    else:
        W[0] = {0}
    pairs = {(x, u) for x, vs in V.items() for u, ws in W.items() if vs & ws}
    return sorted(V), m_odd, pairs


def general_correction_via_characters(image: FiberImage) -> tuple:
    """(correction, |Phi_E|) from the characters of prod_ell G_E(ell) trivial on G_E(m)."""
    H2, m_odd, pairs = phi_pairs(image)
    n2, logs = _cyclic_log(H2)
    ells = prime_divisors(m_odd)
    roots = {ell: int(primitive_root(ell)) for ell in ells}
    dlog = {}
    for ell in ells:
        r, t = roots[ell], {}
        v = 1
        for j in range(ell - 1):
            t[v] = j
            v = v * r % ell
        dlog[ell] = t
    # characters as exponent vectors (a mod n2, b_ell mod ell-1), valued in Z/D
    D = lcm(n2, *[ell - 1 for ell in ells])
    pair_data = []
    for x, u in pairs:
        pair_data.append((logs[x], [dlog[ell][u % ell] for ell in ells]))
    total = n2
    for ell in ells:
        total *= ell - 1
    n_phi = Fraction(total, len(pairs))
    if n_phi.denominator != 1:
        raise InconsistencyError("|G_E(m)| does not divide the product of the prime-level images")
    corr = Fraction(0)
    count = 0
    ranges = [range(n2)] + [range(ell - 1) for ell in ells]
    for exps in itertools.product(*ranges):
        a, bs = exps[0], exps[1:]
        ok = True
        for j, ls in pair_data:
            s = a * j * (D // n2) + sum(b * l * (D // (ell - 1)) for b, l, ell in zip(bs, ls, ells))
            if s % D:
                ok = False
                break
        if not ok:
            continue
        count += 1
        term = Fraction(1)
        if a % n2:
            term *= Fraction(-1, n2 - 1)
        for b, ell in zip(bs, ells):
            if b:
                term *= Fraction(-1, gl2_order(ell) - 1)
        corr += term
    if count != n_phi:
        raise InconsistencyError(f"Phi_E of order {n_phi} has {count} characters, so it is not abelian")
    return corr, int(n_phi)



def correction_from_density(image: FiberImage) -> Fraction:
    """Correction factor read off from the exact proportion of G_E(m) with every ell-component nontrivial.

    This counts the Chebotarev set directly and divides by the product of the
    prime-level factors 1 - 1/|G_E(ell)|, with no character theory.
    """
    H2, m_odd, pairs = phi_pairs(image)
    if len(H2) == 1:
        raise DomainError("trivial mod-2 image: no prime is cyclic, so the correction factor is undefined")
    one = ResidueMatrix.identity(2).key
    ells = prime_divisors(m_odd)
    sl = {ell: gl2_order(ell) // (ell - 1) for ell in ells}
    good = 0
    for x, u in pairs:
        if x == one:
            continue
        n = 1
        for ell in ells:
            n *= sl[ell] - (1 if u % ell == 1 else 0)
        good += n
    total = len(pairs)
    for ell in ells:
        total *= sl[ell]
    density = Fraction(good, total)
    base = Fraction(len(H2) - 1, len(H2))
    for ell in ells:
        base *= 1 - Fraction(1, gl2_order(ell))
    return density / base
