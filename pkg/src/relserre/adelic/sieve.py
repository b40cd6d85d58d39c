"""Frobenius sieve certifying surjectivity of rho_{E,ell} for odd ell.

For ell >= 5 a proper subgroup of GL2(F_ell) with surjective determinant lies in
a Borel subgroup, the normalizer of a split or nonsplit Cartan subgroup, or has
exceptional projective image (A4, S4, A5).  Each class is excluded by one
Frobenius element whose characteristic polynomial cannot occur in it.  For
ell = 3 surjectivity mod 9 is required and the sieve runs against the four
conjugacy types of maximal subgroups of GL2(Z/9) with surjective determinant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..ellq.curves import CurveModel
from ..ellq.points import frobenius_traces
from ..fingroup.core import closure, preimage_at
from ..modmat import ResidueMatrix, det_array, trace_array

SIEVE_ELLS = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
HEURISTIC_BEYOND = 37


def _is_square_mod(x: int, ell: int) -> bool:
    x %= ell
    return x == 0 or pow(x, (ell - 1) // 2, ell) == 1


def _kills_borel(t: int, d: int, ell: int) -> bool:
    disc = (t * t - 4 * d) % ell
    return disc != 0 and not _is_square_mod(disc, ell)


def _kills_normalizer_split(t: int, d: int, ell: int) -> bool:
    return t % ell != 0 and _kills_borel(t, d, ell)


def _kills_normalizer_nonsplit(t: int, d: int, ell: int) -> bool:
    disc = (t * t - 4 * d) % ell
    return t % ell != 0 and disc != 0 and _is_square_mod(disc, ell)


def _kills_exceptional(t: int, d: int, ell: int) -> bool:
    # u = t^2/det determines the projective order of a semisimple element
    u = t * t * pow(d, -1, ell) % ell
    return u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % ell != 0


_TESTS_LARGE = {
    "borel": _kills_borel,
    "normalizer_split_cartan": _kills_normalizer_split,
    "normalizer_nonsplit_cartan": _kills_normalizer_nonsplit,
    "exceptional": _kills_exceptional,
}


def _cp_set(G) -> frozenset:
    n = G.modulus
    return frozenset(zip(trace_array(G.elements, n).tolist(), det_array(G.elements, n).tolist()))


def exceptional_lift_mod9():
    """Order 144: surjects onto GL2(F3) but meets the kernel of reduction only in scalars."""
    R = ResidueMatrix.of
    return closure([R(2, 1, 2, 6, 9), R(2, 0, 0, 7, 9)], 9)


@lru_cache(maxsize=1)
def maximal_types_mod9() -> dict:
    """Char-poly sets of the maximal subgroups of GL2(Z/9) with surjective determinant."""
    R = ResidueMatrix.of
    borel = closure([R(1, 1, 0, 1, 3), R(2, 0, 0, 1, 3), R(1, 0, 0, 2, 3)], 3)
    split = closure([R(2, 0, 0, 1, 3), R(1, 0, 0, 2, 3), R(0, 1, 1, 0, 3)], 3)
    nonsplit = closure([R(1, 1, 2, 1, 3), R(1, 0, 0, 2, 3)], 3)
    return {
        "borel": _cp_set(preimage_at(borel, 9)),
        "normalizer_split_cartan": _cp_set(preimage_at(split, 9)),
        "normalizer_nonsplit_cartan": _cp_set(preimage_at(nonsplit, 9)),
        "exceptional_lift": _cp_set(exceptional_lift_mod9()),
    }


@dataclass(frozen=True)
class SurjectivityCertificate:
    ell: int
    certified: bool
    witnesses: dict = field(default_factory=dict)  # maximal type -> prime p

    @property
    def status(self) -> str:
        return "Certified" if self.certified else "Unknown"


def certify_mod_l_surjectivity(curve: CurveModel, ell: int, prime_bound: int = 1000) -> SurjectivityCertificate:
    """Certified when every maximal type is excluded by some Frobenius; otherwise Unknown."""
    traces = frobenius_traces(curve, prime_bound)
    witnesses: dict = {}
    if ell == 3:
        types = maximal_types_mod9()
        for p, a in traces.items():
            if p == 3:
                continue
            cp = (a % 9, p % 9)
            for name, cps in types.items():
                if name not in witnesses and cp not in cps:
                    witnesses[name] = p
            if len(witnesses) == len(types):
                break
        return SurjectivityCertificate(3, len(witnesses) == len(types), witnesses)
    for p, a in traces.items():
        if p == ell:
            continue
        for name, test in _TESTS_LARGE.items():
            if name not in witnesses and test(a, p, ell):
                witnesses[name] = p
        if len(witnesses) == len(_TESTS_LARGE):
            break
    return SurjectivityCertificate(ell, len(witnesses) == len(_TESTS_LARGE), witnesses)


def certify_odd_surjectivity(curve: CurveModel, prime_bound: int = 1000, ells=SIEVE_ELLS) -> dict:
    return {ell: certify_mod_l_surjectivity(curve, ell, prime_bound) for ell in ells}
