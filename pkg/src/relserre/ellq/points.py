"""Point counts over F_p: traces of Frobenius and cyclicity of E(F_p)."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import RelSerreError
from .arith import valuation
from .curves import CurveModel

AP_BOUND = 10**5


def is_good_prime(curve: CurveModel, p: int) -> bool:
    return curve.minimal_disc_valuation(p) == 0


def _p_minimal_short(curve: CurveModel, p: int) -> tuple:
    """(A, B) mod p of a short model that is minimal at p (p >= 5)."""
    c4, c6 = curve.c4, curve.c6
    v = valuation(curve.disc, p)
    while v >= 12 and valuation(c4, p) >= 4 and valuation(c6, p) >= 6:
        c4 //= p**4
        c6 //= p**6
        v -= 12
    return (-27 * c4) % p, (-54 * c6) % p


@lru_cache(maxsize=64)
def _square_table(p: int) -> np.ndarray:
    sq = np.zeros(p, dtype=np.int8)
    x = np.arange(p, dtype=np.int64)
    sq[(x * x) % p] = 1
    leg = np.where(sq == 1, 1, -1).astype(np.int64)
    leg[0] = 0
    return leg


def count_affine_long(curve: CurveModel, p: int) -> int:
    """Naive affine count over F_p of the long Weierstrass equation."""
    a1, a2, a3, a4, a6 = (c % p for c in curve.coefficients)
    x = np.arange(p, dtype=np.int64)[:, None]
    y = np.arange(p, dtype=np.int64)[None, :]
    lhs = (y * y + a1 * x * y + a3 * y) % p
    rhs = (((x * x % p) * x) + a2 * x * x + a4 * x + a6) % p
    return int((lhs == rhs).sum())


def ap(curve: CurveModel, p: int, bound: int = AP_BOUND) -> int:
    """a_p = p + 1 - #E(F_p) at a good prime p."""
    if p > bound:
        raise RelSerreError(f"prime {p} exceeds point-counting bound {bound}")
    if not is_good_prime(curve, p):
        raise RelSerreError(f"{p} is a bad prime for {curve}")
    if p < 5:
        val = p - count_affine_long(curve, p)
    else:
        A, B = _p_minimal_short(curve, p)
        x = np.arange(p, dtype=np.int64)
        f = ((x * x % p) * x + A * x + B) % p
        val = -int(_square_table(p)[f].sum())
    if val * val > 4 * p:
        raise RelSerreError(f"Hasse bound violated at p={p}: a_p={val}")
    return val


def ap_list(curve: CurveModel, primes) -> dict:
    return {int(p): ap(curve, int(p)) for p in primes}


def _torsion_rank_odd(A: int, B: int, p: int, ell: int) -> bool:
    """True when E(F_p) has full ell-torsion, for y^2 = x^3 + A x + B and odd prime ell."""
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    F = (x2 * x + A * x + B) % p
    Y2 = 16 * F % p * F % p  # (2y)^4
    # f_n = psi_n for odd n and psi_n / (2y) for even n, evaluated at every x in F_p
    f = {
        0: np.zeros(p, dtype=np.int64),
        1: np.ones(p, dtype=np.int64),
        2: np.ones(p, dtype=np.int64),
        3: (3 * x2 % p * x2 + 6 * A * x2 + 12 * B * x - A * A) % p,
        4: 2 * (x2 * x2 % p * x2 + 5 * A * x2 % p * x2 + 20 * B * x2 % p * x
                - 5 * A * A % p * x2 - 4 * A * B % p * x - 8 * B * B - A * A % p * A) % p,
    }

    def get(n):
        if n not in f:
            m = n // 2
            if n % 2:
                t1 = get(m + 2) * pow3(get(m)) % p
                t2 = get(m - 1) * pow3(get(m + 1)) % p
                f[n] = (Y2 * t1 - t2) % p if m % 2 == 0 else (t1 - Y2 * t2) % p
            else:
                inner = (get(m + 2) * sqr(get(m - 1)) - get(m - 2) * sqr(get(m + 1))) % p
                f[n] = get(m) * inner % p
        return f[n]

    def sqr(v):
        return v * v % p

    def pow3(v):
        return v * v % p * v % p

    roots = get(ell) == 0
    leg = _square_table(p)
    npts = 1 + 2 * int((roots & (leg[F] == 1)).sum())
    return npts == ell * ell


def is_cyclic_group(curve: CurveModel, p: int, a_p: int | None = None) -> bool:
    """Whether E(F_p) is cyclic, testing each ell with ell^2 | #E and ell | p - 1."""
    if a_p is None:
        a_p = ap(curve, p)
    n = p + 1 - a_p
    if p < 5:
        return _cyclic_small(curve, p)
    A, B = _p_minimal_short(curve, p)
    from sympy import factorint
    for ell, e in factorint(n).items():
        if e < 2 or (p - 1) % ell:
            continue
        if ell == 2:
            x = np.arange(p, dtype=np.int64)
            F = ((x * x % p) * x + A * x + B) % p
            if int((F == 0).sum()) == 3:
                return False
        elif _torsion_rank_odd(A, B, p, ell):
            return False
    return True


def _cyclic_small(curve: CurveModel, p: int) -> bool:
    a1, a2, a3, a4, a6 = (c % p for c in curve.coefficients)
    pts = [None] + [(x, y) for x in range(p) for y in range(p)
                    if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0]
    n = len(pts)
    # with at most 7 points, the group is cyclic unless it is Z/2 x Z/2
    if n != 4:
        return True
    two_torsion = [P for P in pts[1:] if (2 * P[1] + a1 * P[0] + a3) % p == 0]
    return len(two_torsion) != 3


@lru_cache(maxsize=128)
def _traces_cached(curve: CurveModel, bound: int) -> tuple:
    from .arith import primes_upto
    return tuple((int(p), ap(curve, int(p))) for p in primes_upto(bound) if is_good_prime(curve, int(p)))


def frobenius_traces(curve: CurveModel, bound: int) -> dict:
    """{p: a_p} over good primes p <= bound (cached per curve and bound)."""
    return dict(_traces_cached(curve, int(bound)))
