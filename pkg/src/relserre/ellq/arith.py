"""Integer helpers: squarefree parts, the N' normalization, quadratic characters, primes."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from sympy import factorint
from sympy.functions.combinatorial.numbers import kronecker_symbol

from ..errors import ParseError


def squarefree_part(n: int) -> int:
    """n divided by its largest square divisor, sign kept."""
    if n == 0:
        raise ParseError("squarefree part of 0 is undefined")
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(abs(n))) if n not in (0, 1, -1) else []


def n_prime(N: int) -> int:
    """The normalization N' = +-N or +-N/2 with N' = 1 mod 4; depends only on |N|."""
    N = abs(N)
    if N == 0 or not is_squarefree(N):
        raise ParseError(f"{N} is not a nonzero squarefree integer")
    r = N % 8
    if r in (1, 5):
        return N
    if r in (3, 7):
        return -N
    if r == 2:
        return N // 2
    return -(N // 2)


def k_of(N: int) -> int:
    return 3 if N % 2 == 0 else 2


def kronecker(a: int, n: int) -> int:
    return int(kronecker_symbol(a, n))


def is_square(n: int) -> bool:
    if n < 0:
        return False
    from math import isqrt
    r = isqrt(n)
    return r * r == n


@lru_cache(maxsize=8)
def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def valuation(n: int, p: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
