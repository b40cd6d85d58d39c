"""Cyclicity constants in product form, and the empirical count they predict."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..ellq.arith import primes_upto
from ..ellq.curves import CurveModel
from ..ellq.points import frobenius_traces, is_cyclic_group
from .correction import correction_factor

LEADING = {"2B": Fraction(1, 2), "2Cn": Fraction(2, 3)}


@dataclass(frozen=True)
class CyclicityConstant:
    prefactor: Fraction
    euler_product: float  # prod over odd ell <= L of 1 - 1/|GL2(F_ell)|
    tail_bound: float  # bound on |log| of the omitted factors
    L: int

    @property
    def value(self) -> float:
        return float(self.prefactor) * self.euler_product

    def interval(self) -> tuple:
        v = self.value
        return (v * math.exp(-self.tail_bound), v)

    def to_dict(self) -> dict:
        return {"prefactor": _frac(self.prefactor), "euler_product": self.euler_product,
                "tail_bound": self.tail_bound, "L": self.L}


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def tail_bound(L: int) -> float:
    """sum_{ell > L} 2/ell^4 <= int_L^oo 2/t^4 dt."""
    return 2.0 / (3.0 * float(L) ** 3)


@lru_cache(maxsize=8)
def euler_product(L: int) -> float:
    ell = primes_upto(int(L))
    ell = ell[ell > 2].astype(np.float64)
    x = 1.0 / ((ell * ell - 1.0) * (ell * ell - ell))
    return math.exp(math.fsum(np.log1p(-x).tolist()))


def cyclicity_constant(result, L: int = 10**6) -> CyclicityConstant:
    if L < 3:
        raise ValueError("Euler bound L must be at least 3")
    if result.obstruction == "2Cs":
        return CyclicityConstant(Fraction(0), euler_product(L), tail_bound(L), L)
    pre = correction_factor(result) * LEADING[result.obstruction]
    return CyclicityConstant(pre, euler_product(L), tail_bound(L), L)


def empirical_cyclicity(curve: CurveModel, x: int) -> Fraction | None:
    """Fraction of good primes p <= x with E(F_p) cyclic; None when there are none."""
    traces = frobenius_traces(curve, x)
    if not traces:
        return None
    cyc = sum(1 for p, a in traces.items() if is_cyclic_group(curve, p, a))
    return Fraction(cyc, len(traces))
