"""Quadratic and cubic entanglement data (N_i, N_i', k_i), D_E and the cubic conductor."""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from ..errors import InconsistencyError
from .arith import k_of, n_prime, squarefree_part
from .cubic import cubic_field_conductor
from .curves import CurveModel, Irreducible, PartialSplit, Split

TWO_ADIC_INDEX_COUNT = {6: 3, 12: 2, 24: 1}


@dataclass(frozen=True)
class Entanglement:
    N: int
    N_prime: int
    k: int

    def to_dict(self) -> dict:
        return {"N": self.N, "N_prime": self.N_prime, "k": self.k}


@dataclass(frozen=True)
class EntanglementData:
    obstruction: str
    triples: tuple = ()
    S: tuple = ()
    D_E: int | None = None
    cubic_conductor: int | None = None

    def to_list(self) -> list:
        out = [dict(t.to_dict(), kind="quadratic") for t in self.triples]
        if self.cubic_conductor is not None:
            out.append({"kind": "cubic", "f": self.cubic_conductor})
        return out


def _entry(N: int) -> Entanglement:
    return Entanglement(N, n_prime(N), k_of(N))


def s_set_2cs(shape: Split) -> tuple:
    a, b, c = shape.roots
    A, B, C = a - b, a - c, b - c
    vals = {abs(squarefree_part(v)) for v in (A, B, C, A * B, A * C, B * C, A * B * C)}
    return tuple(sorted(vals - {1, 2}))


def select_2cs(S: tuple, count: int) -> list:
    if not S:
        raise InconsistencyError("the set S is empty; no quadratic entanglement can be selected")
    chosen = [S[0]]
    if count >= 2:
        rest = [n for n in S if n % chosen[0]]
        if not rest:
            raise InconsistencyError(f"no N_2 in S={S} avoiding multiples of {chosen[0]}")
        chosen.append(rest[0])
    if count >= 3:
        n1, n2 = chosen
        n12 = abs(squarefree_part(n1 * n2))
        rest = [n for n in S if n % n1 and n % n2 and n % n12]
        if not rest:
            raise InconsistencyError(f"no N_3 in S={S} compatible with N_1={n1}, N_2={n2}")
        chosen.append(rest[0])
    return chosen


def entanglement_data_2cs(shape: Split, two_adic_index: int) -> EntanglementData:
    if two_adic_index not in TWO_ADIC_INDEX_COUNT:
        raise InconsistencyError(f"2-adic index {two_adic_index} is not 6, 12 or 24")
    S = s_set_2cs(shape)
    Ns = select_2cs(S, TWO_ADIC_INDEX_COUNT[two_adic_index])
    return EntanglementData("2Cs", tuple(_entry(n) for n in Ns), S)


def s_set_2b(shape: PartialSplit) -> tuple:
    a, b, c = shape.a, shape.b, shape.c
    d1 = a * a - 4 * b
    d2 = a * c - c * c - b
    return tuple(sorted({abs(squarefree_part(d1)), abs(squarefree_part(d2)), abs(squarefree_part(d1 * d2))}))


def entanglement_data_2b(shape: PartialSplit, label: str) -> EntanglementData:
    S = s_set_2b(shape)
    if label == "2.3.0.1":
        n1 = S[0]
        rest = [n for n in S if n % n1]
        if not rest:
            raise InconsistencyError(f"no N_2 in S={S} avoiding multiples of {n1}")
        Ns = [n1, rest[0]]
        for n in Ns:
            if n_prime(n) == 1:
                raise InconsistencyError(f"N={n} has N'=1, impossible for 2.3.0.1")
    else:
        cand = [n for n in S if n_prime(n) != 1]
        if not cand:
            raise InconsistencyError(f"every N in S={S} has N'=1")
        Ns = [cand[0]]
    return EntanglementData("2B", tuple(_entry(n) for n in Ns), S)


def sqrt_disc_squarefree(curve: CurveModel) -> int:
    """D_E = (sqrt(Delta_E))_sf for a curve whose discriminant is a square."""
    D = curve.disc
    r = isqrt(D) if D > 0 else -1
    if D <= 0 or r * r != D:
        raise InconsistencyError(f"discriminant {D} is not a square, so the curve is not 2Cn")
    return squarefree_part(r)


def entanglement_data_2cn(curve: CurveModel, shape: Irreducible, label: str) -> EntanglementData:
    D = sqrt_disc_squarefree(curve)
    f = cubic_field_conductor(shape.cubic)
    if f % 2 == 0:
        raise InconsistencyError(f"cubic conductor {f} is even")
    triples = ()
    if label == "2.2.0.1":
        if abs(D) in (1, 2):
            raise InconsistencyError(f"D_E={D} gives no quadratic entanglement")
        triples = (Entanglement(D, n_prime(abs(D)), k_of(D)),)
    return EntanglementData("2Cn", triples, (), D_E=D, cubic_conductor=f)
