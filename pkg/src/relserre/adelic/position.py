"""Frobenius samples and placement of a 2-adic group inside a curve's Kummer frame.

A 2-adic label names a group only up to conjugacy.  To compare it with
Frobenius data that includes frame bits, the group must be conjugated so that
every observed code (frame bits, trace mod 8, det mod 8) lies in its support.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ellq.curves import CurveModel
from ..ellq.points import frobenius_traces
from ..fingroup.core import GroupSlice, conjugate_keys, gl2, preimage_at, closure
from ..modmat import ResidueMatrix, det_array, trace_array
from .frames import KummerFrame

TWO_MOD = 8


@dataclass(frozen=True)
class FrobeniusSample:
    p: int
    a_p: int
    bits: tuple  # frame bits, empty without a frame

    def code(self) -> int:
        fc = 0
        for b in self.bits:
            fc = 2 * fc + b
        return (fc * TWO_MOD + self.a_p % TWO_MOD) * TWO_MOD + self.p % TWO_MOD


def frobenius_sample(curve: CurveModel, frame: KummerFrame | None, bound: int, avoid: int = 1) -> list:
    """Good odd primes p <= bound coprime to `avoid` and to every frame radicand."""
    rad = 1
    if frame is not None:
        for u in frame.radicands:
            rad *= u
    out = []
    for p, a in frobenius_traces(curve, bound).items():
        if p == 2 or avoid % p == 0 or rad % p == 0:
            continue
        bits = frame.frobenius_bits(p) if frame is not None else ()
        out.append(FrobeniusSample(p, a, bits))
    return out


def element_codes(G: GroupSlice, frame: KummerFrame | None) -> np.ndarray:
    """Codes (frame bits, trace, det) of the elements of a group at modulus 8, aligned with G.elements."""
    if G.modulus != TWO_MOD:
        raise ValueError("codes are defined at modulus 8")
    el = G.elements
    fc = frame.element_codes(el, TWO_MOD) if frame is not None else np.zeros(len(el), dtype=np.int64)
    return (fc * TWO_MOD + trace_array(el, TWO_MOD)) * TWO_MOD + det_array(el, TWO_MOD)


def support(G: GroupSlice, frame: KummerFrame | None) -> set:
    return set(np.unique(element_codes(G, frame)).tolist())


def conjugators_for(frame: KummerFrame | None) -> np.ndarray:
    """Conjugations that preserve the ambient group of the frame bits."""
    if frame is not None and frame.kind == "2B":
        return preimage_at(closure([ResidueMatrix.of(1, 1, 0, 1, 2)], 2), TWO_MOD).elements
    return gl2(TWO_MOD).elements


def frame_positions(H: GroupSlice, frame: KummerFrame | None, sample: list, first_only: bool = False) -> list:
    """Distinct conjugates of H (modulus 8) whose support contains every sampled Frobenius code."""
    obs = {s.code() for s in sample}
    if frame is None:
        return [H] if obs <= support(H, frame) else []
    if first_only and obs <= support(H, frame):
        return [H]
    seen, out = set(), []
    for x in conjugators_for(frame):
        X = ResidueMatrix.from_key(int(x), TWO_MOD)
        ck = np.unique(conjugate_keys(H.elements, X))
        key = ck.tobytes()
        if key in seen:
            continue
        seen.add(key)
        Hx = GroupSlice(TWO_MOD, elements=ck)
        if obs <= support(Hx, frame):
            out.append(Hx)
            if first_only:
                break
    return out
