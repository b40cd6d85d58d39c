"""Goursat fiber products G1 x_Q G2 over a cyclic quotient, embedded by CRT."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from ..errors import ModulusMismatchError, RelSerreError
from ..modmat import decode, encode
from .core import GroupSlice, DEFAULT_CAP
from ..errors import ResourceCapError


def extend_hom(G: GroupSlice, gen_values: dict, q: int) -> np.ndarray:
    """Value map (aligned with G.elements) of the homomorphism G -> Z/q fixed on generators.

    Raises when the assignment does not extend to a homomorphism.
    """
    el = G.elements
    n = G.modulus
    gens = list(G.gens)
    keys = [g.key for g in gens]
    vals = [gen_values[k] % q for k in keys]
    values = -np.ones(len(el), dtype=np.int64)
    ident = int(np.searchsorted(el, encode(1, 0, 0, 1 % n, n) if n > 1 else 0))
    values[ident] = 0
    a, b, c, d = decode(el, n)
    frontier = np.array([ident])
    # right multiplication tables per generator
    right = []
    for g in gens:
        e, f, gg, h = g.entries
        prod = encode((a * e + b * gg) % n, (a * f + b * h) % n, (c * e + d * gg) % n, (c * f + d * h) % n, n)
        right.append(np.searchsorted(el, prod))
    while frontier.size:
        nxt = []
        for r, v in zip(right, vals):
            tgt = r[frontier]
            new_vals = (values[frontier] + v) % q
            fresh = values[tgt] < 0
            values[tgt[fresh]] = new_vals[fresh]
            nxt.append(tgt[fresh])
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=np.int64)
    for r, v in zip(right, vals):
        if not np.array_equal(values[r], (values + v) % q):
            raise RelSerreError("generator values do not define a homomorphism")
    return values


@dataclass
class FiberProductSpec:
    left: GroupSlice
    right: GroupSlice
    q: int
    psi_left: dict
    psi_right: dict

    def __post_init__(self):
        if gcd(self.left.modulus, self.right.modulus) != 1:
            raise ModulusMismatchError("fiber product factors need coprime moduli")


def fiber_product(spec: FiberProductSpec, cap: int = DEFAULT_CAP) -> GroupSlice:
    G1, G2, q = spec.left, spec.right, spec.q
    v1 = extend_hom(G1, spec.psi_left, q)
    v2 = extend_hom(G2, spec.psi_right, q)
    if len(np.unique(v1)) != q or len(np.unique(v2)) != q:
        raise RelSerreError("fiber maps must be surjective onto Z/q")
    order = G1.order * G2.order // q
    if order > cap:
        raise ResourceCapError(f"fiber product of order {order} exceeds cap {cap}")
    m1, m2 = G1.modulus, G2.modulus
    n = m1 * m2
    # CRT idempotents
    e1 = m2 * pow(m2, -1, m1) % n
    e2 = m1 * pow(m1, -1, m2) % n
    parts = []
    for t in range(q):
        A = decode(G1.elements[v1 == t], m1)
        B = decode(G2.elements[v2 == t], m2)
        ent = [(x[:, None] * e1 + y[None, :] * e2) % n for x, y in zip(A, B)]
        parts.append(encode(*[z.ravel() for z in ent], n))
    H = GroupSlice(n, elements=np.concatenate(parts))
    assert H.order == order
    return H


def direct_product(G1: GroupSlice, G2: GroupSlice, cap: int = DEFAULT_CAP) -> GroupSlice:
    spec = FiberProductSpec(G1, G2, 1, {g.key: 0 for g in G1.gens}, {g.key: 0 for g in G2.gens})
    return fiber_product(spec, cap=cap)
