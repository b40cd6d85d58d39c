"""GroupSlice and the vectorized closure engine over packed matrix keys."""
from __future__ import annotations

from math import gcd

import numpy as np

from ..errors import ModulusMismatchError, NonInvertibleError, ResourceCapError, RelSerreError
from ..modmat import (
    MAX_PACK_MODULUS, ResidueMatrix, decode, encode, gl2_order, mul_arrays, det_array, mat_inv,
)

DEFAULT_CAP = 10**7
# above this many possible keys, membership falls back to sorted arrays instead of a bitmap
_BITMAP_LIMIT = 3 * 10**7


class GroupSlice:
    """Subgroup of GL2(Z/N): generators plus a lazily materialized sorted key array."""

    def __init__(self, modulus: int, gens=None, elements=None, order: int | None = None, name: str | None = None):
        if modulus > MAX_PACK_MODULUS:
            raise ResourceCapError(f"modulus {modulus} too large for packed keys")
        self.modulus = int(modulus)
        self.name = name
        self._gens = None
        if gens is not None:
            gens = tuple(g if isinstance(g, ResidueMatrix) else ResidueMatrix(modulus, tuple(g)) for g in gens)
            for g in gens:
                if g.modulus != self.modulus:
                    raise ModulusMismatchError(f"generator {g} not at modulus {modulus}")
                if not g.is_invertible():
                    raise NonInvertibleError(f"generator {g} has non-unit determinant {g.det}")
            self._gens = gens
        if elements is not None:
            elements = np.unique(np.asarray(elements, dtype=np.int64))
            if order is not None and order != len(elements):
                raise RelSerreError("stated order disagrees with element count")
            order = len(elements)
        if gens is None and elements is None:
            raise ValueError("need generators or elements")
        self._elements = elements
        self._order = order

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        order = self._order if self._order is not None else "?"
        return f"<GroupSlice{tag} mod {self.modulus} order {order}>"

    @property
    def gens(self) -> tuple:
        if self._gens is None:
            self._gens = tuple(ResidueMatrix.from_key(k, self.modulus) for k in generating_keys(self))
        return self._gens

    @property
    def materialized(self) -> bool:
        return self._elements is not None

    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._elements = closure_keys([g.key for g in self._gens], self.modulus)
            self._order = len(self._elements)
        return self._elements

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = len(self.elements)
        return self._order

    def contains_keys(self, keys) -> np.ndarray:
        keys = np.atleast_1d(np.asarray(keys, dtype=np.int64))
        el = self.elements
        pos = np.searchsorted(el, keys)
        pos[pos >= len(el)] = 0
        return el[pos] == keys

    def __contains__(self, A: ResidueMatrix) -> bool:
        if A.modulus != self.modulus:
            raise ModulusMismatchError(f"matrix modulus {A.modulus} vs group modulus {self.modulus}")
        return bool(self.contains_keys([A.key])[0])

    def matrices(self):
        for k in self.elements:
            yield ResidueMatrix.from_key(int(k), self.modulus)

    def same_set(self, other: GroupSlice) -> bool:
        return self.modulus == other.modulus and self.order == other.order and np.array_equal(self.elements, other.elements)

    def __eq__(self, other):
        return isinstance(other, GroupSlice) and self.same_set(other)

    def __hash__(self):
        return hash((self.modulus, self.order, self.elements[:8].tobytes()))


def identity_key(n: int) -> int:
    return ResidueMatrix.identity(n).key


def closure_keys(gen_keys, n: int, cap: int = DEFAULT_CAP, start=None) -> np.ndarray:
    """BFS closure under right multiplication by generators; returns sorted keys."""
    gen_keys = np.unique(np.asarray(list(gen_keys), dtype=np.int64))
    g = decode(gen_keys, n)
    seed = np.array([identity_key(n)], dtype=np.int64) if start is None else np.unique(np.concatenate([start, [identity_key(n)]]))
    if n**4 <= _BITMAP_LIMIT:
        seen = np.zeros(n**4, dtype=bool)
        seen[seed] = True
        frontier = seed
        count = len(seed)
        while frontier.size and gen_keys.size:
            a, b, c, d = decode(frontier, n)
            cand = []
            for j in range(len(gen_keys)):
                gj = (g[0][j], g[1][j], g[2][j], g[3][j])
                cand.append(encode(*mul_arrays((a, b, c, d), gj, n), n))
            cand = np.unique(np.concatenate(cand))
            cand = cand[~seen[cand]]
            seen[cand] = True
            count += len(cand)
            if count > cap:
                raise ResourceCapError(f"closure exceeded cap of {cap} elements at modulus {n}")
            frontier = cand
        return np.flatnonzero(seen).astype(np.int64)
    elems = seed
    frontier = seed
    while frontier.size and gen_keys.size:
        a, b, c, d = decode(frontier, n)
        cand = []
        for j in range(len(gen_keys)):
            gj = (g[0][j], g[1][j], g[2][j], g[3][j])
            cand.append(encode(*mul_arrays((a, b, c, d), gj, n), n))
        cand = np.unique(np.concatenate(cand))
        cand = cand[~_isin_sorted(cand, elems)]
        elems = np.union1d(elems, cand)
        if len(elems) > cap:
            raise ResourceCapError(f"closure exceeded cap of {cap} elements at modulus {n}")
        frontier = cand
    return elems


def _isin_sorted(x: np.ndarray, sorted_arr: np.ndarray) -> np.ndarray:
    if not len(sorted_arr):
        return np.zeros(len(x), dtype=bool)
    pos = np.searchsorted(sorted_arr, x)
    pos[pos >= len(sorted_arr)] = 0
    return sorted_arr[pos] == x


def closure(gens, n: int, cap: int = DEFAULT_CAP, name: str | None = None) -> GroupSlice:
    gens = [g if isinstance(g, ResidueMatrix) else ResidueMatrix(n, tuple(g)) for g in gens]
    G = GroupSlice(n, gens, name=name)
    G._elements = closure_keys([g.key for g in gens], n, cap=cap)
    G._order = len(G._elements)
    return G


def from_keys(keys, n: int, name: str | None = None) -> GroupSlice:
    return GroupSlice(n, elements=keys, name=name)


def generating_keys(G: GroupSlice, seed: int = 0) -> list[int]:
    """Small deterministic generating set chosen greedily from random elements."""
    el = G.elements
    n = G.modulus
    if len(el) == 1:
        return []
    rng = np.random.default_rng(seed)
    chosen: list[int] = []
    current = np.array([identity_key(n)], dtype=np.int64)
    tries = 0
    while len(current) < len(el):
        outside = el[~_isin_sorted(el, current)]
        k = int(outside[rng.integers(len(outside))]) if tries < 64 else int(outside[0])
        chosen.append(k)
        current = closure_keys(chosen, n)
        tries += 1
    # drop redundant generators
    i = 0
    while i < len(chosen) and len(chosen) > 1:
        trial = chosen[:i] + chosen[i + 1:]
        if len(closure_keys(trial, n)) == len(el):
            chosen = trial
        else:
            i += 1
    return chosen


def all_units(n: int) -> np.ndarray:
    return np.array([u for u in range(n) if gcd(u, n) == 1], dtype=np.int64)


def gl2_keys(n: int) -> np.ndarray:
    if gl2_order(n) > DEFAULT_CAP:
        raise ResourceCapError(f"GL2(Z/{n}) is too large to materialize")
    r = np.arange(n, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    a, b, c, d = a.ravel(), b.ravel(), c.ravel(), d.ravel()
    det = (a * d - b * c) % n
    ok = np.gcd(det, n) == 1
    return encode(a[ok], b[ok], c[ok], d[ok], n)


def gl2(n: int) -> GroupSlice:
    if n == 1:
        return GroupSlice(1, elements=[0], name="GL2(1)")
    G = GroupSlice(n, elements=gl2_keys(n), name=f"GL2({n})")
    return G


def sl2(n: int) -> GroupSlice:
    G = gl2(n)
    keep = G.elements[det_array(G.elements, n) == 1 % n]
    return GroupSlice(n, elements=keep, name=f"SL2({n})")


def reduce_each(keys: np.ndarray, n: int, m: int) -> np.ndarray:
    """Element-wise reduction of packed keys from modulus n to m (aligned with the input)."""
    if n % m:
        raise ModulusMismatchError(f"{m} does not divide {n}")
    a, b, c, d = decode(keys, n)
    return encode(a % m, b % m, c % m, d % m, m)


def reduce_keys(keys: np.ndarray, n: int, m: int) -> np.ndarray:
    return np.unique(reduce_each(keys, n, m))


def reduce_mod(G: GroupSlice, m: int) -> GroupSlice:
    if m < 1 or G.modulus % m:
        raise ModulusMismatchError(f"{m} does not divide {G.modulus}")
    if m == G.modulus:
        return G
    gens = [g.reduce(m) for g in G.gens] if G._gens is not None else None
    if G.materialized or gens is None:
        return GroupSlice(m, gens, elements=reduce_keys(G.elements, G.modulus, m))
    return closure(gens, m)


def preimage_at(G: GroupSlice, n: int, cap: int = DEFAULT_CAP) -> GroupSlice:
    """Full preimage of G (at modulus m) under GL2(Z/n) -> GL2(Z/m)."""
    m = G.modulus
    if n % m:
        raise ModulusMismatchError(f"{m} does not divide {n}")
    size = G.order * (gl2_order(n) // gl2_order(m))
    if size > cap:
        raise ResourceCapError(f"preimage of order {size} exceeds cap {cap}")
    if n == m:
        return G
    t = np.arange(n // m, dtype=np.int64) * m
    a0, b0, c0, d0 = decode(G.elements, m)
    lifts = []
    ta, tb, tc, td = np.meshgrid(t, t, t, t, indexing="ij")
    ta, tb, tc, td = ta.ravel(), tb.ravel(), tc.ravel(), td.ravel()
    for i in range(len(a0)):
        a, b, c, d = a0[i] + ta, b0[i] + tb, c0[i] + tc, d0[i] + td
        ok = np.gcd((a * d - b * c) % n, n) == 1
        lifts.append(encode(a[ok], b[ok], c[ok], d[ok], n))
    H = GroupSlice(n, elements=np.concatenate(lifts))
    assert H.order == size
    return H


def conjugate_keys(keys: np.ndarray, x: ResidueMatrix) -> np.ndarray:
    """Keys of x h x^-1 for h in keys (unsorted, aligned with input)."""
    n = x.modulus
    xi = mat_inv(x)
    h = decode(keys, n)
    xa = tuple(np.int64(v) for v in x.entries)
    xb = tuple(np.int64(v) for v in xi.entries)
    return encode(*mul_arrays(mul_arrays(xa, h, n), xb, n), n)


def commutator_subgroup(G: GroupSlice, cap: int = DEFAULT_CAP) -> GroupSlice:
    """Normal closure of commutators of generators."""
    n = G.modulus
    gens = list(G.gens)
    comms = set()
    for x in gens:
        for y in gens:
            c = x @ y @ mat_inv(x) @ mat_inv(y)
            comms.add(c.key)
    comms.discard(identity_key(n))
    C = closure_keys(sorted(comms), n, cap=cap)
    cgens = sorted(comms)
    changed = True
    while changed:
        changed = False
        for x in gens:
            img = np.unique(conjugate_keys(np.asarray(cgens, dtype=np.int64), x)) if cgens else np.array([], dtype=np.int64)
            new = img[~_isin_sorted(img, C)]
            if new.size:
                cgens.extend(int(k) for k in new)
                C = closure_keys(cgens, n, cap=cap)
                changed = True
    return GroupSlice(n, [ResidueMatrix.from_key(k, n) for k in cgens], elements=C)


def is_subgroup(H: GroupSlice, G: GroupSlice) -> bool:
    if H.modulus != G.modulus:
        return False
    keys = [g.key for g in H.gens] if H._gens is not None else H.elements
    return bool(np.all(G.contains_keys(keys)))


def index_in(H: GroupSlice, G: GroupSlice) -> int:
    if H.modulus != G.modulus:
        raise ModulusMismatchError("groups at different moduli")
    if not is_subgroup(H, G):
        raise RelSerreError("first group is not contained in the second")
    return G.order // H.order


def determinant_image(G: GroupSlice) -> frozenset:
    n = G.modulus
    if G.materialized:
        return frozenset(int(x) for x in np.unique(det_array(G.elements, n)))
    # the det image is generated by the generators' determinants
    seen = {1 % n}
    frontier = [1 % n]
    dets = [g.det for g in G.gens]
    while frontier:
        nxt = []
        for x in frontier:
            for d in dets:
                y = x * d % n
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def is_level(G: GroupSlice, m: int) -> bool:
    """True when G is the full preimage of its reduction mod m."""
    H = reduce_mod(G, m)
    return G.order * gl2_order(m) == H.order * gl2_order(G.modulus)
