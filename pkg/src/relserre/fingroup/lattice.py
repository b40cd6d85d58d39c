"""Subgroup lattice searches: all subgroups, normal subgroups, conjugacy classes, M-sets."""
from __future__ import annotations

import numpy as np

from ..errors import ResourceCapError
from ..modmat import decode, encode, gl2_order, mul_arrays
from .core import GroupSlice, commutator_subgroup, determinant_image, gl2
from .table import TableGroup

SUBGROUP_CAP = 512
NORMAL_CAP = 4096


def _close_int(mul: list, e: int, gens) -> int:
    mask = 1 << e
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            row = mul[a]
            for g in gens:
                b = row[g]
                if not (mask >> b) & 1:
                    mask |= 1 << b
                    nxt.append(b)
        frontier = nxt
    return mask


def subgroup_masks_of_table(qt: np.ndarray) -> list[int]:
    """All subgroups of the group with Cayley table qt, as int bitmasks (join-BFS from cyclics)."""
    q = len(qt)
    e = int(np.flatnonzero((qt == np.arange(q)).all(axis=1))[0])
    mul = qt.tolist()
    cyclic: dict[int, int] = {}
    for x in range(q):
        m = _close_int(mul, e, [x])
        cyclic.setdefault(m, x)
    cyc = sorted(cyclic.items(), key=lambda kv: bin(kv[0]).count("1"))
    subs: dict[int, list[int]] = {1 << e: []}
    queue = [1 << e]
    i = 0
    while i < len(queue):
        H = queue[i]
        i += 1
        gens = subs[H]
        for zmask, x in cyc:
            if zmask & ~H:
                J = _close_int(mul, e, gens + [x])
                if J not in subs:
                    subs[J] = gens + [x]
                    queue.append(J)
    return sorted(subs, key=lambda m: (bin(m).count("1"), m))


def all_subgroups(G: GroupSlice, containing: GroupSlice | None = None, cap: int = SUBGROUP_CAP) -> list[GroupSlice]:
    """Every subgroup of G (containing the given normal subgroup, if any) exactly once."""
    if G.order > cap:
        raise ResourceCapError(f"group of order {G.order} exceeds subgroup-enumeration cap {cap}")
    T = TableGroup(G, cap=max(cap, G.order))
    if containing is None:
        label = np.arange(T.size)
        qt = T.mul
    else:
        label, qt = T.quotient_table(T.mask_of(containing))
    out = []
    for m in subgroup_masks_of_table(np.asarray(qt)):
        sel = np.array([(m >> int(lab)) & 1 for lab in label], dtype=bool)
        H = GroupSlice(G.modulus, elements=T.keys[sel])
        assert G.order % H.order == 0
        out.append(H)
    return out


def normal_subgroups(G: GroupSlice, cap: int = NORMAL_CAP) -> list[GroupSlice]:
    """All normal subgroups via joins of normal closures of conjugacy classes."""
    T = TableGroup(G, cap=cap)
    return [T.slice_of(m) for m in normal_masks(T)]


def normal_masks(T: TableGroup) -> list[np.ndarray]:
    atoms: dict[bytes, np.ndarray] = {}
    for cls in T.conjugacy_classes():
        m = T.close(cls)
        atoms.setdefault(np.packbits(m).tobytes(), m)
    atom_list = list(atoms.values())
    atom_gens = [T.generators_of(m) for m in atom_list]
    triv = np.zeros(T.size, dtype=bool)
    triv[T.identity] = True
    found = {np.packbits(triv).tobytes(): (triv, np.array([], dtype=np.int64))}
    queue = [np.packbits(triv).tobytes()]
    i = 0
    while i < len(queue):
        mask, gens = found[queue[i]]
        i += 1
        for am, ag in zip(atom_list, atom_gens):
            if (am & ~mask).any():
                g2 = np.concatenate([gens, ag])
                J = T.close(g2)
                key = np.packbits(J).tobytes()
                if key not in found:
                    found[key] = (J, T.generators_of(J))
                    queue.append(key)
    masks = [v[0] for v in found.values()]
    masks.sort(key=lambda m: (int(m.sum()), np.packbits(m).tobytes()))
    for m in masks:
        assert T.size % int(m.sum()) == 0
    return masks


def _inverse_arrays(keys: np.ndarray, n: int):
    a, b, c, d = decode(keys, n)
    det = (a * d - b * c) % n
    inv_table = np.zeros(n, dtype=np.int64)
    for u in range(n):
        try:
            inv_table[u] = pow(u, -1, n)
        except ValueError:
            pass
    u = inv_table[det]
    return (d * u % n, (-b * u) % n, (-c * u) % n, a * u % n)


def canonical_conjugate(H: GroupSlice, conjugators: np.ndarray) -> bytes:
    """Lexicographically least sorted key array over all conjugates x H x^-1."""
    n = H.modulus
    xs = decode(conjugators, n)
    xi = _inverse_arrays(conjugators, n)
    h = decode(H.elements, n)
    X = tuple(v[:, None] for v in xs)
    Xi = tuple(v[:, None] for v in xi)
    Hh = tuple(v[None, :] for v in h)
    conj = encode(*mul_arrays(mul_arrays(X, Hh, n), Xi, n), n)
    conj.sort(axis=1)
    order = np.lexsort(conj.T[::-1])
    return conj[order[0]].tobytes()


def conjugacy_partition(subgroups: list[GroupSlice], G: GroupSlice) -> list[list[GroupSlice]]:
    """Partition by conjugacy under G (exhaustive over G's elements)."""
    if G.order > NORMAL_CAP:
        raise ResourceCapError(f"conjugating group of order {G.order} exceeds cap {NORMAL_CAP}")
    classes: dict[tuple, list[GroupSlice]] = {}
    for H in subgroups:
        key = (H.order, canonical_conjugate(H, G.elements))
        classes.setdefault(key, []).append(H)
    return list(classes.values())


def m_set(G: GroupSlice, cap: int = SUBGROUP_CAP, conjugating: GroupSlice | None = None) -> list[GroupSlice]:
    """Representatives of {H <= G : det H = det G and [H,H] = [G,G]} up to conjugacy.

    Conjugacy is taken in the ambient GL2(Z/N) unless another conjugating group is given.
    """
    if G.order > cap:
        raise ResourceCapError(f"group of order {G.order} exceeds M-set cap {cap}")
    C = commutator_subgroup(G)
    detG = determinant_image(G)
    hits = []
    for H in all_subgroups(G, containing=C, cap=cap):
        if determinant_image(H) != detG:
            continue
        if commutator_subgroup(H).same_set(C):
            hits.append(H)
    if conjugating is None:
        conjugating = gl2(G.modulus) if gl2_order(G.modulus) <= NORMAL_CAP else G
    classes = conjugacy_partition(hits, conjugating)
    reps = [cls[0] for cls in classes]
    reps.sort(key=lambda H: (-H.order, H.elements.tobytes()))
    return reps
