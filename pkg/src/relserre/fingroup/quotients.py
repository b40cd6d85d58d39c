"""Abelian characters, quotient fingerprints, small isomorphism tests and Quo intersections."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import gcd

import numpy as np

from ..errors import RelSerreError
from .core import GroupSlice
from .lattice import normal_masks
from .table import TableGroup

ISO_SEARCH_CAP = 48


@dataclass(frozen=True)
class Character:
    """Surjection G -> Z/q stored extensionally: values[i] for the i-th sorted element key."""

    q: int
    values: np.ndarray

    def kernel_mask(self) -> np.ndarray:
        return self.values == 0

    def key(self) -> bytes:
        return self.values.astype(np.int8).tobytes()


def abelian_characters(G: GroupSlice | TableGroup, q: int) -> list[Character]:
    """All surjective homomorphisms G -> Z/q for prime q."""
    T = G if isinstance(G, TableGroup) else TableGroup(G)
    C = T.commutator_mask()
    powers = np.arange(T.size)
    for _ in range(q - 1):
        powers = T.mul[powers, np.arange(T.size)]
    gens = np.concatenate([T.generators_of(C), np.unique(powers)])
    N = T.close(gens)
    label, qt = T.quotient_table(N)
    size = len(qt)
    r = round(np.log(size) / np.log(q))
    if q**r != size:
        raise RelSerreError("quotient by commutators and q-th powers is not elementary abelian")
    e = int(np.flatnonzero((qt == np.arange(size)).all(axis=1))[0])
    coords = {e: (0,) * r}
    basis: list[int] = []
    for x in range(size):
        if x in coords:
            continue
        basis.append(x)
        i = len(basis) - 1
        new = {}
        for y, vec in coords.items():
            z = y
            for k in range(1, q):
                z = int(qt[z, x])
                v = list(vec)
                v[i] = k
                new[z] = tuple(v)
        coords.update(new)
        coords = {y: tuple(list(v) + [0] * (r - len(v))) for y, v in coords.items()}
    coord_arr = np.array([coords[int(lab)] for lab in label], dtype=np.int64).reshape(T.size, r)
    out = []
    for lam in itertools.product(range(q), repeat=r):
        if not any(lam):
            continue
        vals = (coord_arr @ np.array(lam, dtype=np.int64)) % q
        out.append(Character(q, vals))
    return out


def index2_and_index3_characters(G: GroupSlice) -> list[GroupSlice]:
    """Distinct kernels of surjections onto Z/2 and Z/3."""
    T = TableGroup(G)
    kernels = {}
    for q in (2, 3):
        for chi in abelian_characters(T, q):
            m = chi.kernel_mask()
            kernels.setdefault((q, np.packbits(m).tobytes()), m)
    return [T.slice_of(m) for m in kernels.values()]


def index_subgroups(G: GroupSlice, q: int) -> list[GroupSlice]:
    return [H for H in index2_and_index3_characters(G) if G.order // H.order == q]


# ---- tables -------------------------------------------------------------

def _identity(tab: np.ndarray) -> int:
    return int(np.flatnonzero((tab == np.arange(len(tab))).all(axis=1))[0])


def _orders(tab: np.ndarray) -> list[int]:
    e = _identity(tab)
    out = []
    for x in range(len(tab)):
        k, y = 1, x
        while y != e:
            y = int(tab[y, x])
            k += 1
        out.append(k)
    return out


def _inverses(tab: np.ndarray) -> np.ndarray:
    e = _identity(tab)
    rows, cols = np.nonzero(tab == e)
    inv = np.empty(len(tab), dtype=np.int64)
    inv[rows] = cols
    return inv


def _class_count(tab: np.ndarray) -> int:
    inv = _inverses(tab)
    n = len(tab)
    seen = np.zeros(n, dtype=bool)
    count = 0
    for h in range(n):
        if not seen[h]:
            cls = tab[tab[np.arange(n), h], inv]
            seen[cls] = True
            count += 1
    return count


def _commutator_set(tab: np.ndarray) -> np.ndarray:
    n = len(tab)
    inv = _inverses(tab)
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    comm = tab[tab[tab[x, y], inv[x]], inv[y]]
    members = np.zeros(n, dtype=bool)
    members[np.unique(comm)] = True
    frontier = np.flatnonzero(members)
    gens = frontier
    while frontier.size:
        prod = np.unique(tab[frontier[:, None], gens[None, :]].ravel())
        prod = prod[~members[prod]]
        members[prod] = True
        frontier = prod
    return members


def _quotient(tab: np.ndarray, normal: np.ndarray) -> np.ndarray:
    n = len(tab)
    label = -np.ones(n, dtype=np.int64)
    nidx = np.flatnonzero(normal)
    nxt = 0
    for g in range(n):
        if label[g] < 0:
            label[tab[g, nidx]] = nxt
            nxt += 1
    reps = np.array([np.flatnonzero(label == i)[0] for i in range(nxt)])
    return label[tab[np.ix_(reps, reps)]]


def _abelian_invariants(tab: np.ndarray) -> tuple:
    """Invariant p-power factors of an abelian group given by its table."""
    from sympy import factorint
    orders = _orders(tab)
    out = []
    for p, target in sorted(factorint(len(tab)).items()):
        # s_k = log_p #{x : x^(p^k) = 1}; s_k - s_(k-1) factors have order >= p^k
        ge, s_prev, k = [], 0, 1
        while s_prev < target:
            cnt = sum(1 for o in orders if (p**k) % o == 0)
            sk = 0
            while p ** (sk + 1) <= cnt:
                sk += 1
            ge.append(sk - s_prev)
            s_prev, k = sk, k + 1
        for i, g in enumerate(ge):
            out.extend([p ** (i + 1)] * (g - (ge[i + 1] if i + 1 < len(ge) else 0)))
    return tuple(sorted(out))


@dataclass(frozen=True)
class QuotientFingerprint:
    order: int
    abelian_invariants: tuple
    exponent: int
    class_count: int
    order_histogram: tuple

    @property
    def is_cyclic(self) -> bool:
        # an element of full order; exponent == order alone also holds for S3
        return max(o for o, _ in self.order_histogram) == self.order

    @property
    def is_abelian(self) -> bool:
        return self.class_count == self.order

    def name(self) -> str:
        if self.order == 1:
            return "0"
        if self.is_cyclic:
            return f"Z/{self.order}"
        if self.order == 6 and not self.is_abelian:
            return "S3"
        return f"[order {self.order}, ab {list(self.abelian_invariants)}]"


def fingerprint_table(tab: np.ndarray) -> QuotientFingerprint:
    orders = _orders(tab)
    exp = 1
    for o in orders:
        exp = exp * o // gcd(exp, o)
    ab = _quotient(tab, _commutator_set(tab))
    return QuotientFingerprint(
        order=len(tab),
        abelian_invariants=_abelian_invariants(ab) if len(ab) > 1 else (),
        exponent=exp,
        class_count=_class_count(tab),
        order_histogram=tuple(sorted(Counter(orders).items())),
    )


def _small_generating_set(tab: np.ndarray) -> list[int]:
    n = len(tab)
    e = _identity(tab)
    orders = _orders(tab)
    # try to find a generating set of size 1, 2, 3 favouring high-order elements
    cand = sorted(range(n), key=lambda x: -orders[x])
    for size in (1, 2, 3):
        for combo in itertools.combinations(cand, size):
            if _close(tab, e, combo).sum() == n:
                return list(combo)
        if size == 2 and n > 64:
            break
    gens: list[int] = []
    cur = _close(tab, e, [])
    for x in cand:
        if not cur[x]:
            gens.append(x)
            cur = _close(tab, e, gens)
    return gens


def _close(tab, e, gens) -> np.ndarray:
    n = len(tab)
    mask = np.zeros(n, dtype=bool)
    mask[e] = True
    frontier = np.array([e])
    g = np.asarray(list(gens), dtype=np.int64)
    while frontier.size and g.size:
        prod = np.unique(tab[frontier[:, None], g[None, :]].ravel())
        prod = prod[~mask[prod]]
        mask[prod] = True
        frontier = prod
    return mask


def isomorphic_tables(t1: np.ndarray, t2: np.ndarray, cap: int = ISO_SEARCH_CAP) -> bool:
    """Exhaustive generator-image search for an isomorphism."""
    n = len(t1)
    if n != len(t2):
        return False
    if n > cap:
        raise RelSerreError(f"isomorphism search beyond order {cap} is not supported")
    e1, e2 = _identity(t1), _identity(t2)
    o1, o2 = _orders(t1), _orders(t2)
    gens = _small_generating_set(t1)
    options = [[y for y in range(n) if o2[y] == o1[g]] for g in gens]
    for imgs in itertools.product(*options):
        phi = -np.ones(n, dtype=np.int64)
        phi[e1] = e2
        frontier = [e1]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, h in zip(gens, imgs):
                    y = int(t1[x, g])
                    img = int(t2[phi[x], h])
                    if phi[y] < 0:
                        phi[y] = img
                        nxt.append(y)
                    elif phi[y] != img:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if not ok or (phi < 0).any() or len(np.unique(phi)) != n:
            continue
        if np.array_equal(phi[t1], t2[phi[:, None], phi[None, :]]):
            return True
    return False


def quotient_tables(G: GroupSlice, max_order: int) -> list[np.ndarray]:
    T = TableGroup(G)
    out = []
    for m in normal_masks(T):
        if T.size // int(m.sum()) <= max_order:
            out.append(np.asarray(T.quotient_table(m)[1]))
    return out


def _iso_classes(tables: list[np.ndarray]) -> list[tuple]:
    classes: list[tuple] = []
    for tab in tables:
        fp = fingerprint_table(tab)
        if not any(fp == f and isomorphic_tables(tab, t) for f, t in classes):
            classes.append((fp, tab))
    return classes


def quo_intersection(G1: GroupSlice, G2: GroupSlice) -> list[QuotientFingerprint]:
    """Isomorphism classes of common quotients (orders bounded by gcd of group orders)."""
    bound = gcd(G1.order, G2.order)
    c1 = _iso_classes(quotient_tables(G1, bound))
    c2 = _iso_classes(quotient_tables(G2, bound))
    common = []
    for fp, tab in c1:
        matches = [t for f, t in c2 if f == fp]
        if not matches:
            continue
        if any(isomorphic_tables(tab, t) for t in matches):
            common.append(fp)
        else:
            raise RelSerreError(f"fingerprint match without isomorphism for a quotient of order {fp.order}")
    return sorted(common, key=lambda f: (f.order, f.abelian_invariants))
