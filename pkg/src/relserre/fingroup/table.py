"""Cayley-table view of a small materialized group; subgroups are boolean masks."""
from __future__ import annotations

import numpy as np

from ..errors import ResourceCapError
from ..modmat import ResidueMatrix, decode, encode, mul_arrays
from .core import GroupSlice, identity_key

TABLE_CAP = 4096


class TableGroup:
    def __init__(self, G: GroupSlice, cap: int = TABLE_CAP):
        if G.order > cap:
            raise ResourceCapError(f"group of order {G.order} exceeds table cap {cap}")
        self.group = G
        self.n = G.modulus
        self.keys = G.elements
        self.size = len(self.keys)
        self.mul = self._build_table()
        self.identity = int(np.searchsorted(self.keys, identity_key(self.n)))
        rows, cols = np.nonzero(self.mul == self.identity)
        self.inv = np.empty(self.size, dtype=np.int32)
        self.inv[rows] = cols
        self._conj = None

    def _build_table(self) -> np.ndarray:
        n, size = self.n, self.size
        a, b, c, d = decode(self.keys, n)
        out = np.empty((size, size), dtype=np.int32)
        step = max(1, 2_000_000 // max(size, 1))
        for lo in range(0, size, step):
            hi = min(size, lo + step)
            x = (a[lo:hi, None], b[lo:hi, None], c[lo:hi, None], d[lo:hi, None])
            y = (a[None, :], b[None, :], c[None, :], d[None, :])
            prod = encode(*mul_arrays(x, y, n), n)
            out[lo:hi] = np.searchsorted(self.keys, prod)
        return out

    def index_of(self, keys) -> np.ndarray:
        return np.searchsorted(self.keys, np.asarray(keys, dtype=np.int64))

    def matrix(self, i: int) -> ResidueMatrix:
        return ResidueMatrix.from_key(int(self.keys[i]), self.n)

    def mask_of(self, H: GroupSlice) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        m[self.index_of(H.elements)] = True
        return m

    def slice_of(self, mask: np.ndarray) -> GroupSlice:
        return GroupSlice(self.n, elements=self.keys[mask])

    def close(self, gen_idx) -> np.ndarray:
        """Mask of the subgroup generated by the given element indices."""
        gens = np.unique(np.asarray(list(gen_idx), dtype=np.int64))
        mask = np.zeros(self.size, dtype=bool)
        mask[self.identity] = True
        frontier = np.array([self.identity])
        while frontier.size and gens.size:
            prod = np.unique(self.mul[frontier[:, None], gens[None, :]].ravel())
            prod = prod[~mask[prod]]
            mask[prod] = True
            frontier = prod
        return mask

    def generators_of(self, mask: np.ndarray) -> np.ndarray:
        """Greedy generating set of a subgroup mask."""
        idx = np.flatnonzero(mask)
        chosen: list[int] = []
        cur = np.zeros(self.size, dtype=bool)
        cur[self.identity] = True
        for i in idx:
            if not cur[i]:
                chosen.append(int(i))
                cur = self.close(chosen)
                if cur.sum() == len(idx):
                    break
        return np.array(chosen, dtype=np.int64)

    @property
    def conj(self) -> np.ndarray:
        """conj[g, h] = index of g h g^-1."""
        if self._conj is None:
            out = np.empty((self.size, self.size), dtype=np.int32)
            for g in range(self.size):
                out[g] = self.mul[self.mul[g], self.inv[g]]
            self._conj = out
        return self._conj

    def conjugacy_classes(self) -> list[np.ndarray]:
        seen = np.zeros(self.size, dtype=bool)
        classes = []
        for h in range(self.size):
            if not seen[h]:
                cls = np.unique(self.conj[:, h])
                seen[cls] = True
                classes.append(cls)
        return classes

    def normal_closure(self, idx) -> np.ndarray:
        idx = np.unique(self.conj[:, np.asarray(list(idx), dtype=np.int64)].ravel())
        return self.close(idx)

    def is_normal(self, mask: np.ndarray) -> bool:
        gens = self.generators_of(mask)
        if not gens.size:
            return True
        return bool(mask[self.conj[:, gens]].all())

    def commutator_mask(self, mask: np.ndarray | None = None) -> np.ndarray:
        if mask is None:
            mask = np.ones(self.size, dtype=bool)
        gens = self.generators_of(mask)
        comm = set()
        for x in gens:
            for y in gens:
                c = self.mul[self.mul[self.mul[x, y], self.inv[x]], self.inv[y]]
                comm.add(int(c))
        comm.discard(self.identity)
        if not comm:
            out = np.zeros(self.size, dtype=bool)
            out[self.identity] = True
            return out
        cur = self.close(sorted(comm))
        while True:
            cg = self.generators_of(cur)
            img = np.unique(self.conj[np.ix_(gens, cg)].ravel()) if cg.size else np.array([], dtype=np.int64)
            new = img[~cur[img]]
            if not new.size:
                return cur
            cur = self.close(np.concatenate([cg, new]))

    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.size, dtype=np.int64)
        cur = np.arange(self.size)
        k = 1
        done = cur == self.identity
        while not done.all():
            cur = self.mul[cur, np.arange(self.size)]
            k += 1
            newly = (cur == self.identity) & ~done
            orders[newly] = k
            done |= newly
        return orders

    def cosets(self, normal_mask: np.ndarray) -> np.ndarray:
        """label[g] = index of the coset gN."""
        label = -np.ones(self.size, dtype=np.int64)
        nidx = np.flatnonzero(normal_mask)
        nxt = 0
        for g in range(self.size):
            if label[g] < 0:
                label[self.mul[g, nidx]] = nxt
                nxt += 1
        return label

    def quotient_table(self, normal_mask: np.ndarray):
        """(label array, quotient Cayley table) for G/N."""
        label = self.cosets(normal_mask)
        q = int(label.max()) + 1
        reps = np.array([np.flatnonzero(label == i)[0] for i in range(q)])
        qt = label[self.mul[np.ix_(reps, reps)]]
        return label, qt
