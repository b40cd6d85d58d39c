"""Candidate gluing characters for the fiber image and their Frobenius elimination."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..ellq.entangle import EntanglementData
from ..errors import AmbiguityError, InconsistencyError
from ..fingroup.core import GroupSlice, conjugate_keys, gl2, reduce_each
from ..fingroup.quotients import abelian_characters
from ..modmat import ResidueMatrix, det_array
from .dirichlet import DirichletCharacter, primitive_cubic_characters, quadratic_character
from .image import FiberCondition, FiberImage
from .position import FrobeniusSample, TWO_MOD, element_codes

_G2CN = ResidueMatrix.of(0, 1, 1, 1, 2)


def _det_derived(values: np.ndarray, dets: np.ndarray) -> bool:
    for d in np.unique(dets):
        if len(np.unique(values[dets == d])) > 1:
            return False
    return True


def factors_through(H: GroupSlice, values: np.ndarray, m: int) -> bool:
    red = reduce_each(H.elements, H.modulus, m)
    order = np.argsort(red, kind="stable")
    r, v = red[order], values[order]
    starts = np.flatnonzero(np.r_[True, r[1:] != r[:-1]])
    first = np.repeat(v[starts], np.diff(np.r_[starts, len(r)]))
    return bool(np.array_equal(first, v))


def quadratic_options(H: GroupSlice, level: int) -> list:
    """Order-2 characters of H (at modulus 8) that are not functions of det and factor through `level`."""
    dets = det_array(H.elements, H.modulus)
    out = []
    for ch in abelian_characters(H, 2):
        v = ch.values.astype(np.int64)
        if _det_derived(v, dets):
            continue
        if level < H.modulus and not factors_through(H, v, level):
            continue
        out.append(v)
    return out


def cubic_base_character(H: GroupSlice) -> np.ndarray:
    """H -> H(2) = 2Cn = <g> -> Z/3, g^j -> j."""
    red = reduce_each(H.elements, H.modulus, 2)
    g = _G2CN
    table = {ResidueMatrix.identity(2).key: 0, g.key: 1, (g @ g).key: 2}
    try:
        return np.array([table[int(k)] for k in red], dtype=np.int64)
    except KeyError as exc:
        raise InconsistencyError("2-adic group does not reduce into 2Cn") from exc


@dataclass(frozen=True)
class Slot:
    """One gluing condition with its admissible 2-adic characters and Dirichlet side."""

    name: str
    q: int
    options: tuple  # tuples (values array, DirichletCharacter, label)


def condition_slots(obstruction: str, H: GroupSlice, ent: EntanglementData) -> list:
    slots = []
    for i, t in enumerate(ent.triples, 1):
        chi = quadratic_character(t.N_prime)
        opts = tuple((v, chi, f"eps_{i}#{j}") for j, v in enumerate(quadratic_options(H, 2 ** t.k)))
        slots.append(Slot(f"eps_{i}=chi_{t.N_prime}(det)", 2, opts))
    if obstruction == "2Cn":
        w = cubic_base_character(H)
        opts = []
        for xi in primitive_cubic_characters(ent.cubic_conductor):
            for s in (1, 2):
                opts.append(((s * w) % 3, xi, f"omega^{s}"))
        slots.append(Slot(f"omega=xi_{ent.cubic_conductor}(det)", 3, tuple(opts)))
    return slots


def _observed(sample: list, dirichlets: list, q_list: list) -> set:
    out = set()
    for s in sample:
        key = s.code()
        for chi, q in zip(dirichlets, q_list):
            key = key * q + chi(s.p)
        out.add(key)
    return out


def _supported(codes: np.ndarray, values: list, q_list: list) -> set:
    key = codes.copy()
    for v, q in zip(values, q_list):
        key = key * q + v
    return set(np.unique(key).tolist())


def prefilter(slots: list, H: GroupSlice, frame, sample: list) -> list:
    """Drop options of each slot that some Frobenius sample contradicts on its own."""
    codes = element_codes(H, frame)
    out = []
    for sl in slots:
        keep = []
        for opt in sl.options:
            v, chi, _ = opt
            if _observed(sample, [chi], [sl.q]) <= _supported(codes, [v], [sl.q]):
                keep.append(opt)
        out.append(Slot(sl.name, sl.q, tuple(keep)))
    return out


def _combos(slots: list):
    for choice in itertools.product(*[range(len(s.options)) for s in slots]):
        # distinct quadratic characters for distinct quadratic slots
        quad = [slots[i].options[c][0].tobytes() for i, c in enumerate(choice) if slots[i].q == 2]
        if len(set(quad)) != len(quad):
            continue
        yield [slots[i].options[c] for i, c in enumerate(choice)]


def build_image(H: GroupSlice, odd_modulus: int, slots: list, choice: list) -> FiberImage:
    conds = [FiberCondition(sl.name, sl.q, v, chi, lab) for sl, (v, chi, lab) in zip(slots, choice)]
    return FiberImage(H, odd_modulus, conds)


def candidate_fiber_groups(obstruction: str, H: GroupSlice, ent: EntanglementData, odd_modulus: int,
                           frame=None, sample=None) -> list:
    """All fiber images allowed by the entanglement data; with a sample each slot is prefiltered first."""
    slots = condition_slots(obstruction, H, ent)
    if sample is not None:
        slots = prefilter(slots, H, frame, sample)
    return [build_image(H, odd_modulus, slots, c) for c in _combos(slots)]


def survives(image: FiberImage, frame, sample: list) -> bool:
    codes = element_codes(image.two_group, frame)
    qs = [c.q for c in image.conditions]
    obs = _observed(sample, [c.dirichlet for c in image.conditions], qs)
    return obs <= _supported(codes, [c.two_values for c in image.conditions], qs)


def coverage(image: FiberImage, frame, sample: list) -> float:
    codes = element_codes(image.two_group, frame)
    qs = [c.q for c in image.conditions]
    obs = _observed(sample, [c.dirichlet for c in image.conditions], qs)
    sup = _supported(codes, [c.two_values for c in image.conditions], qs)
    return len(obs & sup) / len(sup)


def normalizer_elements(H: GroupSlice) -> list:
    out = []
    for x in gl2(H.modulus).elements:
        X = ResidueMatrix.from_key(int(x), H.modulus)
        if np.array_equal(np.unique(conjugate_keys(H.elements, X)), H.elements):
            out.append(X)
    return out


def _signature(image: FiberImage) -> tuple:
    return tuple((c.two_values.tobytes(), c.dirichlet.name) for c in image.conditions)


def conjugate_classes(images: list, H: GroupSlice) -> list:
    """Group images whose gluing characters differ by conjugation by the normalizer of H."""
    if len(images) <= 1:
        return [images] if images else []
    el = H.elements
    perms = []
    for X in normalizer_elements(H):
        # values of eps o c_X: position of X^-1 h X for each h
        inv = X ** -1
        pos = np.searchsorted(el, conjugate_keys(el, inv))
        perms.append(pos)
    sig_index = {_signature(im): i for i, im in enumerate(images)}
    parent = list(range(len(images)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, im in enumerate(images):
        for pos in perms:
            sig = tuple((c.two_values[pos].tobytes(), c.dirichlet.name) for c in im.conditions)
            j = sig_index.get(sig)
            if j is not None:
                parent[find(j)] = find(i)
    classes: dict = {}
    for i in range(len(images)):
        classes.setdefault(find(i), []).append(images[i])
    return list(classes.values())


@dataclass
class Disambiguation:
    image: FiberImage
    candidates: int
    survivors: int
    classes: int
    coverage: float
    primes_used: int


def disambiguate_by_frobenius(candidates: list, frame, sample: list) -> Disambiguation:
    """Unique survivor (up to conjugation by the normalizer of the 2-adic group)."""
    if not candidates:
        raise InconsistencyError("no admissible gluing characters")
    if len(candidates) == 1:
        return Disambiguation(candidates[0], 1, 1, 1, coverage(candidates[0], frame, sample), len(sample))
    alive = [im for im in candidates if survives(im, frame, sample)]
    if not alive:
        raise InconsistencyError("every candidate image is contradicted by some Frobenius element")
    classes = conjugate_classes(alive, alive[0].two_group)
    if len(classes) > 1:
        names = ["/".join(c.label for c in cl[0].conditions) for cl in classes]
        raise AmbiguityError(f"{len(classes)} non-conjugate candidate images survive: {names}")
    best = classes[0][0]
    return Disambiguation(best, len(candidates), len(alive), 1, coverage(best, frame, sample), len(sample))
