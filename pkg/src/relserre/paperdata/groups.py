"""Loader for groups.dat with load-time integrity checks, and builtin_group()."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from ..errors import DataIntegrityError, ParseError, RelSerreError
from ..fingroup.core import (
    GroupSlice, closure, commutator_subgroup, determinant_image, gl2, is_level, preimage_at, reduce_mod, sl2,
)
from ..modmat import gl2_order, parse_generators
from .labels import M_SET_EXPONENT, S_G, TwoAdicLabel, data_dir, obstruction_of_label

_ALIASES = {"K₁": "K1", "K₂": "K2", "K₃": "K3"}


@dataclass(frozen=True)
class LabeledGroup:
    label: TwoAdicLabel
    obstruction: str
    slice: GroupSlice  # modulus 8

    @property
    def name(self) -> str:
        return str(self.label)


def parse_groups_dat(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if len(parts) < 2:
            raise DataIntegrityError(f"groups.dat line {lineno}: expected 'LABEL MODULUS gens'")
        name, mod = parts[0], parts[1]
        try:
            modulus = int(mod)
            gens = parse_generators(parts[2], modulus) if len(parts) == 3 else []
        except (ValueError, ParseError) as exc:
            raise DataIntegrityError(f"groups.dat line {lineno}: {exc}") from exc
        if name in out:
            raise DataIntegrityError(f"groups.dat line {lineno}: duplicate entry {name}")
        try:
            out[name] = closure(gens, modulus, name=name)
        except RelSerreError as exc:
            raise DataIntegrityError(f"groups.dat line {lineno}: {exc}") from exc
    return out


def _check_labeled(label: str, H: GroupSlice, base: dict) -> LabeledGroup:
    lab = TwoAdicLabel.parse(label)
    g = obstruction_of_label(label)
    if H.modulus != 8:
        raise DataIntegrityError(f"{label}: stored at modulus {H.modulus}, expected 8")
    index = gl2_order(8) // H.order
    if index != lab.B:
        raise DataIntegrityError(f"{label}: index {index} differs from label index {lab.B}")
    if not is_level(H, lab.A) or (lab.A > 1 and is_level(H, lab.A // 2)):
        raise DataIntegrityError(f"{label}: level is not {lab.A}")
    if not reduce_mod(H, 2).same_set(base[g]):
        raise DataIntegrityError(f"{label}: reduction mod 2 is not {g}")
    k = M_SET_EXPONENT[g]
    if not in_m_set(reduce_mod(H, 2**k), preimage_at(base[g], 2**k)):
        raise DataIntegrityError(f"{label}: H(2^{k}) is not in M({g}-hat(2^{k}))")
    return LabeledGroup(lab, g, H)


def in_m_set(H: GroupSlice, G: GroupSlice) -> bool:
    """H in M(G): same determinant image and same commutator subgroup (H assumed inside G)."""
    if not G.contains_keys(H.elements).all():
        return False
    if determinant_image(H) != determinant_image(G):
        return False
    return commutator_subgroup(H).same_set(commutator_subgroup(G))


@lru_cache(maxsize=4)
def _load(directory: str) -> tuple:
    path = data_dir(directory) / "groups.dat"
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataIntegrityError(f"cannot read {path}: {exc}") from exc
    raw = parse_groups_dat(text)
    base = {}
    for g, order in (("2Cs", 1), ("2B", 2), ("2Cn", 3)):
        if g not in raw or raw[g].modulus != 2 or raw[g].order != order:
            raise DataIntegrityError(f"groups.dat: {g} missing or not of order {order} mod 2")
        base[g] = raw[g]
    for k, (red, order) in {"K1": ("2Cn", 24), "K2": ("2Cs", 8), "K3": ("2Cs", 8)}.items():
        K = raw.get(k)
        if K is None or K.modulus != 4 or K.order != order or not reduce_mod(K, 2).same_set(base[red]):
            raise DataIntegrityError(f"groups.dat: {k} missing or inconsistent")
    labeled = {}
    for labels in S_G.values():
        for label in labels:
            if label not in raw:
                raise DataIntegrityError(f"groups.dat: label {label} missing")
            labeled[label] = _check_labeled(label, raw[label], base)
    return raw, labeled


def load_groups(directory=None) -> dict:
    """All named groups from groups.dat (validated)."""
    return dict(_load(str(data_dir(directory)))[0])


def labeled_group(label: str, directory=None) -> LabeledGroup:
    labeled = _load(str(data_dir(directory)))[1]
    if label not in labeled:
        raise ParseError(f"unknown 2-adic label {label!r}")
    return labeled[label]


def builtin_group(name: str, directory=None) -> GroupSlice:
    name = _ALIASES.get(name.strip(), name.strip())
    m = re.fullmatch(r"(GL|SL)2\((?:Z/)?(\d+)(?:Z)?\)", name)
    if m:
        n = int(m.group(2))
        return gl2(n) if m.group(1) == "GL" else sl2(n)
    m = re.fullmatch(r"(2Cs|2B|2Cn)-hat\((\d+)\)", name)
    if m:
        return preimage_at(load_groups(directory)[m.group(1)], int(m.group(2)))
    groups = load_groups(directory)
    if name in groups:
        return groups[name]
    raise ParseError(f"unknown group name {name!r}")
