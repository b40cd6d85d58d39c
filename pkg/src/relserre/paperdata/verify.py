"""Recomputation of the group-theoretic facts behind the classification, from scratch."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InconsistencyError
from ..fingroup.core import (
    commutator_subgroup, determinant_image, gl2, index_in, preimage_at, reduce_mod, sl2,
)
from ..fingroup.lattice import conjugacy_partition, m_set
from ..fingroup.quotients import index_subgroups, quo_intersection
from ..modmat import gl2_order
from .groups import builtin_group, in_m_set, labeled_group
from .labels import COMMUTATOR_INDEX, M_SET_EXPONENT, S_G


class VerificationError(InconsistencyError):
    pass


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def raise_if_failed(self) -> Report:
        bad = self.failures()
        if bad:
            raise VerificationError(f"{self.suite}: " + "; ".join(f"{c.name} ({c.detail})" for c in bad))
        return self

    def lines(self) -> list:
        return [f"[{'ok' if c.ok else 'FAIL'}] {self.suite}: {c.name}" + (f" -- {c.detail}" if c.detail else "")
                for c in self.checks]


def _hat(name: str, n: int, data=None):
    return preimage_at(builtin_group(name, data), n)


def m_set_members(data=None) -> dict:
    """Representatives of M(2Cn-hat(4)), M(2B-hat(4)) and M(2Cs-hat(8))."""
    return {
        "2Cn": m_set(_hat("2Cn", 4, data)),
        "2B": m_set(_hat("2B", 4, data)),
        "2Cs": m_set(_hat("2Cs", 8, data)),
    }


def verify_m_sets(data=None) -> Report:
    rep = Report("msets")
    # GL2(Z/9): [GL2, GL2] = SL2 and det is onto, so any H in M(GL2) contains SL2
    # and has |H| = |SL2| * |det H| = |GL2|.
    G9 = gl2(9)
    C9 = commutator_subgroup(G9)
    S9 = sl2(9)
    rep.add("[GL2(Z/9),GL2(Z/9)] = SL2(Z/9)", C9.same_set(S9), f"order {C9.order}")
    full_det = len(determinant_image(G9)) == 6
    rep.add("det GL2(Z/9) = (Z/9)^x", full_det)
    rep.add("M(GL2(Z/9)) = {GL2(Z/9)}", C9.order * 6 == G9.order and full_det,
            f"|SL2|*|det| = {C9.order * 6}, |GL2| = {G9.order}")

    members = m_set_members(data)
    cn = members["2Cn"]
    K1 = builtin_group("K1", data)
    K1hat = preimage_at(K1, 4)
    has_self = any(H.order == 48 for H in cn)
    has_k1 = any(len(conjugacy_partition([H, K1hat], gl2(4))) == 1 for H in cn)
    rep.add("M(2Cn-hat(4)) = {2Cn-hat(4), K1}", len(cn) == 2 and has_self and has_k1,
            f"{len(cn)} classes, orders {[H.order for H in cn]}")
    b = members["2B"]
    rep.add("M(2B-hat(4)) = {2B-hat(4)}", len(b) == 1 and b[0].order == 32, f"{len(b)} classes")
    cs = members["2Cs"]
    rep.add("|M(2Cs-hat(8))| = 15", len(cs) == 15, f"{len(cs)} classes")
    allowed = [_hat("2Cs", 4, data), builtin_group("K2", data), builtin_group("K3", data)]
    det8 = determinant_image(gl2(8))
    bad = []
    for i, H in enumerate(cs):
        H4 = reduce_mod(H, 4)
        if not any(len(conjugacy_partition([H4, K], gl2(4))) == 1 for K in allowed):
            bad.append(f"#{i}: mod 4 not in {{2Cs-hat(4), K2, K3}}")
        if determinant_image(H) != det8:
            bad.append(f"#{i}: det not onto (Z/8)^x")
    rep.add("M(2Cs-hat(8)) reduces mod 4 into {2Cs-hat(4), K2, K3} with full det", not bad, "; ".join(bad))
    return rep


_EXPECTED_QUO = {"2Cn": ("0", "Z/2", "Z/3", "Z/6"), "2B": ("0", "Z/2"), "2Cs": ("0", "Z/2")}


def verify_quo_intersections(data=None) -> Report:
    rep = Report("quo")
    G9 = gl2(9)
    for g, members in m_set_members(data).items():
        for i, K in enumerate(members):
            common = quo_intersection(G9, K)
            names = tuple(f.name() for f in common)
            rep.add(f"Quo(GL2(Z/9)) & Quo(M({g})#{i}) = {{{', '.join(_EXPECTED_QUO[g])}}}",
                    names == _EXPECTED_QUO[g], f"got {{{', '.join(names)}}}")
            rep.add(f"common quotients cyclic for M({g})#{i}", all(f.is_cyclic for f in common))
    return rep


def commutator_indices(data=None) -> dict:
    S4 = sl2(4)
    out = {}
    for g in ("2Cs", "2B", "2Cn"):
        out[g] = index_in(commutator_subgroup(_hat(g, 4, data)), S4)
    return out


def verify_commutator_indices(data=None) -> Report:
    rep = Report("comm")
    got = commutator_indices(data)
    for g, idx in got.items():
        rep.add(f"[SL2(Z/4) : [{g}-hat(4), {g}-hat(4)]] = {COMMUTATOR_INDEX[g]}", idx == COMMUTATOR_INDEX[g],
                f"got {idx}")
    return rep


def verify_sg_membership(data=None) -> Report:
    rep = Report("sg")
    for g, labels in S_G.items():
        base = builtin_group(g, data)
        k = M_SET_EXPONENT[g]
        hat = _hat(g, 2**k, data)
        for label in labels:
            H = labeled_group(label, data).slice
            red2 = reduce_mod(H, 2).same_set(base)
            member = in_m_set(reduce_mod(H, 2**k), hat)
            idx = gl2_order(8) // H.order
            B = labeled_group(label, data).label.B
            rep.add(f"{label}: H(2) = {g}, H(2^{k}) in M({g}-hat(2^{k})), index {B}",
                    red2 and member and idx == B, f"H(2)={g}: {red2}, member: {member}, index {idx}")
    return rep


def verify_2b_mod4_facts(data=None) -> Report:
    rep = Report("2bmod4")
    G4 = gl2(4)
    for label in S_G["2B"]:
        H4 = reduce_mod(labeled_group(label, data).slice, 4)
        idx = index_in(H4, G4)
        n2 = len(index_subgroups(H4, 2))
        rep.add(f"{label}(4): index 3 with 7 index-2 subgroups", idx == 3 and n2 == 7, f"index {idx}, {n2} subgroups")
    contrast = reduce_mod(labeled_group("2.6.0.1", data).slice, 4)
    n = len(index_subgroups(contrast, 2))
    rep.add("2.6.0.1(4) has 15 index-2 subgroups", n == 15, f"got {n}")
    return rep


SUITES = {
    "msets": verify_m_sets,
    "quo": verify_quo_intersections,
    "comm": verify_commutator_indices,
    "sg": verify_sg_membership,
    "2bmod4": verify_2b_mod4_facts,
}


def run_suites(names, data=None) -> list:
    if "all" in names:
        names = list(SUITES)
    return [SUITES[n](data) for n in names]
