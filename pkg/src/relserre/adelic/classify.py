"""Relative Serre classification, image conductor and the explicit adelic image."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from ..ellq.curves import CurveModel, Full, classify_mod2
from ..ellq.points import ap
from ..ellq.entangle import (
    EntanglementData, entanglement_data_2b, entanglement_data_2cn, entanglement_data_2cs,
)
from ..errors import AmbiguityError, InconsistencyError, ParseError
from ..fingroup.core import GroupSlice
from ..modmat import det_array, trace_array
from ..paperdata.groups import labeled_group
from ..paperdata.labels import ADELIC_INDEX, S_G, TwoAdicLabel, obstruction_of_label
from .candidates import (
    Disambiguation, candidate_fiber_groups, disambiguate_by_frobenius, factors_through,
)
from .frames import KummerFrame, frame_of
from .image import FiberImage, permutation_order
from .position import frame_positions, frobenius_sample
from .sieve import HEURISTIC_BEYOND, SIEVE_ELLS, certify_odd_surjectivity

MODES = ("certified", "attested")


@dataclass(frozen=True)
class ClassificationInput:
    curve: CurveModel
    label: str | None = None
    mode: str = "certified"  # "attested": odd-ell surjectivity asserted by the caller
    prime_bound: int = 1000
    data: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParseError(f"unknown surjectivity mode {self.mode!r}")
        if self.prime_bound < 50:
            raise ParseError("prime bound must be at least 50")
        if self.label is not None:
            TwoAdicLabel.parse(self.label)


@dataclass
class ClassificationResult:
    curve: CurveModel
    obstruction: str  # 2Cs, 2B, 2Cn or none
    label: str | None
    is_relative_serre: bool
    mode: str
    prime_bound: int
    label_inferred: bool = False
    adelic_index: int | None = None
    m_E: int | None = None
    entanglement: EntanglementData | None = None
    uncertified: tuple = ()
    heuristic_beyond: int | None = None
    reasons: list = field(default_factory=list)
    # positioned 2-adic group at modulus 8 and its Kummer frame (not serialized)
    two_adic_group: GroupSlice | None = field(default=None, repr=False)
    frame: KummerFrame | None = field(default=None, repr=False)

    def certification(self) -> dict:
        return {"mode": self.mode, "bound": self.prime_bound}


# -- image conductor --------------------------------------------------------

def _abs_primes(ent: EntanglementData) -> list:
    return [abs(t.N_prime) for t in ent.triples]


def image_conductor(obstruction: str, label: str, ent: EntanglementData) -> int:
    lab = TwoAdicLabel.parse(label)
    Ns = [t.N for t in ent.triples]
    primes = _abs_primes(ent)
    odd_prod = all(n % 2 for n in Ns)
    if obstruction == "2Cs":
        if lab.B == 6:
            two = 4 if odd_prod else 8
        elif lab.B == 12:
            two = 4 if odd_prod and lab.A == 4 else 8
        elif lab.B == 24:
            two = 8
        else:
            raise InconsistencyError(f"2Cs label {label} has index {lab.B}")
        return lcm(two, *primes)
    if obstruction == "2B":
        if label == "2.3.0.1":
            return lcm(4 if odd_prod else 8, *primes)
        return lcm(8, *primes)
    if obstruction == "2Cn":
        f = ent.cubic_conductor
        if label == "4.4.0.2":
            return lcm(4, f)
        if label == "8.4.0.1":
            return lcm(8, f)
        if label == "2.2.0.1":
            return lcm(4 if ent.D_E % 2 else 8, f, *primes)
    raise InconsistencyError(f"no conductor formula for {obstruction} with label {label}")


def odd_gluing_modulus(ent: EntanglementData) -> int:
    return lcm(1, *_abs_primes(ent), ent.cubic_conductor or 1)


def entanglement_for(obstruction: str, shape, curve: CurveModel, label: str) -> EntanglementData:
    if obstruction == "2Cs":
        return entanglement_data_2cs(shape, TwoAdicLabel.parse(label).B)
    if obstruction == "2B":
        return entanglement_data_2b(shape, label)
    return entanglement_data_2cn(curve, shape, label)


# -- classification -----------------------------------------------------------

def _consistent_position(label: str, frame, sample, data) -> GroupSlice | None:
    pos = frame_positions(labeled_group(label, data).slice, frame, sample, first_only=True)
    return pos[0] if pos else None


def infer_label(obstruction: str, frame, sample, data=None) -> tuple:
    """Labels of S_G whose group fits every sampled Frobenius code; the largest-index one wins."""
    fits = []
    for label in S_G[obstruction]:
        H = _consistent_position(label, frame, sample, data)
        if H is not None:
            fits.append((TwoAdicLabel.parse(label).B, label, H))
    if not fits:
        raise InconsistencyError(f"no label in S_{obstruction} is compatible with the Frobenius data")
    top = max(b for b, _, _ in fits)
    best = [(lab, H) for b, lab, H in fits if b == top]
    if len(best) > 1:
        raise AmbiguityError(f"2-adic label not determined: {[lab for lab, _ in best]} all fit; pass --label")
    return best[0]


def is_relative_serre(inp: ClassificationInput) -> ClassificationResult:
    curve = inp.curve
    shape = classify_mod2(curve)
    if isinstance(shape, Full):
        return ClassificationResult(curve, "none", inp.label, False, inp.mode, inp.prime_bound,
                                    reasons=["mod-2 image is all of GL2(Z/2)"])
    G = shape.G
    frame = frame_of(shape)
    sample = frobenius_sample(curve, frame, inp.prime_bound)
    label, inferred = inp.label, False
    if label is None:
        label, H = infer_label(G, frame, sample, inp.data)
        inferred = True
    else:
        try:
            owner = obstruction_of_label(label)
        except ParseError:
            owner = None
        if owner is None:
            return ClassificationResult(curve, G, label, False, inp.mode, inp.prime_bound,
                                        reasons=[f"2-adic image {label} is not in S_{G}"])
        if owner != G:
            raise InconsistencyError(f"label {label} reduces to {owner} but the curve's mod-2 image is {G}")
        H = _consistent_position(label, frame, sample, inp.data)
        if H is None:
            raise InconsistencyError(f"Frobenius data mod 8 is incompatible with label {label}")
    ent = entanglement_for(G, shape, curve, label)
    m_E = image_conductor(G, label, ent)
    if m_E % TwoAdicLabel.parse(label).A:
        raise InconsistencyError(f"m_E={m_E} is not divisible by the level of {label}")
    res = ClassificationResult(curve, G, label, True, inp.mode, inp.prime_bound, inferred,
                               ADELIC_INDEX[G], m_E, ent, two_adic_group=H, frame=frame)
    if inp.mode == "certified":
        certs = certify_odd_surjectivity(curve, inp.prime_bound, SIEVE_ELLS)
        bad = tuple(ell for ell, c in certs.items() if not c.certified)
        res.heuristic_beyond = HEURISTIC_BEYOND
        if bad:
            res.is_relative_serre = False
            res.uncertified = bad
            res.reasons.append(f"mod-ell surjectivity not certified for ell in {list(bad)}")
    if inferred:
        res.reasons.append("2-adic label inferred from Frobenius data (necessary conditions only)")
    return res


# -- explicit image -----------------------------------------------------------

@dataclass
class AdelicImage:
    modulus: int
    fiber: FiberImage
    generators: list
    order: int
    index: int
    disambiguation: Disambiguation

    def predicate(self) -> list:
        return self.fiber.describe()


def two_adic_image_level(image: FiberImage, label: str) -> int:
    """Smallest 2-power through which H and every 2-adic gluing character factor."""
    level = TwoAdicLabel.parse(label).A
    H = image.two_group
    for c in image.conditions:
        j = 2
        while j < H.modulus and not factors_through(H, c.two_values, j):
            j *= 2
        level = max(level, j)
    return level


def adelic_image(inp: ClassificationInput, result: ClassificationResult | None = None,
                 reduce_generators: bool = True) -> AdelicImage:
    res = result or is_relative_serre(inp)
    if not res.is_relative_serre:
        raise InconsistencyError(f"{res.curve} is not a relative Serre curve: {'; '.join(res.reasons)}")
    ent, m_E = res.entanglement, res.m_E
    M = odd_gluing_modulus(ent)
    sample = frobenius_sample(res.curve, res.frame, res.prime_bound, avoid=2 * M)
    cands = candidate_fiber_groups(res.obstruction, res.two_adic_group, ent, M, res.frame, sample)
    dis = disambiguate_by_frobenius(cands, res.frame, sample)
    image = dis.image
    two = two_adic_image_level(image, res.label)
    if two * M != m_E:
        raise InconsistencyError(f"structural level {two * M} differs from the conductor formula {m_E}")
    if two != image.two_modulus:
        image = image.at_two_modulus(two)
    idx = image.index()
    if idx != ADELIC_INDEX[res.obstruction]:
        raise InconsistencyError(f"image index {idx} differs from {ADELIC_INDEX[res.obstruction]}")
    if not image.det_surjective():
        raise InconsistencyError("image is not determinant-surjective")
    gens = image.small_generators() if reduce_generators else image.generators()
    order = image.order()
    if permutation_order(gens) != order:
        raise InconsistencyError("generators do not generate the image")
    return AdelicImage(image.modulus, image, gens, order, idx, dis)


def frobenius_char_poly(curve: CurveModel, p: int, modulus: int) -> tuple:
    """(trace, det) of Frobenius at a good prime p not dividing the modulus."""
    if modulus % p == 0:
        raise InconsistencyError(f"p={p} divides the modulus {modulus}")
    return (ap(curve, p) % modulus, p % modulus)


def char_poly_set(G: GroupSlice) -> set:
    t = trace_array(G.elements, G.modulus)
    d = det_array(G.elements, G.modulus)
    return set(zip(t.tolist(), d.tolist()))

