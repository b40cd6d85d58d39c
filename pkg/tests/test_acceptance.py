"""Acceptance gate: one PASS/FAIL line per criterion (see the summary section of the pytest run)."""
import math
import random
import time

import pytest

from conftest import classified, image_of, record
from relserre.adelic.classify import char_poly_set
from relserre.adelic.image import permutation_order, two_adic_conjugators, conjugate_two_part
from relserre.cli import batch_rows, batch_summary
from relserre.cyclicity import (
    correction_factor, correction_from_density, cyclicity_constant, empirical_cyclicity, euler_product,
    general_correction_via_characters, tail_bound,
)
from relserre.ellq import CurveModel, ap, classify_mod2
from relserre.ellq.entangle import entanglement_data_2cs, s_set_2cs
from relserre.ellq.points import frobenius_traces
from relserre.fingroup import (
    FiberProductSpec, abelian_characters, all_subgroups, closure, commutator_subgroup, direct_product,
    fiber_product, gl2, sl2,
)
from relserre.modmat import ResidueMatrix, crt_join, crt_split, gl2_order, parse_generators
from relserre.paperdata.verify import run_suites

PRINTED = {
    "315.a2": (420, "259,362,162,365;401,108,364,275;55,142,52,45;27,184,40,201"),
    "69.a1": (276, "43,128,65,53;13,140,63,269;167,26,23,45;129,176,155,145;175,188,182,189"),
    "392.a1": (28, "26,23,1,19;19,27,21,12;8,5,27,21"),
}
PRINTED_H1 = "26,23,1,11;8,21,7,17"


def test_criterion_1_group_suites():
    t = time.time()
    reports = run_suites(["all"])
    elapsed = time.time() - t
    bad = [c.name for r in reports for c in r.failures()]
    n = sum(len(r.checks) for r in reports)
    ok = record(1, not bad and elapsed <= 600, f"{n} checks across {len(reports)} suites, {len(bad)} failed, {elapsed:.0f}s")
    assert ok, bad


def test_criterion_2_s_set_example():
    roots = (-61, -118, 179)
    a, b, c = (-r for r in roots)  # y^2 = (x + 61)(x + 118)(x - 179)
    curve = CurveModel(0, a + b + c, 0, a * b + a * c + b * c, a * b * c, name="9405.f2")
    shape = classify_mod2(curve)
    S = s_set_2cs(shape)
    ent = entanglement_data_2cs(shape, 6)
    Ns = tuple(t.N for t in ent.triples)
    ks = tuple(t.k for t in ent.triples)
    ok = S == (15, 33, 55, 57, 95, 209, 3135) and Ns == (15, 33, 57) and ks == (2, 2, 2)
    record(2, ok, f"S={S} N={Ns} k={ks}")
    assert ok


def test_criterion_3_appendix(appendix):
    bad, slowest = [], 0.0
    for row in appendix:
        t = time.time()
        _, res = classified(row)
        corr = correction_factor(res) if row.obstruction != "2Cs" else None
        slowest = max(slowest, time.time() - t)
        if not (res.is_relative_serre and res.obstruction == row.obstruction and res.m_E == row.m_E):
            bad.append(f"{row.name}: verdict/m_E")
        if corr != row.correction:
            bad.append(f"{row.name}: correction {corr} vs {row.correction}")
    ok = record(3, not bad and slowest <= 60,
                f"{len(appendix) - len(bad)}/{len(appendix)} rows match, slowest {slowest:.1f}s")
    assert ok, bad


def test_criterion_4_worked_examples(rows):
    details, ok = [], True
    for name, (m, text) in PRINTED.items():
        im = image_of(rows[name])
        gens = parse_generators(text, m)
        xs = two_adic_conjugators(im.fiber, gens)
        same_order = permutation_order(gens) == im.order
        ok &= im.modulus == m and bool(xs) and same_order
        details.append(f"{name}: m_E={im.modulus} conjugators={len(xs)} order={im.order}")
    row = rows["392.a1"]
    im = image_of(row)
    a3 = ap(row.curve, 3)
    poly = (a3 % 28, 3)
    h1 = char_poly_set(closure(parse_generators(PRINTED_H1, 28), 28))
    ours = char_poly_set(im.fiber.materialize())
    gens = parse_generators(PRINTED["392.a1"][1], 28)
    x = two_adic_conjugators(im.fiber, gens)[0]
    h2 = closure([conjugate_two_part(g, x) for g in gens], 28)
    ok &= a3 == -3 and poly not in h1 and poly in ours and h2.same_set(im.fiber.materialize())
    details.append(f"392.a1: a_3={a3}, x^2+3x+3 in H1: {poly in h1}, in image: {poly in ours}")
    record(4, ok, "; ".join(details))
    assert ok


def test_criterion_5_index_identities(appendix):
    bad = []
    for row in appendix:
        im = image_of(row)  # construction asserts index and det surjectivity
        want = 48 if row.obstruction == "2Cs" else 12
        if im.index != want or gl2_order(im.modulus) != im.order * want or not im.fiber.det_surjective():
            bad.append(row.name)
    ok = record(5, not bad, f"{len(appendix) - len(bad)}/{len(appendix)} images with index 12/48 and full det")
    assert ok, bad


def _chars(G, q):
    if q == 6:
        return [(3 * a.values + 4 * b.values) % 6 for a in abelian_characters(G, 2) for b in abelian_characters(G, 3)]
    return [c.values for c in abelian_characters(G, q)]


def test_criterion_6_properties(appendix):
    import numpy as np

    rng = random.Random(7)
    S4, S3 = all_subgroups(gl2(4)), all_subgroups(gl2(3))
    n_specs = lemma_ok = order_ok = 0
    for q in (2, 3, 6):
        left = [(H, v) for H in S4 for v in _chars(H, q)]
        right = [(H, v) for H in S3 for v in _chars(H, q)]
        for _ in range(8):
            (G1, v1), (G2, v2) = rng.choice(left), rng.choice(right)
            at = lambda G, v: {g.key: int(v[int(np.searchsorted(G.elements, g.key))]) for g in G.gens}
            H = fiber_product(FiberProductSpec(G1, G2, q, at(G1, v1), at(G2, v2)))
            n_specs += 1
            order_ok += H.order == G1.order * G2.order // q
            split = direct_product(commutator_subgroup(G1), commutator_subgroup(G2))
            lemma_ok += commutator_subgroup(H).same_set(split)
    crt_ok = all(
        crt_join(crt_split(A)) == A
        for A in (ResidueMatrix(n, tuple(rng.randrange(n) for _ in range(4)))
                  for n in rng.choices([12, 28, 120, 276, 420], k=500))
    )
    hasse = all(a * a <= 4 * p for row in appendix for p, a in frobenius_traces(row.curve, 1000).items())
    counts = all(gl2(n).order == gl2_order(n) and sl2(n).order * len({(a * d - b * c) % n for a, b, c, d in
                 [ResidueMatrix.from_key(k, n).entries for k in gl2(n).elements]}) == gl2_order(n)
                 for n in (2, 3, 4, 8, 9))
    ok = n_specs >= 20 and lemma_ok == order_ok == n_specs and crt_ok and hasse and counts
    record(6, ok, f"fiber orders {order_ok}/{n_specs}, commutator split {lemma_ok}/{n_specs}, "
                  f"CRT {crt_ok}, Hasse {hasse}, GL2 counts {counts}")
    assert ok


def _nontrivial_rows(appendix):
    return [r for r in appendix if r.obstruction != "2Cs"]


def test_criterion_7_tail_bound():
    a, b = euler_product(10**5), euler_product(10**6)
    gap = abs(math.log(a) - math.log(b))
    ok = record(7, gap <= tail_bound(10**5), f"tail: |log P(1e5) - log P(1e6)| = {gap:.2e} <= {tail_bound(10**5):.2e}")
    assert ok


def test_criterion_7_character_sum_matches_density(appendix):
    # two independent routes to the correction factor from the constructed image
    for row in _nontrivial_rows(appendix):
        fiber = image_of(row).fiber
        assert general_correction_via_characters(fiber)[0] == correction_from_density(fiber), row.name


@pytest.mark.xfail(strict=True, reason="character-sum route and tabulated closed form differ on the "
                                       "five rows with a nontrivial correction (see decisions ledger)")
def test_criterion_7_character_sum_matches_closed_form(appendix):
    mismatched = []
    for row in _nontrivial_rows(appendix):
        general, _ = general_correction_via_characters(image_of(row).fiber)
        closed = correction_factor(classified(row)[1])
        if general != closed:
            mismatched.append(f"{row.name} {general} vs {closed}")
    record(7, not mismatched, f"general vs closed form: {10 - len(mismatched)}/10 equal; " + ", ".join(mismatched))
    assert not mismatched


@pytest.mark.parametrize("name", ["392.a1", "69.a1"])
def test_criterion_8_empirical_cyclicity(rows, name):
    t = time.time()
    res = classified(rows[name])[1]
    predicted = cyclicity_constant(res).value
    observed = empirical_cyclicity(rows[name].curve, 10**5)
    rel = abs(float(observed) - predicted) / predicted
    elapsed = time.time() - t
    ok = record(8, rel <= 0.05 and elapsed <= 300,
                f"{name}: observed {float(observed):.5f} vs C_E {predicted:.5f}, rel err {rel:.2%}, {elapsed:.0f}s")
    assert ok


def test_criterion_9_batch_split(appendix):
    text = "name,a1,a2,a3,a4,a6,label\n" + "".join(
        ",".join([r.name, *map(str, r.coefficients), r.label]) + "\n" for r in appendix)
    records, errors = batch_rows(text)
    summary = batch_summary(records)
    split = tuple(summary[g] for g in ("2Cs", "2B", "2Cn"))
    ok = split == (15, 7, 3) and not errors and all(r["is_relative_serre"] for r in records)
    record(9, ok, f"appendix batch split {split[0]}/{split[1]}/{split[2]}; "
                  "database-wide census not reproduced (needs the external curve database)")
    assert ok
