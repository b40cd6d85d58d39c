import pytest

from conftest import classified, image_of
from relserre.adelic import ClassificationInput, adelic_image, image_conductor, is_relative_serre
from relserre.adelic.classify import char_poly_set, frobenius_char_poly, infer_label
from relserre.adelic.frames import frame_of
from relserre.adelic.image import permutation_order
from relserre.adelic.sieve import certify_mod_l_surjectivity
from relserre.ellq import CurveModel, classify_mod2
from relserre.errors import AmbiguityError, InconsistencyError, ParseError
from relserre.fingroup import closure, determinant_image
from relserre.modmat import gl2_order


def test_input_validation():
    c = CurveModel(0, 0, 0, -1083, 10582)
    with pytest.raises(ParseError):
        ClassificationInput(c, mode="trusting")
    with pytest.raises(ParseError):
        ClassificationInput(c, prime_bound=10)
    with pytest.raises(ParseError):
        ClassificationInput(c, label="6.2.0.1")


def test_example_2cs(rows):
    inp, res = classified(rows["315.a2"])
    assert res.is_relative_serre and res.m_E == 420 and res.adelic_index == 48
    assert [t.N for t in res.entanglement.triples] == [3, 5, 7]


def test_full_mod2_image_is_not_relative_serre():
    res = is_relative_serre(ClassificationInput(CurveModel(0, 0, 0, 1, 1)))
    assert res.obstruction == "none" and not res.is_relative_serre


def test_label_outside_s_g(rows):
    res = is_relative_serre(ClassificationInput(rows["315.a2"].curve, label="4.24.0.3"))
    assert not res.is_relative_serre
    assert "not in S_2Cs" in res.reasons[0]


def test_label_from_other_obstruction(rows):
    with pytest.raises(InconsistencyError):
        is_relative_serre(ClassificationInput(rows["69.a1"].curve, label="2.6.0.1"))


def test_frobenius_mismatch(rows):
    with pytest.raises(InconsistencyError):
        is_relative_serre(ClassificationInput(rows["315.a2"].curve, label="8.24.0.5"))


def test_uncertified_odd_prime():
    # rational 6-torsion: the mod-3 image is not surjective
    c = CurveModel(1, 0, 1, 4, -6)
    res = is_relative_serre(ClassificationInput(c))
    assert not res.is_relative_serre and res.uncertified == (3,)
    attested = is_relative_serre(ClassificationInput(c, mode="attested"))
    assert attested.is_relative_serre and attested.uncertified == ()


def test_sieve_certificates(rows):
    cert = certify_mod_l_surjectivity(rows["315.a2"].curve, 5)
    assert cert.certified
    assert not certify_mod_l_surjectivity(CurveModel(1, 0, 1, 4, -6), 3).certified


def test_label_inference_and_ambiguity(rows):
    for name in ("33.a2", "102.a1", "392.c1"):
        res = is_relative_serre(ClassificationInput(rows[name].curve))
        assert res.label == rows[name].label and res.label_inferred
    frame = frame_of(classify_mod2(rows["315.a2"].curve))
    with pytest.raises(AmbiguityError):
        infer_label("2Cs", frame, [])


def test_image_conductor_table(rows):
    for name in ("315.a2", "69.a1", "392.a1", "3136.b1"):
        _, res = classified(rows[name])
        assert image_conductor(res.obstruction, res.label, res.entanglement) == rows[name].m_E


@pytest.mark.parametrize("name", ["392.a1", "69.a1", "46.a2", "56.a3"])
def test_image_structure(rows, name):
    row = rows[name]
    im = image_of(row)
    assert im.modulus == row.m_E
    assert im.index == (48 if row.obstruction == "2Cs" else 12)
    assert im.order * im.index == gl2_order(im.modulus)
    assert permutation_order(im.generators) == im.order
    assert all(g.modulus == row.m_E for g in im.generators)


def test_materialized_image_and_frobenius(rows):
    row = rows["392.a1"]
    im = image_of(row)
    G = im.fiber.materialize()
    assert G.order == im.order
    assert len(determinant_image(G)) == 12
    assert all(im.fiber.contains(g) for g in im.generators)
    polys = char_poly_set(G)
    for p in (3, 5, 11, 13, 17, 19):
        assert frobenius_char_poly(row.curve, p, 28) in polys
    assert closure(im.generators, 28).order == im.order


def test_adelic_image_requires_serre():
    with pytest.raises(InconsistencyError):
        adelic_image(ClassificationInput(CurveModel(0, 0, 0, 1, 1)))
