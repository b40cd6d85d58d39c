import math
from fractions import Fraction

import pytest

from relserre.ellq import is_cyclic_group

from conftest import classified, image_of
from relserre.cyclicity import (
    DomainError, correction_2b, correction_2cn, correction_factor, correction_from_density,
    cyclicity_constant, empirical_cyclicity, euler_product, general_correction_via_characters, tail_bound,
)

# high-precision product over odd primes <= 10^6, evaluated independently (mpmath, 30 digits)
EULER_1E6 = 0.976502287328178858860030196822
C_392A1 = 0.651324442308510832778002945433


def test_closed_forms():
    assert correction_2b(17) == Fraction(78337, 78336)
    assert correction_2b(-23 * 4) == Fraction(267169, 267168)
    assert correction_2b(-21) == 1
    assert correction_2b(-23) == Fraction(267169, 267168)
    assert correction_2b(3) == 1
    assert correction_2cn(7) == Fraction(2017, 2016)
    assert correction_2cn(49) == 1


def test_appendix_closed_form(appendix):
    for row in appendix:
        if row.obstruction != "2Cs":
            assert correction_factor(classified(row)[1]) == row.correction, row.name


def test_domain_errors(rows):
    with pytest.raises(DomainError):
        correction_factor(classified(rows["315.a2"])[1])
    with pytest.raises(DomainError):
        correction_from_density(image_of(rows["315.a2"]).fiber)


@pytest.mark.parametrize("name", ["1152.d1", "490.f1", "392.c1", "3136.b1"])
def test_character_sum_and_density_agree(rows, name):
    fiber = image_of(rows[name]).fiber
    corr, n_phi = general_correction_via_characters(fiber)
    assert corr == correction_from_density(fiber)


def test_phi_sizes(rows):
    assert general_correction_via_characters(image_of(rows["1152.d1"]).fiber) == (1, 1)
    assert general_correction_via_characters(image_of(rows["392.c1"]).fiber)[1] == 3


def test_euler_product_oracle():
    assert euler_product(10**6) == pytest.approx(EULER_1E6, rel=1e-14)


def test_tail_bound_honored():
    a, b = euler_product(10**5), euler_product(10**6)
    assert abs(math.log(a) - math.log(b)) <= tail_bound(10**5)
    assert tail_bound(10**6) < tail_bound(10**5)


def test_constants(rows):
    cc = cyclicity_constant(classified(rows["392.a1"])[1])
    assert cc.prefactor == Fraction(2017, 2016) * Fraction(2, 3)
    assert cc.value == pytest.approx(C_392A1, rel=1e-13)
    lo, hi = cc.interval()
    assert lo <= cc.value <= hi
    zero = cyclicity_constant(classified(rows["315.a2"])[1])
    assert zero.value == 0 and zero.to_dict()["prefactor"] == "0/1"
    with pytest.raises(ValueError):
        cyclicity_constant(classified(rows["392.a1"])[1], L=2)


def test_empirical_small(rows):
    # full rational 2-torsion: only p = 2 can give a cyclic reduction
    c = rows["315.a2"].curve
    assert empirical_cyclicity(c, 2000).numerator == (1 if is_cyclic_group(c, 2) else 0)
    q = empirical_cyclicity(rows["392.a1"].curve, 5000)
    assert 0.55 < q < 0.75
