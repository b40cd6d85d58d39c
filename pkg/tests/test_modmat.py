from math import gcd
from itertools import product

import pytest
from hypothesis import given, strategies as st

from relserre.errors import ModulusMismatchError, NonInvertibleError, ParseError
from relserre.modmat import (
    ResidueMatrix, char_poly, crt_join, crt_scalar, crt_split, gl2_order, mat_inv, parse_generators,
    format_generators, prime_power_factors, sl2_order,
)

M = ResidueMatrix.of


def test_multiplication_by_hand():
    assert M(3, 0, 0, 1, 4) @ M(1, 1, 1, 0, 4) == M(3, 3, 1, 0, 4)


def test_inverse_examples():
    assert mat_inv(M(0, 1, 1, 1, 2)) == M(1, 1, 1, 0, 2)
    assert mat_inv(M(1, 2, 0, 1, 4)) == M(1, 2, 0, 1, 4)
    with pytest.raises(NonInvertibleError):
        mat_inv(M(2, 0, 0, 1, 4))


def test_char_poly():
    cp = char_poly(M(3, 0, 0, 1, 4))
    assert (cp.trace, cp.det) == (0, 3)


def test_crt_by_hand():
    assert crt_split(M(7, 0, 0, 1, 12)) == [M(3, 0, 0, 1, 4), M(1, 0, 0, 1, 3)]
    assert crt_join([M(1, 0, 0, 1, 4), M(2, 0, 0, 2, 3)]) == M(5, 0, 0, 5, 12)
    with pytest.raises(ModulusMismatchError):
        crt_join([M(1, 0, 0, 1, 4), M(1, 0, 0, 1, 6)])


def test_parsing():
    gens = parse_generators("1,2,3,4;5,6,7,8", 9)
    assert format_generators(gens) == "1,2,3,4;5,6,7,8"
    with pytest.raises(ParseError):
        ResidueMatrix.from_text("1,2,3", 5)
    with pytest.raises(ModulusMismatchError):
        M(1, 0, 0, 1, 8).reduce(3)


def test_prime_power_factors():
    assert prime_power_factors(420) == [4, 3, 5, 7]


@pytest.mark.parametrize("n", [2, 3, 4, 8, 9])
def test_group_order_formula_by_enumeration(n):
    units = sum(1 for a, b, c, d in product(range(n), repeat=4) if gcd(a * d - b * c, n) == 1)
    ones = sum(1 for a, b, c, d in product(range(n), repeat=4) if (a * d - b * c) % n == 1)
    assert units == gl2_order(n)
    assert ones == sl2_order(n)


moduli = st.sampled_from([2, 3, 4, 5, 6, 8, 9, 12, 28, 56, 120, 420])


def matrices(n):
    return st.tuples(*[st.integers(0, n - 1)] * 4).map(lambda e: ResidueMatrix(n, e))


@given(moduli.flatmap(lambda n: st.tuples(matrices(n), matrices(n))))
def test_det_multiplicative(pair):
    A, B = pair
    assert (A @ B).det == A.det * B.det % A.modulus


@given(moduli.flatmap(matrices))
def test_crt_round_trip(A):
    assert crt_join(crt_split(A)) == A


@given(moduli.flatmap(matrices))
def test_inverse_when_unit(A):
    if A.is_invertible():
        assert A @ mat_inv(A) == ResidueMatrix.identity(A.modulus)
        assert A ** -1 == mat_inv(A)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_crt_scalar(x, y):
    r = crt_scalar([x % 8, y % 105], [8, 105])
    assert r % 8 == x % 8 and r % 105 == y % 105
