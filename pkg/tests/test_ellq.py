from math import isqrt

import pytest
from hypothesis import given, strategies as st
from sympy import Poly, primerange, symbols
from sympy.polys.numberfields.basis import round_two

from relserre.ellq import (
    CurveModel, Full, Irreducible, PartialSplit, Split, ap, classify_mod2, is_cyclic_group, is_good_prime,
    k_of, kronecker, n_prime, squarefree_part,
)
from relserre.ellq.arith import is_squarefree, primes_upto
from relserre.ellq.cubic import cubic_field_conductor, field_discriminant
from relserre.ellq.entangle import entanglement_data_2cs, s_set_2cs
from relserre.ellq.points import frobenius_traces
from relserre.errors import ParseError

_T = symbols("T")
C315 = CurveModel(1, -1, 1, -68, 182, name="315.a2")
C392 = CurveModel(0, 0, 0, -7, 7, name="392.a1")


def _sf_trial(n):
    s, m, d = (-1 if n < 0 else 1), abs(n), 2
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
        d += 1
    return s * m


def test_squarefree_examples():
    assert squarefree_part(240) == 15
    assert squarefree_part(-16929) == -209
    with pytest.raises(ParseError):
        squarefree_part(0)


@given(st.integers(-10**7, 10**7).filter(bool))
def test_squarefree_matches_trial_division(n):
    assert squarefree_part(n) == _sf_trial(n)


@given(st.integers(1, 10**6).filter(is_squarefree))
def test_n_prime_normalization(N):
    Np = n_prime(N)
    assert Np % 4 == 1
    assert abs(Np) in (N, N // 2 if N % 2 == 0 else N)
    assert n_prime(-N) == Np
    assert k_of(N) == (3 if N % 2 == 0 else 2)


@given(st.integers(-500, 500), st.sampled_from(list(primerange(3, 200))))
def test_kronecker_is_euler_criterion(a, p):
    e = pow(a, (p - 1) // 2, p)
    assert kronecker(a, p) == {0: 0, 1: 1, p - 1: -1}[e]


def _naive_ap(c, p):
    a1, a2, a3, a4, a6 = c.coefficients
    n = sum(1 for x in range(p) for y in range(p)
            if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0)
    return p - n


def test_ap_frozen_oracle():
    assert ap(C315, 11) == 0  # naive count, fixed independently


@pytest.mark.parametrize("curve", [C315, C392, CurveModel(1, 0, 1, -16, -25)])
def test_ap_matches_naive_count(curve):
    for p in primerange(3, 80):
        if is_good_prime(curve, p):
            assert ap(curve, p) == _naive_ap(curve, p)


def test_bad_primes():
    assert not is_good_prime(C315, 5)
    assert not is_good_prime(C315, 3)
    assert is_good_prime(C315, 11)


@pytest.mark.parametrize("curve", [C315, C392])
def test_hasse_bound(curve):
    for p, a in frobenius_traces(curve, 3000).items():
        assert a * a <= 4 * p


def _points(c, p):
    a1, a2, a3, a4, a6 = c.coefficients
    assert a1 == a3 == 0
    return [(x, y) for x in range(p) for y in range(p) if (y * y - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0]


def _add(P, Q, c, p):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + 2 * c.a2 * x1 + c.a4) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - c.a2 - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _brute_cyclic(c, p):
    pts = _points(c, p)
    n = len(pts) + 1
    for P in pts:
        Q, k = P, 1
        while Q is not None:
            Q, k = _add(Q, P, c, p), k + 1
        if k == n:
            return True
    return n == 1


@pytest.mark.parametrize("curve", [C392, CurveModel(0, 0, 0, -1083, 10582), CurveModel(0, 1, 0, -4, 0)])
def test_cyclicity_of_reduction_brute_force(curve):
    for p in primerange(5, 60):
        if is_good_prime(curve, p):
            assert is_cyclic_group(curve, p) == _brute_cyclic(curve, p), p


def test_primes_upto():
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_singular_and_parse():
    with pytest.raises(ParseError):
        CurveModel(0, 0, 0, 0, 0)
    assert CurveModel.parse("-1083,10582") == CurveModel(0, 0, 0, -1083, 10582)
    with pytest.raises(ParseError):
        CurveModel.parse("1,2,3")


def test_mod2_shapes():
    assert isinstance(classify_mod2(CurveModel(0, 0, 0, -1083, 10582)), Split)
    assert isinstance(classify_mod2(CurveModel(1, 0, 1, -16, -25)), PartialSplit)
    assert isinstance(classify_mod2(C392), Irreducible)
    assert isinstance(classify_mod2(CurveModel(0, 0, 0, 1, 1)), Full)


def test_cubic_conductor():
    assert cubic_field_conductor((1, 0, -3, 1)) == 9
    assert field_discriminant((1, 0, -3, 1)) == 81
    with pytest.raises(ParseError):
        cubic_field_conductor((1, 0, 1, 1))


@given(st.integers(-300, 300))
def test_cubic_family_against_round_two(v):
    # T^3 - 3T + 1 - v(T^2 - T): polynomial discriminant g^2 with g = v^2 - 3v + 9
    g = v * v - 3 * v + 9
    cubic = (1, -v, v - 3, 1)
    f = cubic_field_conductor(cubic)
    _, dK = round_two(Poly(_T**3 - v * _T**2 + (v - 3) * _T + 1, _T))
    assert int(dK) == f * f
    assert g % f == 0


def test_example_s_set():
    shape = Split((-61, -118, 179))
    assert s_set_2cs(shape) == (15, 33, 55, 57, 95, 209, 3135)
    ent = entanglement_data_2cs(shape, 6)
    assert [t.N for t in ent.triples] == [15, 33, 57]
    assert [t.k for t in ent.triples] == [2, 2, 2]
