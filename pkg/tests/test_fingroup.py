import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relserre.errors import ModulusMismatchError
from relserre.fingroup import (
    FiberProductSpec, abelian_characters, all_subgroups, closure, commutator_subgroup,
    conjugacy_partition, determinant_image, direct_product, fiber_product, gl2, index_in,
    is_level, normal_subgroups, preimage_at, reduce_mod, sl2,
)
from relserre.fingroup.quotients import index_subgroups, quo_intersection
from relserre.modmat import ResidueMatrix, gl2_order


def test_closure_small():
    G = closure([ResidueMatrix.of(0, 1, 1, 1, 2)], 2)
    assert G.order == 3


@pytest.mark.parametrize("n", [2, 3, 4, 8, 9])
def test_gl2_and_sl2_orders(n):
    assert gl2(n).order == gl2_order(n)
    assert gl2(n).order == sl2(n).order * len(determinant_image(gl2(n)))


def test_preimages():
    B = closure([ResidueMatrix.of(1, 1, 0, 1, 2)], 2)
    assert preimage_at(B, 4).order == 32
    triv = closure([], 2)
    assert preimage_at(triv, 8).order == 256
    assert is_level(preimage_at(B, 8), 2)


def test_s3_lattice():
    G = gl2(2)
    subs = all_subgroups(G)
    assert len(subs) == 6
    assert sorted(H.order for H in normal_subgroups(G)) == [1, 3, 6]
    order2 = [H for H in subs if H.order == 2]
    assert len(conjugacy_partition(order2, G)) == 1
    idx2 = index_subgroups(G, 2)
    assert len(idx2) == 1 and idx2[0].order == 3


def test_commutator_of_gl2():
    assert commutator_subgroup(gl2(3)).same_set(sl2(3))
    assert commutator_subgroup(gl2(2)).order == 3
    assert index_in(commutator_subgroup(gl2(4)), sl2(4)) == 2


def test_quo_intersection_gl2_2_with_itself():
    common = quo_intersection(gl2(2), gl2(2))
    assert [f.name() for f in common] == ["0", "Z/2", "S3"]
    assert [f.is_cyclic for f in common] == [True, True, False]


def test_reduce_mod():
    assert reduce_mod(gl2(8), 2).same_set(gl2(2))
    assert reduce_mod(sl2(9), 3).same_set(sl2(3))


def test_fiber_product_needs_coprime():
    with pytest.raises(ModulusMismatchError):
        FiberProductSpec(gl2(2), gl2(4), 1, {}, {})


# -- random fiber products over cyclic quotients ---------------------------------

def _chars(G, q):
    if q == 6:
        return [(3 * a.values + 4 * b.values) % 6
                for a in abelian_characters(G, 2) for b in abelian_characters(G, 3)]
    return [c.values for c in abelian_characters(G, q)]


def _spec(q, G1, v1, G2, v2):
    def at(G, v):
        return {g.key: int(v[int(np.searchsorted(G.elements, g.key))]) for g in G.gens}
    return FiberProductSpec(G1, G2, q, at(G1, v1), at(G2, v2))


@pytest.fixture(scope="module")
def random_specs():
    rng = random.Random(20240601)
    S4, S3 = all_subgroups(gl2(4)), all_subgroups(gl2(3))
    out = []
    for q in (2, 3, 6):
        left = [(H, v) for H in S4 for v in _chars(H, q)]
        right = [(H, v) for H in S3 for v in _chars(H, q)]
        for _ in range(8):
            (G1, v1), (G2, v2) = rng.choice(left), rng.choice(right)
            out.append(_spec(q, G1, v1, G2, v2))
    return out


def test_fiber_product_order_formula(random_specs):
    for spec in random_specs:
        assert fiber_product(spec).order == spec.left.order * spec.right.order // spec.q


def test_cyclic_quotient_commutators_split(random_specs):
    assert len(random_specs) >= 20
    for spec in random_specs:
        H = fiber_product(spec)
        split = direct_product(commutator_subgroup(spec.left), commutator_subgroup(spec.right))
        assert commutator_subgroup(H).same_set(split)


_S2 = None


def _small_pool():
    global _S2
    if _S2 is None:
        left = [(H, v) for H in all_subgroups(gl2(2)) for v in _chars(H, 2)]
        right = [(H, v) for H in all_subgroups(gl2(3)) for v in _chars(H, 2)]
        _S2 = (left, right)
    return _S2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_fiber_product_property(i, j):
    left, right = _small_pool()
    (G1, v1), (G2, v2) = left[i % len(left)], right[j % len(right)]
    spec = _spec(2, G1, v1, G2, v2)
    H = fiber_product(spec)
    assert H.order * 2 == G1.order * G2.order
    assert reduce_mod(H, 2).same_set(G1) and reduce_mod(H, 3).same_set(G2)
    split = direct_product(commutator_subgroup(G1), commutator_subgroup(G2))
    assert commutator_subgroup(H).same_set(split)
