"""Finite subgroups of GL2(Z/N): closure, lattices, quotients and fiber products."""
from .core import (
    GroupSlice, closure, commutator_subgroup, determinant_image, from_keys, gl2, index_in,
    is_level, is_subgroup, preimage_at, reduce_mod, sl2,
)
from .lattice import all_subgroups, conjugacy_partition, m_set, normal_subgroups
from .table import TableGroup
from .quotients import (
    Character, QuotientFingerprint, abelian_characters, index2_and_index3_characters, quo_intersection,
)
from .fiber import FiberProductSpec, direct_product, extend_hom, fiber_product
