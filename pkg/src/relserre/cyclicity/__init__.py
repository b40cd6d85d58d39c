"""Entanglement correction factors and cyclicity constants."""
from .constant import CyclicityConstant, cyclicity_constant, empirical_cyclicity, euler_product, tail_bound
from .correction import (
    DomainError, correction_2b, correction_2cn, correction_factor, correction_from_density,
    general_correction_via_characters,
)
