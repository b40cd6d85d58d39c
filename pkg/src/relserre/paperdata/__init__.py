"""Bundled group data, the appendix table and the verification suite."""
from .groups import LabeledGroup, builtin_group, in_m_set, labeled_group, load_groups
from .labels import (
    ADELIC_INDEX, COMMUTATOR_INDEX, M_SET_EXPONENT, OBSTRUCTIONS, S_G, AppendixRow, TwoAdicLabel,
    data_dir, load_appendix, obstruction_of_label,
)
