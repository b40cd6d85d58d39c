"""Elliptic curves over Q: models, 2-torsion shapes, entanglement data and point counts."""
from .arith import k_of, kronecker, n_prime, squarefree_part
from .curves import CurveModel, Full, Irreducible, PartialSplit, Split, classify_mod2
from .points import ap, is_cyclic_group, is_good_prime
