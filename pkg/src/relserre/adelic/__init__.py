"""Classification, image conductors and explicit adelic images."""
from .candidates import candidate_fiber_groups, disambiguate_by_frobenius
from .classify import (
    AdelicImage, ClassificationInput, ClassificationResult, adelic_image, image_conductor, infer_label,
    is_relative_serre,
)
from .image import FiberCondition, FiberImage
from .sieve import SurjectivityCertificate, certify_mod_l_surjectivity, certify_odd_surjectivity
