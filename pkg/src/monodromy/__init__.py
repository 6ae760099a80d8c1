"""Specialized reduced Gassner representations of pure braid groups over
finite involutive algebras, with exact verification of the monodromy image.
"""

from .arith import (
    Case,
    FieldTooLargeError,
    Fq,
    InvolutiveAlgebra,
    SplittingData,
    build_algebra,
    splitting_data,
)
from .braid import BraidWord, StrandPermutation, half_twist, pure_generator
from .gassner import (
    ColoredElement,
    GassnerContext,
    HermitianForm,
    context,
    evaluate_word,
    generator_matrix,
    invariant_form,
    kernel_closed_form,
    prop21_commutator,
)
from .groupengine import (
    MatrixGroup,
    StabilizerChain,
    bsgs_order,
    enumerate_closure,
    image_group,
)
from .unitary import (
    ExpectedImage,
    classical_group_order,
    expected_image,
    find_degenerate_subsequence,
    verify_extension_identities,
)

__all__ = [
    "BraidWord",
    "Case",
    "ColoredElement",
    "ExpectedImage",
    "FieldTooLargeError",
    "Fq",
    "GassnerContext",
    "HermitianForm",
    "InvolutiveAlgebra",
    "MatrixGroup",
    "SplittingData",
    "StabilizerChain",
    "StrandPermutation",
    "bsgs_order",
    "build_algebra",
    "classical_group_order",
    "context",
    "enumerate_closure",
    "evaluate_word",
    "expected_image",
    "find_degenerate_subsequence",
    "generator_matrix",
    "half_twist",
    "image_group",
    "invariant_form",
    "kernel_closed_form",
    "prop21_commutator",
    "pure_generator",
    "splitting_data",
    "verify_extension_identities",
]

__version__ = "0.1.0"
