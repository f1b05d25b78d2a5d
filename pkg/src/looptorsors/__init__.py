"""Loop normal forms of quadratic forms and toral Azumaya algebras over Laurent polynomial rings."""
from ._kernels import BACKEND
from .errors import DomainError
from .azumaya import (
    BrauerMatrix,
    SkewNormalForm,
    SymbolFactor,
    ToralDescriptor,
    Verdict,
    additive_order,
    brauer_matrix,
    enumerate_toral,
    index_and_split,
    orbit_equivalent,
    ramification_row,
    skew_normal_form,
    tensor,
    unimodular_act,
)
from .basefield import (
    FiniteField,
    KDiagonalForm,
    Rationals,
    RealClosed,
    SquareClass,
    is_isometric_k,
    is_isotropic_k,
    parse_field,
    square_class,
    witt_decompose_k,
)
from .laurent import (
    LaurentElement,
    MonomialUnit,
    UnitSquareClass,
    coordinate_residues,
    leading_unit,
    unit_square_class,
)
from .quadform import (
    LoopNormalForm,
    RDiagonalForm,
    WittDecompositionF,
    count_loop_classes,
    enumerate_loop_classes,
    is_isometric_r,
    is_unramified,
    loop_normal_form,
    reassemble,
    second_residue,
    springer_decompose,
    witt_decompose_f,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "BrauerMatrix",
    "SkewNormalForm",
    "SymbolFactor",
    "ToralDescriptor",
    "Verdict",
    "additive_order",
    "brauer_matrix",
    "enumerate_toral",
    "index_and_split",
    "orbit_equivalent",
    "ramification_row",
    "skew_normal_form",
    "tensor",
    "unimodular_act",
    "FiniteField",
    "KDiagonalForm",
    "Rationals",
    "RealClosed",
    "SquareClass",
    "is_isometric_k",
    "is_isotropic_k",
    "parse_field",
    "square_class",
    "witt_decompose_k",
    "LaurentElement",
    "MonomialUnit",
    "UnitSquareClass",
    "coordinate_residues",
    "leading_unit",
    "unit_square_class",
    "LoopNormalForm",
    "RDiagonalForm",
    "WittDecompositionF",
    "count_loop_classes",
    "enumerate_loop_classes",
    "is_isometric_r",
    "is_unramified",
    "loop_normal_form",
    "reassemble",
    "second_residue",
    "springer_decompose",
    "witt_decompose_f",
]
