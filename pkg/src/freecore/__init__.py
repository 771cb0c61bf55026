"""Exact symbolic structure calculator for free product von Neumann
algebras with almost periodic states.

Everything is computed in exact rational arithmetic over finitely
generated multiplicative groups; nothing is ever approximated unless an
oracle explicitly runs a numerical model.
"""

__version__ = "0.1.0"

from .algebra import (
    INFINITE,
    AbstractII1,
    AlgebraSpec,
    FreeGroupFactor,
    FullIIIWithCore,
    GeometricMatrixTail,
    HyperfiniteDiffuse,
    MatrixBlock,
    ProjectionRef,
)
from .amalg import (
    CompressionScenario,
    centralizer_structure,
    choose_gamma,
    choose_increasing_sequence,
    compression_formula,
    dichotomy_promote,
    layer_partition,
    sequential_composition_param,
    to_canonical,
)
from .core import (
    build_core,
    dual_action,
    fixed_point_corner,
    transport_atomic,
)
from .errors import (
    Dim22Rejected,
    DisconnectedIndex,
    EngineError,
    FactorBoundExceeded,
    HypothesesNotRecognized,
    InvalidScenario,
    NonPositiveRatio,
    NotScalarSummand,
    RatioOutsideGroup,
    SpecInvalid,
    SubgroupNotContained,
    TrivialGamma,
    UnsupportedStructure,
)
from .fdim import compress_param, fdim, finite_free_product, scalar_atom_rule
from .freeprod import free_product, strip_reduction
from .modular import classify_diffuse_type, point_spectrum_ratios, sd_invariant, t_set
from .scalars import GroupElement, MultGroup

__all__ = [
    "__version__",
    "INFINITE",
    "AbstractII1",
    "AlgebraSpec",
    "CompressionScenario",
    "Dim22Rejected",
    "DisconnectedIndex",
    "EngineError",
    "FactorBoundExceeded",
    "FreeGroupFactor",
    "FullIIIWithCore",
    "GeometricMatrixTail",
    "GroupElement",
    "HyperfiniteDiffuse",
    "HypothesesNotRecognized",
    "InvalidScenario",
    "MatrixBlock",
    "MultGroup",
    "NonPositiveRatio",
    "NotScalarSummand",
    "ProjectionRef",
    "RatioOutsideGroup",
    "SpecInvalid",
    "SubgroupNotContained",
    "TrivialGamma",
    "UnsupportedStructure",
    "build_core",
    "centralizer_structure",
    "choose_gamma",
    "choose_increasing_sequence",
    "classify_diffuse_type",
    "compress_param",
    "compression_formula",
    "dichotomy_promote",
    "dual_action",
    "fdim",
    "finite_free_product",
    "fixed_point_corner",
    "free_product",
    "layer_partition",
    "point_spectrum_ratios",
    "scalar_atom_rule",
    "sd_invariant",
    "sequential_composition_param",
    "strip_reduction",
    "t_set",
    "to_canonical",
    "transport_atomic",
]
