"""Unextendible bases and unambiguous LOCC discrimination of multipartite bases."""

from .errors import (
    DependentMembersError,
    NotABasisError,
    PreconditionError,
    ShapeMismatchError,
    UBKitError,
)
from .linalg import (
    PureState,
    StateSet,
    SubspaceBasis,
    SystemShape,
    inner_product,
    is_product_state,
    lower_bound_N,
    numeric_rank,
    orthocomplement,
    schmidt_values,
    second_schmidt_value,
    span_basis,
    tensor_product,
)
from .constructions import (
    INF,
    computational_basis,
    cross_set,
    default_index_set,
    default_theorem2_points,
    example2_basis,
    fourier_pair_set,
    ghz_triple,
    global_vandermonde_state,
    max_entangled_state,
    minimal_gupb,
    spread_theorem2_points,
    theorem2_basis,
    vandermonde_local,
    vandermonde_product,
)
from .certifiers import (
    SeesawOptions,
    brute_force_product_search,
    certify_unambiguous_locc,
    find_detecting_state,
    is_extendible,
    is_genuinely_unextendible,
    lemma2_counting_check,
    seesaw_product_search,
    verify_detecting_certificate,
)

from .reciprocal import (
    classify_basis,
    involution_check,
    reciprocal_basis,
    theorem3_analysis,
)

__version__ = "0.1.0"
