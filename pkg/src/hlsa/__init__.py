"""Exact arithmetic for restricted Hom-Lie superalgebras over GF(p^k)."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .field import FieldElement, FieldSpec, field_arith, frobenius, make_field
from .linalg import SuperSpace, Subspace
from .report import Check, Status, VerificationReport
from .algebra import (
    HomLieSuperalgebra,
    ad_alpha,
    center,
    centralizer,
    fixed_even_subspace,
    is_ideal,
    is_subalgebra,
    verify_axioms,
)
from .restriction import (
    PMap,
    RestrictabilityCertificate,
    Sampled,
    SemilinearMap,
    exhaustive_limit,
    ideal_decomposition_check,
    is_p_subalgebra,
    jacobson_sum,
    normalize_pmap_on_center,
    pmap_difference,
    pmap_eval,
    restrictability_certificate,
    s_coefficients,
    shift_pmap,
    verify_pmap,
)
from .constructions import (
    HomAssociativeSuperalgebra,
    change_basis,
    commutator_superalgebra,
    direct_sum,
    direct_sum_n,
    direct_sum_pmap,
    matrix_superalgebra,
    verify_hom_associative,
    yau_twist,
)
from .morphisms import (
    Morphism,
    graph,
    graph_criterion,
    pullback_restricted,
    pushforward_restricted,
    twisted_morphism_check,
    verify_morphism,
    verify_restricted_morphism,
)
from .catalog import CatalogEntry, catalog_get, catalog_names
from .fileformat import HlsaDocument, load_hlsa, parse_hlsa, serialize_hlsa
