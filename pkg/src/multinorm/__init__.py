"""Tate cohomology of finite groups over the standard complete
resolution, transfer maps and cup-product duality, with a rational
layer that turns local data of multiquadratic fields into norm-principle
verdicts.
"""

from .cochains import (
    CochainSpace,
    CohomologyGroup,
    cochain_space,
    cohomology,
    cohomology_trivial,
    differential_matrix,
    homotopy_matrix,
)
from .gmodules import (
    GModule,
    ModuleHom,
    ShortExactSequence,
    augmentation_hom,
    augmentation_ideal_sequence,
    coinvariant_module,
    fixed_module,
    fixed_points,
    permutation_module,
    regular_module,
    trivial_module,
)
from .groups import (
    FiniteGroup,
    GroupSurjection,
    QuotientGroup,
    Subgroup,
    direct_product,
    from_cayley_table,
    from_permutations,
    group_from_json,
    named_group,
    normal_subgroups,
    quotient,
    subgroup_from_elements,
    subgroup_generated,
)
from .intlinalg import (
    AbelianGroupPresentation,
    IntMatrix,
    SmithDecomposition,
    induced_map,
    kernel_basis,
    smith_normal_form,
    solve,
    subquotient,
)
from .pairings import (
    PairingTable,
    composite_pairing_alpha,
    cup_pairing,
    cup_value,
    is_perfect,
    verify_adjointness,
)
from .qarith import (
    PlaceOfQ,
    QuadraticTuple,
    critical_places,
    hilbert_symbol,
    is_square_qp,
    multiquadratic_decomposition,
    phi_value,
    phi_witness,
    sha_of_multiquadratic,
    triple_failure_report,
)
from .sha import (
    DecompositionConfig,
    MultinormCertificate,
    ShaReport,
    sha_tate,
    verify_multinorm_pair,
    verify_sha_surjectivity,
)
from .transfers import (
    CohomologyMap,
    connecting_map,
    corestriction_deg0,
    deflation,
    inflation,
    residuation,
    restriction,
)

__version__ = "0.1.0"
