"""Finite-dimensional computations for free wreath products of compact
quantum groups over multimatrix algebras."""

from .errors import QwreathError, ParseError, UsageError
from .multimatrix import (
    Block,
    MultiMatrixAlgebra,
    AlgebraElement,
    make_algebra,
    onb_element,
    gns_inner,
    unit_coords,
    structure_tensors,
    delta_form_check,
    ergodic_decomposition,
    modular_data,
    inverse_state,
    star_matrix,
)
from .groups import (
    FiniteGroup,
    GroupRep,
    cyclic_group,
    symmetric_group,
    direct_product,
    trivial_rep,
    sign_rep,
    cyclic_character,
    permutation_rep,
    standard_rep,
    tensor_rep,
    rep_morphism_space,
)
from .actions import (
    ClassicalAction,
    DualAction,
    make_classical_action,
    make_dual_action,
    intertwiner_space,
    is_ergodic,
    is_two_ergodic,
    is_faithful,
    CoefficientAlgebra,
    verify_coefficient_relations,
    symmetric_coordinate_action,
    pauli_action,
    cyclic_translation_dual_action,
    z4_quotient_dual_action,
    s3hat_fixtures,
    zp_dichotomy_check,
)
from .haar import (
    MomentIndex,
    haar_first_moment,
    haar_second_moment,
    haar_projection,
    second_moment_table,
    brute_force_moment,
    beta_kappa,
    cond_expectation,
)
from .repcat import (
    RepData,
    conjugate_data_u,
    wreath_conjugate,
    wreath_morphism,
    wreath_morphism_check,
)
from .ktheory import (
    smith_normal_form,
    FgAbelianGroup,
    KData,
    MarkedClass,
    preset_k_data,
    block_k_groups,
    wreath_k_groups,
    wreath_k_groups_over_aut_plus,
)

__version__ = "0.1.0"
