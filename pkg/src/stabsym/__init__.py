"""stabsym: exact-arithmetic stabilizer polytopes and their symmetry groups.

Everything is computed over explicit cyclotomic fields or prime fields; no
floating point enters any verified value.
"""

from .zmod import ZMod, ZModMatrix, invert, legendre, rref
from .cyclotomic import CycNumber, GaloisMap, galois_apply, root_of_unity, sqrt_d
from .phase_space import (
    AffineSubspace,
    LagrangianSubspace,
    StabilizerLabel,
    Subspace,
    apply_affine_similitude,
    enumerate_lagrangians,
    enumerate_stabilizer_labels,
    intersect,
    label_from_functional,
    symplectic_form,
)
from .operators import (
    GramMatrix,
    OpMatrix,
    build_gram,
    gram_closed_form,
    hs_inner,
    phase_point,
    stab_projector,
    stab_projector_qubit,
    stabilizer_states,
    weyl,
)
from .clifford import (
    AffineSimilitude,
    ExtCliffordElement,
    Similitude,
    agsp_compose,
    ext_compose,
    ext_element_matrix,
    metaplectic,
    real_clifford_orbit,
    sp_generators,
    sp_order,
    wreath_decompose_table,
)
from .moments import (
    OperatorSet,
    check_lin_jor_condition,
    check_lin_wig_condition,
    is_complex_2design,
    is_complex_3design,
    is_real_4design,
    is_real_6design,
    moment_form,
)
from .permgroup import PermGroup, schreier_sims
from .symmetry import (
    ColoredGraph,
    gram_automorphisms,
    predicted_group,
    verify_Sf_machinery,
    verify_theorem1,
    wreath_decompose,
)
from .polytope1 import direct_sum_check, facet_family, polytope_membership

__version__ = "0.1.0"
