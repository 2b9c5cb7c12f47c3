"""reeskit: exact verification of closed-form Rees algebra defining ideals.

Given a linear presentation matrix of a height-two perfect ideal (or a module
of projective dimension one) over Q[x_1..x_d], the package checks the
structural hypotheses, assembles the Jacobian dual, computes the defining
ideal of the Rees algebra in closed form as the symmetric-algebra ideal plus
the (d-1)-minors of the truncated dual, and certifies the result against an
independent Groebner-basis saturation oracle.  All arithmetic is exact over Q.
"""

from .groebner import GroebnerBasis, buchberger, leading_term_ideal, normal_form, s_polynomial
from .hypotheses import (
    HypothesisReport,
    PresentationInput,
    check_gs,
    check_height_profile,
    check_setting,
    find_distinguished_prime,
    normalize_block_form,
)
from .ideal_ops import (
    IdealHandle,
    colon,
    contains,
    dimension,
    eliminate,
    height,
    ideal,
    ideal_equal,
    intersect,
    radical_equals_variable_prime,
    radical_member,
    saturate,
    saturation_exponent,
)
from .polymatrix import (
    LinearCoeffs,
    PolyMatrix,
    extract_linear_coeffs,
    field_row_col_ops,
    fitting_ideal,
    matrix_from_strings,
    minors,
    rank_mod_vars,
)
from .polyring import (
    DEGREVLEX,
    LEX,
    MonomialOrder,
    Polynomial,
    VarSet,
    elimination_order,
    parse_poly,
    poly_to_text,
)
from .rees import (
    Certificate,
    ReesContext,
    SpecializationRecord,
    bourbaki_specialize,
    build_context,
    defining_ideal_closed_form,
    oracle_defining_ideal,
    special_fiber,
    specialize_and_certify,
    verify_deformation,
    verify_theorem,
)

__version__ = "0.1.0"
