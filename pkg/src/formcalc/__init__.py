"""Exact exterior calculus on coordinate charts.

Sparse rational-coefficient polynomials; differential forms and multivector
fields with wedge, exterior derivative, contraction and volume-form transfer;
the graded bracket of multivector fields; generalized even-arity brackets,
Nambu top brackets, Jacobi-type brackets and Dirac brackets for second-class
constraints.  Everything is exact -- there is no floating point anywhere.
"""

from .brackets import (
    BracketDef,
    JacobiDef,
    bracket,
    derived_vf,
    hamiltonian_vf,
    homogenization_check,
    jacobi_bracket,
    jacobiator,
    nambu_top_bracket,
    omega_power_bracket,
    poisson_bracket,
)
from .chart import Chart
from .dirac import (
    ConstraintSet,
    DiracNormalization,
    calibrate_normalization,
    dirac_bracket_form,
    dirac_bracket_matrix,
    regularity_check,
)
from .errors import (
    AlgebraError,
    ArityMismatch,
    CalibrationFailure,
    ChartMismatch,
    DegenerateStructure,
    GradeMismatch,
    KindMismatch,
    NotDivisible,
    ParseError,
)
from .exterior import (
    Form,
    Multivector,
    SymplecticData,
    contract,
    coordinate_field,
    coordinate_form,
    differential,
    exterior_derivative,
    form_power,
    lie_derivative,
    mv_from_form,
    pair,
    poisson_bivector,
    standard_form,
    wedge,
    wedge_all,
)
from .manifest import Scenario, parse_scenario, parse_scenario_text
from .parsing import parse_expr, parse_tensor, parse_value
from .poly import (
    ExpPoly,
    Polynomial,
    RationalExpr,
    coordinates,
    exact_divide,
    matrix_adjugate,
    matrix_determinant,
)
from .schouten import (
    is_n_poisson,
    is_poisson,
    jacobi_pair_check,
    schouten,
    schouten_volume_identity_check,
    volume_poisson_criterion,
)
from .suites import darboux_chart, magnetic_form, run_suite, suite_names

__all__ = [
    "AlgebraError",
    "ArityMismatch",
    "BracketDef",
    "CalibrationFailure",
    "Chart",
    "ChartMismatch",
    "ConstraintSet",
    "DegenerateStructure",
    "DiracNormalization",
    "ExpPoly",
    "Form",
    "GradeMismatch",
    "JacobiDef",
    "KindMismatch",
    "Multivector",
    "NotDivisible",
    "ParseError",
    "Polynomial",
    "RationalExpr",
    "Scenario",
    "SymplecticData",
    "bracket",
    "calibrate_normalization",
    "contract",
    "coordinate_field",
    "coordinate_form",
    "coordinates",
    "darboux_chart",
    "derived_vf",
    "differential",
    "dirac_bracket_form",
    "dirac_bracket_matrix",
    "exact_divide",
    "exterior_derivative",
    "form_power",
    "hamiltonian_vf",
    "homogenization_check",
    "is_n_poisson",
    "is_poisson",
    "jacobi_bracket",
    "jacobi_pair_check",
    "jacobiator",
    "lie_derivative",
    "magnetic_form",
    "matrix_adjugate",
    "matrix_determinant",
    "mv_from_form",
    "nambu_top_bracket",
    "omega_power_bracket",
    "pair",
    "parse_expr",
    "parse_scenario",
    "parse_scenario_text",
    "parse_tensor",
    "parse_value",
    "poisson_bivector",
    "poisson_bracket",
    "regularity_check",
    "run_suite",
    "schouten",
    "schouten_volume_identity_check",
    "standard_form",
    "suite_names",
    "volume_poisson_criterion",
    "wedge",
    "wedge_all",
]
