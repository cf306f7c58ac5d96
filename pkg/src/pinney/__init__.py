"""Solver toolkit for the Pinney equation y'' + a(x) y + c/y^3 = 0.

The general solution is assembled from a fundamental pair of the linear
part via y = +/- sqrt(u^2 - c v^2); constant coefficients additionally get
a fully analytic path through the substitution z = y^2, and everything is
cross-checkable against direct adaptive integration of the nonlinear
equation itself.
"""

from .coeffs import (
    CoefficientSpec,
    eval_coefficient,
    parse_coefficient,
    pretty,
)
from .constcoeff import (
    ClosedFormPair,
    ZClosedForm,
    closed_form_pair,
    energy_constant,
    pair_z_consistency,
    y_from_z,
    z_closed_form,
)
from .errors import (
    CoefficientEvalFailedError,
    EvalDomainError,
    ExpressionSyntaxError,
    MethodUnavailableError,
    NonFiniteError,
    NotApplicableError,
    OutOfRangeError,
    PinneyError,
    SingularOrInvalidError,
    StepSizeCollapseError,
    UnknownIdentifierError,
    ZeroCError,
    ZeroInitialValueError,
)
from .linode import (
    DensePairSolution,
    FundamentalPairState,
    eval_pair,
    init_pair,
    integrate_pair,
    integrate_pair_span,
    wronskian,
)
from .oracle import (
    CrossValidation,
    DirectTrajectory,
    cross_validate,
    energy_series,
    integrate_direct,
)
from .problem import (
    DEFAULT_CONFIG,
    METHODS,
    PinneyProblem,
    SolutionSample,
    SolverConfig,
    equilibrium_solution,
    validate_problem,
)
from .singular import SingularityReport, SingularPoint, find_singularities
from .superposition import (
    Discriminant,
    SolveResult,
    compose_solution,
    discriminant,
    residual,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientSpec", "eval_coefficient", "parse_coefficient", "pretty",
    "ClosedFormPair", "ZClosedForm", "closed_form_pair", "energy_constant",
    "pair_z_consistency", "y_from_z", "z_closed_form",
    "PinneyError", "ZeroCError", "ZeroInitialValueError", "NonFiniteError",
    "ExpressionSyntaxError", "UnknownIdentifierError", "EvalDomainError",
    "CoefficientEvalFailedError", "StepSizeCollapseError", "OutOfRangeError",
    "SingularOrInvalidError", "MethodUnavailableError", "NotApplicableError",
    "DensePairSolution", "FundamentalPairState", "eval_pair", "init_pair",
    "integrate_pair", "integrate_pair_span", "wronskian",
    "CrossValidation", "DirectTrajectory", "cross_validate", "energy_series",
    "integrate_direct",
    "DEFAULT_CONFIG", "METHODS", "PinneyProblem", "SolutionSample",
    "SolverConfig", "equilibrium_solution", "validate_problem",
    "SingularityReport", "SingularPoint", "find_singularities",
    "Discriminant", "SolveResult", "compose_solution", "discriminant",
    "residual", "solve",
    "__version__",
]
