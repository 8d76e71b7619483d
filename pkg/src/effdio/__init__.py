"""Explicit height bounds and bounded solvers for S-unit, Mordell and cubic Thue equations."""

from .arith import PrimeSet, Rational, factorize, is_prime, valuation, weil_height
from .analytic import modular_discriminant, period_tau, relative_faltings_height, stable_faltings_height
from .elliptic import WeierstrassModel, conductor, invariants, minimal_model, tate_local, transform
from .errors import (
    DegenerateLambda,
    DomainError,
    EffdioError,
    FactorizationExhausted,
    NonIntegralModel,
    NotASolution,
    NotMinimalAtP,
    PrecisionLoss,
    SearchBudgetExceeded,
    SingularCurve,
    SingularForm,
    ZeroA,
)
from .parshin import CubicForm, MordellSolution, SUnitSolution, frey_curve, hessian_covariants, mordell_curve, thue_to_mordell
from .solvers import SolutionCertificate, solve_mordell, solve_sunit, solve_thue

__version__ = "0.1.0"
