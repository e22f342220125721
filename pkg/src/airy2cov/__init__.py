"""Airy2 process two-point asymptotics and a Fredholm-determinant oracle."""

from ._backend import BACKEND
from .airy import airy_ai, airy_ai_prime, airy_derivative
from .asymptotics import (
    CovCoefficients,
    TwoPointApprox,
    c_n,
    cov_asymptotic,
    cov_coefficients,
    integrate_cn,
    joint_asymptotic,
)
from .errors import (
    AccuracyWarning,
    InvalidArgument,
    NoConvergence,
    OutOfDomain,
    SingularMatrix,
    UnknownIdentity,
)
from .fredholm import (
    FredholmConfig,
    airy_kernel,
    covariance_exact,
    extended_entry,
    joint_distribution,
    resolvent_u,
)
from .numerics import GridFunction, QuadratureRule, determinant, gauss_legendre, interp_eval, solve_linear
from .painleve2 import HMSolution, q_eval, qp_eval, solve_hastings_mcleod
from .tw_core import (
    MomentSet,
    TWProfile,
    UTable,
    build_F2,
    build_profile,
    build_u_table,
    default_profile,
    f2_derivative_chain,
    moments,
    verify_identity,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AccuracyWarning",
    "CovCoefficients",
    "FredholmConfig",
    "GridFunction",
    "HMSolution",
    "InvalidArgument",
    "MomentSet",
    "NoConvergence",
    "OutOfDomain",
    "QuadratureRule",
    "SingularMatrix",
    "TWProfile",
    "TwoPointApprox",
    "UTable",
    "UnknownIdentity",
    "airy_ai",
    "airy_ai_prime",
    "airy_derivative",
    "airy_kernel",
    "build_F2",
    "build_profile",
    "build_u_table",
    "c_n",
    "cov_asymptotic",
    "cov_coefficients",
    "covariance_exact",
    "default_profile",
    "determinant",
    "extended_entry",
    "f2_derivative_chain",
    "gauss_legendre",
    "integrate_cn",
    "interp_eval",
    "joint_asymptotic",
    "joint_distribution",
    "moments",
    "q_eval",
    "qp_eval",
    "resolvent_u",
    "solve_hastings_mcleod",
    "solve_linear",
    "verify_identity",
]
