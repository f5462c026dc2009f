"""Classic and numerical generalized least-squares estimators of an unknown
constant mean of a random field observed on a one-dimensional lattice."""

from .asymptotics import AsymptoticReport, decay_study, mu_limit
from .corr import (
    BETA,
    CorrelationModel,
    MissingLagError,
    build_matrix,
    build_vector,
    eval_rho,
    negative_power,
    tabulated,
    white_noise,
)
from .estimators import (
    ClassicSolution,
    NumericalEstimate,
    classic,
    classic_limit_consistency,
    find_root,
    scan_residual,
    sweep,
)
from .kriging import (
    DegenerateSchurError,
    KrigingSolution,
    KrigingSystem,
    SignRuleError,
    VarianceReport,
    constraint_residual,
    solve_system,
    variances,
)
from .series import Series, demo_series, ingest
from .symsolve import Factorization, SingularMatrixError, factor, quad_form, solve

__version__ = "0.1.0"
