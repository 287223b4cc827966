"""Shooting solver and certification toolkit for the similarity boundary value
problem f''' + f f'' + g(f') = 0, f(0)=a, f''(0)=c<0, f'(inf)=0."""

from fluxbvp._core import (
    BStarResult,
    CheckResult,
    Classification,
    GKind,
    GSpec,
    ProblemSpec,
    ShootState,
    SolverControls,
    SolverError,
    TailFit,
    Termination,
    TerminationKind,
    Trajectory,
    VProfile,
    beta_ode_residual,
    bracket,
    check_subquadratic,
    classify,
    classify_slope,
    critical_trajectory,
    find_bstar,
    fit_exponential_tail,
    fit_power_tail,
    g_eval,
    identity_residuals,
    integrate,
    lemma_bound_checks,
    m_form_residual,
    map_m_to_beta,
    sample,
    v_ode_residual,
    v_transform,
    __version__,
)

__all__ = [
    "BStarResult",
    "CheckResult",
    "Classification",
    "GKind",
    "GSpec",
    "ProblemSpec",
    "ShootState",
    "SolverControls",
    "SolverError",
    "TailFit",
    "Termination",
    "TerminationKind",
    "Trajectory",
    "VProfile",
    "beta_ode_residual",
    "bracket",
    "check_subquadratic",
    "classify",
    "classify_slope",
    "critical_trajectory",
    "find_bstar",
    "fit_exponential_tail",
    "fit_power_tail",
    "g_eval",
    "identity_residuals",
    "integrate",
    "lemma_bound_checks",
    "m_form_residual",
    "map_m_to_beta",
    "sample",
    "v_ode_residual",
    "v_transform",
    "__version__",
]
