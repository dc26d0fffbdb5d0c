"""Causal inference for treatment-by-indication cohorts.

A latent AR(1) probit first-hitting-time model imputes the missing
indication times of untreated subjects; treatment effects on survival are
then estimated per posterior draw. The heavy lifting lives in the C++
extension `indicate._core`; this package re-exports its surface.
"""

from indicate._core import (
    BalanceRow,
    BaselineSet,
    ChainDraws,
    Cohort,
    CohortUnit,
    CurvePoint,
    DailyPanel,
    DiagnosticError,
    DicResult,
    EffectEstimate,
    FitData,
    GenParams,
    HittingPmf,
    MatchPair,
    MatchResult,
    McmcConfig,
    ModelParams,
    NumericError,
    PosteriorDraws,
    PriorSpec,
    RsmRow,
    SmoothingSpline,
    Standardization,
    SurvivalStatus,
    TruthRecord,
    UnitTruth,
    ValidationError,
    Visit,
    assignment_prob,
    balance_table,
    build_panel,
    compute_standardization,
    demo_dataset,
    design_matrix,
    dic,
    eligibility_flag,
    estimate_ate,
    estimate_cate,
    generate_cohort,
    gelman_rubin,
    geweke_z,
    hitting_pmf_given_path,
    hitting_time,
    indication_prob,
    load_cohort,
    mahalanobis,
    nn_match,
    prepare_fit_data,
    risk_set_match,
    run_chains,
    smooth_curve,
    survival_outcome,
    true_ate,
    unit_loglik,
    validate_unit,
    write_cohort,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
