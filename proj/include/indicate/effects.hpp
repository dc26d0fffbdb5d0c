#pragma once

// Posterior draws -> causal estimates. Within each draw the untreated units
// are split by their imputed indication time into true controls (T <= K)
// and ineligible controls; survival outcomes are measured from indication;
// the draw-level effect is the difference in survival rates. Also houses
// the risk-set-matching reference estimator.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indicate/cohort.hpp"
#include "indicate/sampler.hpp"

namespace indicate {

enum class SurvivalStatus { died, survived, indeterminate };

// Survival through `horizon` days after indication day T. Death inside the
// horizon decides 0; an observed death beyond it, or follow-up covering
// T + horizon, decides 1; otherwise the outcome is administratively
// censored and indeterminate.
SurvivalStatus survival_outcome(const CohortUnit& unit, int T, int horizon = 365);

struct ControlPartition {
    std::vector<std::uint8_t> true_control;  // aligned with the t_mis row
    int n_true = 0;
};

// Partition of untreated units for one draw: imputed T <= K means true
// control, censored or T > K means ineligible. t_mis encodes censored as -1.
ControlPartition classify_controls(std::span<const std::int16_t> t_mis, int K);

struct EffectEstimate {
    int window = 0;
    int n1 = 0;
    double n0_median = 0.0, n0_lo = 0.0, n0_hi = 0.0;
    double surv_treated = 0.0;
    double surv_control = 0.0;       // posterior mean
    double tau_mean = 0.0, tau_median = 0.0;
    double tau_lo = 0.0, tau_hi = 0.0;
    int n_draws = 0;
    int n_empty_draws = 0;           // draws with no usable control group
    // Restricted-mean-survival extension on the same horizon.
    double rmst_treated = 0.0, rmst_control = 0.0;
    double rmst_diff = 0.0, rmst_lo = 0.0, rmst_hi = 0.0;
    std::vector<double> tau_draws;   // per usable draw, in chain-major order
};

EffectEstimate estimate_ate(const PosteriorDraws& draws, const Cohort& cohort, int K, int horizon = 365);

// As estimate_ate, but both groups restricted to indication times in
// [lo, hi]; [1, K] reproduces estimate_ate.
EffectEstimate estimate_cate(const PosteriorDraws& draws, const Cohort& cohort, int lo, int hi,
                             int horizon = 365);

struct RsmRow {
    int window = 0;
    int n_treated = 0;   // treated units with T <= window
    int n_matched = 0;
    double surv_treated = 0.0;
    double surv_control = 0.0;
    double diff = 0.0;
};

// Risk-set matching reference: each treated unit at its indication time t is
// matched (without replacement, ascending t) to the not-yet-treated unit
// alive and in follow-up at t with the nearest fitted probability of
// treatment-at-t; the propensity model is one pooled person-day logistic
// regression per window on baseline + current LOCF covariates.
std::vector<RsmRow> risk_set_match(const Cohort& cohort, const std::vector<int>& windows, int horizon = 365);

// Percent formatter used by the report tables: one decimal, e.g. "-12.0%".
std::string format_percent(double fraction);

}  // namespace indicate
