#pragma once

// Synthetic cohorts drawn from the exact generative model, with the full
// ground truth (latent paths, indication times, assignments, potential
// outcomes) recorded for recovery and oracle tests.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indicate/cohort.hpp"
#include "indicate/model.hpp"

namespace indicate {

struct GenParams {
    int n_baseline = 3;
    int n_visit = 3;
    ModelParams model;  // rho, beta over [baseline | visit] blocks, delta0, delta1

    // Added to the probit argument when generating hits; not part of the
    // fitted model, used by tests that need a constant covariate effect.
    double probit_offset = 0.0;

    // Post-indication survival: geometric daily death hazard
    // invlogit(a0 + a1 * Z + a2 * theta_T).
    double outcome_base_logit = -9.5;
    double outcome_treat_logit = 3.0;
    double outcome_health_logit = 0.05;

    // Daily death hazard for units never indicated inside the window,
    // matched to the control hazard so that never-indicated units are not
    // distinguishable through mortality alone.
    double background_death_hazard = 7.485e-5;

    double calendar_span = 100.0;  // D ~ Uniform(0, span)

    // Time-varying covariates: per-column AR(1) across visits plus a
    // unit-level shift.
    double visit_ar_coef = 0.9;
    double visit_noise_sd = 0.6;
    double unit_shift_sd = 0.8;
    int mean_visit_gap = 14;

    int followup_extra = 365;          // followup_end = K + extra
    double short_followup_frac = 0.0;  // fraction with follow-up ending inside K + extra

    static GenParams defaults();
    void validate() const;
};

struct UnitTruth {
    std::string unit_id;
    Eigen::VectorXd theta;             // days 0..K
    std::vector<std::uint8_t> psi;     // days 1..min(T, K)
    std::optional<int> T;              // nullopt: censored beyond K
    std::optional<bool> Z;             // defined only when T present
    std::optional<int> y0, y1;         // survival days after indication
};

struct TruthRecord {
    GenParams params;
    int K = 0;
    std::vector<UnitTruth> units;
};

std::pair<Cohort, TruthRecord> generate_cohort(int n_units, int K, const GenParams& params,
                                               std::uint64_t seed);

// Average effect of treatment on surviving `horizon` days past indication,
// over units whose true indication time falls within `window`.
double true_ate(const TruthRecord& truth, int window, int horizon = 365);

// Fixed seeded showcase cohort (1,000 units, K = 365).
std::pair<Cohort, TruthRecord> demo_dataset();

void write_truth(const TruthRecord& truth, const std::string& path);
void write_truth_ate(const TruthRecord& truth, const std::vector<int>& windows, int horizon,
                     const std::string& path);

}  // namespace indicate
