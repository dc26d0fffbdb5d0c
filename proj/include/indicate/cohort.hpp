#pragma once

// Longitudinal cohort data: one record per subject with baseline covariates,
// an intermittent visit stream, event/censoring days, and (for treated
// subjects only) the observed indication day. Units are aligned to a daily
// grid by last-observation-carried-forward before model fitting.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace indicate {

struct Visit {
    int day = 0;
    Eigen::VectorXd values;
};

struct CohortUnit {
    std::string unit_id;
    bool treated = false;
    std::optional<int> indication_day;  // present iff treated
    std::optional<int> death_day;
    int followup_end_day = 0;
    Eigen::VectorXd baseline;
    Eigen::VectorXd exogenous;  // first entry is calendar time at entry
    std::vector<Visit> visits;

    double calendar_entry() const { return exogenous.size() > 0 ? exogenous(0) : 0.0; }

    // Last day on which an indication could have occurred for this unit
    // within a window of K days: alive and under follow-up.
    int last_candidate_day(int K) const {
        int last = std::min(K, followup_end_day);
        if (death_day) last = std::min(last, *death_day);
        return last;
    }
};

struct Cohort {
    std::vector<CohortUnit> units;
    std::vector<std::string> baseline_names;  // x0_*
    std::vector<std::string> visit_names;     // v_*
};

// Daily covariate grid for one unit: rows 0..K of standardized time-varying
// covariates, filled by carrying the most recent visit forward.
struct DailyPanel {
    std::string unit_id;
    Eigen::MatrixXd rows;  // (K+1) x p1
};

// Pooled per-column location/scale for the time-varying and baseline blocks.
struct Standardization {
    Eigen::VectorXd baseline_mean, baseline_sd;
    Eigen::VectorXd visit_mean, visit_sd;
};

void validate_unit(const CohortUnit& unit);

Cohort load_cohort(const std::string& units_file, const std::string& visits_file);
void write_cohort(const Cohort& cohort, const std::string& units_file, const std::string& visits_file);

// Pooled means and standard deviations across the given units (baselines
// over units, visit covariates over all visit records). Columns with zero
// spread keep scale 1 so they only get centered.
Standardization compute_standardization(std::span<const CohortUnit> units);

DailyPanel build_panel(const CohortUnit& unit, int K, const Standardization& std);

Eigen::VectorXd standardize_baseline(const CohortUnit& unit, const Standardization& std);

// Full probit design for one unit: row t = [standardized baseline block,
// standardized LOCF visit block at day t], t = 0..K.
Eigen::MatrixXd design_matrix(const CohortUnit& unit, const DailyPanel& panel, const Standardization& std);

// Eligibility for inclusion as a control within a K-day study window:
// true iff the indication time T is uncensored and T <= K.
bool eligibility_flag(const std::optional<int>& T, int K);

// Restricts a loaded cohort to named covariate subsets (empty list = keep all).
Cohort select_covariates(const Cohort& cohort, const std::vector<std::string>& baseline_cols,
                         const std::vector<std::string>& visit_cols);

}  // namespace indicate
