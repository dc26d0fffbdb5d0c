#include "indicate/synth.hpp"

#include <cmath>

#include "indicate/csv.hpp"
#include "indicate/errors.hpp"
#include "indicate/normal.hpp"
#include "indicate/rng.hpp"

namespace indicate {

GenParams GenParams::defaults() {
    GenParams p;
    p.model.rho = 0.3;
    p.model.beta = Eigen::VectorXd::Zero(6);
    // Three nonzero effects, large enough that hitting speed varies widely
    // across units and a block of the cohort stays censored.
    p.model.beta << 2.2, 0.0, 0.0, -1.8, 1.4, 0.0;
    p.model.delta0 = 1.0;
    p.model.delta1 = -0.02;
    return p;
}

void GenParams::validate() const {
    model.validate();
    if (n_baseline < 0 || n_visit < 0) throw ValidationError("covariate counts must be non-negative");
    if (model.beta.size() != n_baseline + n_visit) {
        throw ValidationError("beta length must equal n_baseline + n_visit");
    }
    if (!(calendar_span > 0.0)) throw ValidationError("calendar_span must be positive");
    if (mean_visit_gap < 1) throw ValidationError("mean_visit_gap must be >= 1");
    if (!(background_death_hazard >= 0.0 && background_death_hazard < 1.0)) {
        throw ValidationError("background_death_hazard must lie in [0, 1)");
    }
    if (!(std::abs(visit_ar_coef) < 1.0)) throw ValidationError("visit_ar_coef must lie in (-1, 1)");
    if (!(visit_noise_sd >= 0.0) || !(unit_shift_sd >= 0.0)) {
        throw ValidationError("visit process scales must be non-negative");
    }
    if (followup_extra < 0) throw ValidationError("followup_extra must be non-negative");
    if (!(short_followup_frac >= 0.0 && short_followup_frac <= 1.0)) {
        throw ValidationError("short_followup_frac must lie in [0, 1]");
    }
    if (!std::isfinite(outcome_base_logit) || !std::isfinite(outcome_treat_logit) ||
        !std::isfinite(outcome_health_logit)) {
        throw ValidationError("outcome model parameters must be finite");
    }
}

namespace {

int geometric_days(double hazard, Rng& rng) {
    // Number of whole days survived before a death with daily hazard h.
    if (hazard >= 1.0) return 0;
    const double u = rng.uniform();
    const double days = std::floor(std::log(u) / std::log1p(-hazard));
    return static_cast<int>(std::min(days, 1e9));
}

}  // namespace

std::pair<Cohort, TruthRecord> generate_cohort(int n_units, int K, const GenParams& params,
                                               std::uint64_t seed) {
    if (n_units < 1) throw ValidationError("generate_cohort: n_units must be >= 1");
    if (K < 1) throw ValidationError("generate_cohort: K must be >= 1");
    params.validate();

    Rng rng(seed);
    Cohort cohort;
    for (int j = 1; j <= params.n_baseline; ++j) cohort.baseline_names.push_back("x0_" + std::to_string(j));
    for (int j = 1; j <= params.n_visit; ++j) cohort.visit_names.push_back("v_" + std::to_string(j));

    int width = 1;
    for (int v = n_units; v >= 10; v /= 10) ++width;

    // Pass 1: covariate streams for every unit.
    for (int i = 0; i < n_units; ++i) {
        CohortUnit unit;
        std::string id = std::to_string(i + 1);
        unit.unit_id = "u" + std::string(width - id.size(), '0') + id;
        unit.exogenous.resize(1);
        unit.exogenous(0) = rng.uniform(0.0, params.calendar_span);
        unit.followup_end_day = K + params.followup_extra;
        if (params.short_followup_frac > 0.0 && rng.uniform() < params.short_followup_frac) {
            unit.followup_end_day = K + rng.uniform_int(0, params.followup_extra);
        }
        unit.baseline.resize(params.n_baseline);
        for (int j = 0; j < params.n_baseline; ++j) unit.baseline(j) = rng.normal();

        Eigen::VectorXd shift(params.n_visit), ar(params.n_visit);
        const double phi = params.visit_ar_coef;
        const double stat_sd = params.visit_noise_sd / std::sqrt(std::max(1.0 - phi * phi, 1e-12));
        for (int j = 0; j < params.n_visit; ++j) {
            shift(j) = rng.normal(0.0, params.unit_shift_sd);
            ar(j) = rng.normal(0.0, stat_sd);
        }
        int day = 0;
        while (day <= unit.followup_end_day) {
            Visit visit;
            visit.day = day;
            visit.values.resize(params.n_visit);
            for (int j = 0; j < params.n_visit; ++j) visit.values(j) = shift(j) + ar(j);
            unit.visits.push_back(std::move(visit));
            day += 1 + rng.uniform_int(0, std::max(2 * params.mean_visit_gap - 2, 0));
            for (int j = 0; j < params.n_visit; ++j) {
                ar(j) = phi * ar(j) + rng.normal(0.0, params.visit_noise_sd);
            }
        }
        cohort.units.push_back(std::move(unit));
    }

    // Pass 2: hits, assignment, and outcomes on the standardized daily grid,
    // exactly the design the fitted model sees.
    const Standardization standardization = compute_standardization(cohort.units);
    TruthRecord truth;
    truth.params = params;
    truth.K = K;

    for (auto& unit : cohort.units) {
        const DailyPanel panel = build_panel(unit, K, standardization);
        const Eigen::MatrixXd design = design_matrix(unit, panel, standardization);
        Eigen::VectorXd xb = Eigen::VectorXd::Zero(K + 1);
        if (params.model.beta.size() > 0) xb = design * params.model.beta;

        UnitTruth ut;
        ut.unit_id = unit.unit_id;
        ut.theta.resize(K + 1);
        ut.theta(0) = rng.normal();
        for (int t = 1; t <= K; ++t) ut.theta(t) = params.model.rho * ut.theta(t - 1) + rng.normal();

        for (int t = 1; t <= K && !ut.T; ++t) {
            const double q = norm_cdf(std::clamp(ut.theta(t) + xb(t) + params.probit_offset,
                                                 -kProbitClamp, kProbitClamp));
            const bool hit = rng.bernoulli(q);
            ut.psi.push_back(hit ? 1 : 0);
            if (hit) ut.T = t;
        }

        if (ut.T) {
            const int T = *ut.T;
            ut.Z = rng.bernoulli(invlogit(params.model.delta0 + params.model.delta1 * unit.calendar_entry()));
            const double base = params.outcome_base_logit + params.outcome_health_logit * ut.theta(T);
            ut.y0 = geometric_days(invlogit(base), rng);
            ut.y1 = geometric_days(invlogit(base + params.outcome_treat_logit), rng);

            unit.treated = *ut.Z;
            if (unit.treated) unit.indication_day = T;
            const long death = static_cast<long>(T) + (*ut.Z ? *ut.y1 : *ut.y0);
            if (death <= unit.followup_end_day) unit.death_day = static_cast<int>(death);
        } else if (params.background_death_hazard > 0.0) {
            const long death = 1L + geometric_days(params.background_death_hazard, rng);
            if (death <= unit.followup_end_day) unit.death_day = static_cast<int>(death);
        }
        truth.units.push_back(std::move(ut));
    }

    for (const auto& unit : cohort.units) validate_unit(unit);
    return {std::move(cohort), std::move(truth)};
}

double true_ate(const TruthRecord& truth, int window, int horizon) {
    double sum = 0.0;
    int n = 0;
    for (const auto& ut : truth.units) {
        if (!ut.T || *ut.T > window) continue;
        sum += (*ut.y1 > horizon ? 1.0 : 0.0) - (*ut.y0 > horizon ? 1.0 : 0.0);
        ++n;
    }
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    return sum / static_cast<double>(n);
}

std::pair<Cohort, TruthRecord> demo_dataset() {
    GenParams params;
    params.n_baseline = 4;
    params.n_visit = 3;
    params.model.rho = 0.25;
    params.model.beta = Eigen::VectorXd::Zero(7);
    // Strong, persistent heterogeneity in hit speed so indication times
    // spread across the year and a block of units stays censored.
    params.model.beta << 1.2, -0.8, 0.5, 0.0, 2.5, -1.0, 0.4;
    params.model.delta0 = 1.1;
    params.model.delta1 = -0.02;
    params.visit_ar_coef = 0.995;
    params.visit_noise_sd = 0.12;
    params.unit_shift_sd = 1.0;
    params.mean_visit_gap = 21;
    params.outcome_base_logit = -7.2;
    params.outcome_treat_logit = 0.8;
    params.outcome_health_logit = 0.15;
    params.background_death_hazard = 2e-4;
    params.short_followup_frac = 0.15;
    return generate_cohort(1000, 365, params, 20180601ULL);
}

void write_truth(const TruthRecord& truth, const std::string& path) {
    csv::Writer out(path);
    out.write_row({"unit_id", "true_T", "true_Z", "y0", "y1"});
    for (const auto& ut : truth.units) {
        out.write_row({ut.unit_id, csv::format_optional_int(ut.T),
                       ut.Z ? csv::format_int(*ut.Z ? 1 : 0) : std::string(),
                       csv::format_optional_int(ut.y0), csv::format_optional_int(ut.y1)});
    }
    out.close();
}

void write_truth_ate(const TruthRecord& truth, const std::vector<int>& windows, int horizon,
                     const std::string& path) {
    csv::Writer out(path);
    out.write_row({"window", "true_tau", "n_indicated"});
    for (const int w : windows) {
        int n = 0;
        for (const auto& ut : truth.units) {
            if (ut.T && *ut.T <= w) ++n;
        }
        out.write_row({csv::format_int(w), csv::format_double(true_ate(truth, w, horizon)),
                       csv::format_int(n)});
    }
    out.close();
}

}  // namespace indicate
