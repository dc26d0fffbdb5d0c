#include "indicate/effects.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "indicate/errors.hpp"
#include "indicate/normal.hpp"

namespace indicate {

SurvivalStatus survival_outcome(const CohortUnit& unit, int T, int horizon) {
    if (T > unit.followup_end_day) {
        throw ValidationError("survival_outcome: indication after follow-up end for unit " + unit.unit_id);
    }
    if (unit.death_day) {
        if (*unit.death_day < T) {
            throw ValidationError("survival_outcome: unit dead before indication: " + unit.unit_id);
        }
        return (*unit.death_day - T <= horizon) ? SurvivalStatus::died : SurvivalStatus::survived;
    }
    if (unit.followup_end_day - T >= horizon) return SurvivalStatus::survived;
    return SurvivalStatus::indeterminate;
}

ControlPartition classify_controls(std::span<const std::int16_t> t_mis, int K) {
    ControlPartition out;
    out.true_control.resize(t_mis.size(), 0);
    for (std::size_t i = 0; i < t_mis.size(); ++i) {
        if (t_mis[i] >= 0 && t_mis[i] <= K) {
            out.true_control[i] = 1;
            ++out.n_true;
        }
    }
    return out;
}

namespace {

double quantile(std::vector<double> v, double p) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
    const double w = idx - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Restricted mean survival inside the horizon; nullopt when censored first.
std::optional<double> restricted_survival_days(const CohortUnit& unit, int T, int horizon) {
    if (unit.death_day) {
        return static_cast<double>(std::min(*unit.death_day - T, horizon));
    }
    if (unit.followup_end_day - T >= horizon) return static_cast<double>(horizon);
    return std::nullopt;
}

}  // namespace

EffectEstimate estimate_cate(const PosteriorDraws& draws, const Cohort& cohort, int lo, int hi, int horizon) {
    if (lo > hi) throw ValidationError("estimate_cate: empty interval");
    if (lo < 0) throw ValidationError("estimate_cate: negative interval bound");

    std::unordered_map<std::string, const CohortUnit*> by_id;
    for (const auto& u : cohort.units) by_id.emplace(u.unit_id, &u);

    // Treated side is fixed across draws.
    int treated_surv = 0, treated_died = 0;
    double treated_rmst_sum = 0.0;
    int treated_rmst_n = 0;
    int n1 = 0;
    for (const auto& u : cohort.units) {
        if (!u.treated || !u.indication_day) continue;
        const int T = *u.indication_day;
        if (T < lo || T > hi) continue;
        ++n1;
        switch (survival_outcome(u, T, horizon)) {
            case SurvivalStatus::survived: ++treated_surv; break;
            case SurvivalStatus::died: ++treated_died; break;
            case SurvivalStatus::indeterminate: break;
        }
        if (const auto days = restricted_survival_days(u, T, horizon)) {
            treated_rmst_sum += *days;
            ++treated_rmst_n;
        }
    }
    const bool treated_ok = treated_surv + treated_died > 0;
    const double rate_treated = treated_ok
                                    ? static_cast<double>(treated_surv) / (treated_surv + treated_died)
                                    : std::numeric_limits<double>::quiet_NaN();
    const double rmst_treated = treated_rmst_n > 0 ? treated_rmst_sum / treated_rmst_n
                                                   : std::numeric_limits<double>::quiet_NaN();

    std::vector<const CohortUnit*> untreated_units;
    untreated_units.reserve(draws.untreated_ids.size());
    for (const auto& id : draws.untreated_ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw ValidationError("draws reference unit not present in cohort: " + id);
        untreated_units.push_back(it->second);
    }

    std::vector<double> taus, control_rates, n0s, rmst_diffs, rmst_controls;
    int n_draws = 0, n_empty = 0;
    for (const auto& chain : draws.chains) {
        for (Eigen::Index d = 0; d < chain.n_draws(); ++d) {
            ++n_draws;
            int surv = 0, died = 0, n0 = 0;
            double rmst_sum = 0.0;
            int rmst_n = 0;
            for (std::size_t j = 0; j < untreated_units.size(); ++j) {
                const std::int16_t t = chain.t_mis(d, static_cast<Eigen::Index>(j));
                if (t < lo || t > hi) continue;
                ++n0;
                const CohortUnit& u = *untreated_units[j];
                switch (survival_outcome(u, t, horizon)) {
                    case SurvivalStatus::survived: ++surv; break;
                    case SurvivalStatus::died: ++died; break;
                    case SurvivalStatus::indeterminate: break;
                }
                if (const auto days = restricted_survival_days(u, t, horizon)) {
                    rmst_sum += *days;
                    ++rmst_n;
                }
            }
            n0s.push_back(static_cast<double>(n0));
            if (surv + died == 0 || !treated_ok) {
                ++n_empty;
                continue;
            }
            const double rate = static_cast<double>(surv) / (surv + died);
            control_rates.push_back(rate);
            taus.push_back(rate_treated - rate);
            if (rmst_n > 0 && treated_rmst_n > 0) {
                const double rmst_c = rmst_sum / rmst_n;
                rmst_controls.push_back(rmst_c);
                rmst_diffs.push_back(rmst_treated - rmst_c);
            }
        }
    }

    EffectEstimate est;
    est.window = hi;
    est.n1 = n1;
    est.n_draws = n_draws;
    est.n_empty_draws = n_empty;
    est.n0_median = quantile(n0s, 0.5);
    est.n0_lo = quantile(n0s, 0.025);
    est.n0_hi = quantile(n0s, 0.975);
    est.surv_treated = rate_treated;
    est.surv_control = mean_of(control_rates);
    est.tau_mean = mean_of(taus);
    est.tau_median = quantile(taus, 0.5);
    est.tau_lo = quantile(taus, 0.025);
    est.tau_hi = quantile(taus, 0.975);
    est.rmst_treated = rmst_treated;
    est.rmst_control = mean_of(rmst_controls);
    est.rmst_diff = mean_of(rmst_diffs);
    est.rmst_lo = quantile(rmst_diffs, 0.025);
    est.rmst_hi = quantile(rmst_diffs, 0.975);
    est.tau_draws = std::move(taus);
    return est;
}

EffectEstimate estimate_ate(const PosteriorDraws& draws, const Cohort& cohort, int K, int horizon) {
    return estimate_cate(draws, cohort, 1, K, horizon);
}

namespace {

struct LogisticFit {
    Eigen::VectorXd coef;  // intercept first
};

// Pooled person-day logistic regression by ridge-stabilized Newton steps.
LogisticFit fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index p = X.cols();
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(p);
    for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd eta = X * coef;
        Eigen::VectorXd mu(eta.size()), w(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            mu(i) = invlogit(eta(i));
            w(i) = std::max(mu(i) * (1.0 - mu(i)), 1e-10);
        }
        const Eigen::VectorXd grad = X.transpose() * (y - mu) - 1e-8 * coef;
        Eigen::MatrixXd hess = X.transpose() * w.asDiagonal() * X;
        hess.diagonal().array() += 1e-8;
        const Eigen::VectorXd step = hess.ldlt().solve(grad);
        coef += step;
        if (step.lpNorm<Eigen::Infinity>() < 1e-10) break;
    }
    return {coef};
}

}  // namespace

std::vector<RsmRow> risk_set_match(const Cohort& cohort, const std::vector<int>& windows, int horizon) {
    if (windows.empty()) return {};
    const Standardization standardization = compute_standardization(cohort.units);
    const int K_max = *std::max_element(windows.begin(), windows.end());

    // Daily design rows once, to the largest window.
    std::vector<Eigen::MatrixXd> designs;
    designs.reserve(cohort.units.size());
    for (const auto& u : cohort.units) {
        const DailyPanel panel = build_panel(u, K_max, standardization);
        designs.push_back(design_matrix(u, panel, standardization));
    }

    std::vector<RsmRow> rows;
    for (const int K : windows) {
        // At-risk days: before any treatment, alive, within follow-up.
        std::vector<int> risk_end(cohort.units.size());
        for (std::size_t i = 0; i < cohort.units.size(); ++i) {
            const CohortUnit& u = cohort.units[i];
            int end = std::min(K, u.followup_end_day);
            if (u.death_day) end = std::min(end, *u.death_day);
            if (u.treated && u.indication_day) end = std::min(end, *u.indication_day);
            risk_end[i] = end;
        }

        const Eigen::Index p = designs.front().cols();
        Eigen::Index n_rows = 0;
        for (std::size_t i = 0; i < cohort.units.size(); ++i) {
            n_rows += std::max(risk_end[i], 0);
        }
        Eigen::MatrixXd X(n_rows, p + 1);
        Eigen::VectorXd y(n_rows);
        Eigen::Index r = 0;
        for (std::size_t i = 0; i < cohort.units.size(); ++i) {
            const CohortUnit& u = cohort.units[i];
            for (int t = 1; t <= risk_end[i]; ++t) {
                X(r, 0) = 1.0;
                X.row(r).tail(p) = designs[i].row(t);
                y(r) = (u.treated && u.indication_day && *u.indication_day == t) ? 1.0 : 0.0;
                ++r;
            }
        }
        const LogisticFit fit = n_rows > 0 ? fit_logistic(X, y) : LogisticFit{Eigen::VectorXd::Zero(p + 1)};

        auto score = [&](std::size_t i, int t) {
            double eta = fit.coef(0) + designs[i].row(t).dot(fit.coef.tail(p));
            return invlogit(eta);
        };

        // Treated units inside the window, matched greedily by ascending T.
        std::vector<std::size_t> treated_idx;
        for (std::size_t i = 0; i < cohort.units.size(); ++i) {
            const CohortUnit& u = cohort.units[i];
            if (u.treated && u.indication_day && *u.indication_day >= 1 && *u.indication_day <= K) {
                treated_idx.push_back(i);
            }
        }
        std::sort(treated_idx.begin(), treated_idx.end(), [&](std::size_t a, std::size_t b) {
            const int ta = *cohort.units[a].indication_day;
            const int tb = *cohort.units[b].indication_day;
            if (ta != tb) return ta < tb;
            return cohort.units[a].unit_id < cohort.units[b].unit_id;
        });

        std::vector<std::uint8_t> used(cohort.units.size(), 0);
        int surv_t = 0, died_t = 0, surv_c = 0, died_c = 0, n_matched = 0;
        for (const std::size_t i : treated_idx) {
            const CohortUnit& u = cohort.units[i];
            const int t = *u.indication_day;
            const double target = score(i, t);
            std::ptrdiff_t best = -1;
            double best_diff = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < cohort.units.size(); ++j) {
                if (j == i || used[j]) continue;
                const CohortUnit& v = cohort.units[j];
                const bool not_yet_treated = !v.treated || (v.indication_day && *v.indication_day > t);
                if (!not_yet_treated) continue;
                if (v.death_day && *v.death_day < t) continue;
                if (v.followup_end_day < t) continue;
                const double diff = std::abs(score(j, t) - target);
                if (diff < best_diff ||
                    (diff == best_diff && best >= 0 &&
                     v.unit_id < cohort.units[static_cast<std::size_t>(best)].unit_id)) {
                    best_diff = diff;
                    best = static_cast<std::ptrdiff_t>(j);
                }
            }
            if (best < 0) continue;  // unmatched: reported via n_matched < n_treated
            used[static_cast<std::size_t>(best)] = 1;
            ++n_matched;
            switch (survival_outcome(u, t, horizon)) {
                case SurvivalStatus::survived: ++surv_t; break;
                case SurvivalStatus::died: ++died_t; break;
                case SurvivalStatus::indeterminate: break;
            }
            switch (survival_outcome(cohort.units[static_cast<std::size_t>(best)], t, horizon)) {
                case SurvivalStatus::survived: ++surv_c; break;
                case SurvivalStatus::died: ++died_c; break;
                case SurvivalStatus::indeterminate: break;
            }
        }

        RsmRow row;
        row.window = K;
        row.n_treated = static_cast<int>(treated_idx.size());
        row.n_matched = n_matched;
        row.surv_treated = surv_t + died_t > 0 ? static_cast<double>(surv_t) / (surv_t + died_t)
                                               : std::numeric_limits<double>::quiet_NaN();
        row.surv_control = surv_c + died_c > 0 ? static_cast<double>(surv_c) / (surv_c + died_c)
                                               : std::numeric_limits<double>::quiet_NaN();
        row.diff = row.surv_treated - row.surv_control;
        rows.push_back(row);
    }
    return rows;
}

std::string format_percent(double fraction) {
    double pct = fraction * 100.0;
    if (std::abs(pct) < 0.05) pct = 0.0;  // avoid "-0.0%"
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", pct);
    return buf;
}

}  // namespace indicate
