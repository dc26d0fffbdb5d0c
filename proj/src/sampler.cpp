#include "indicate/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "indicate/errors.hpp"
#include "indicate/normal.hpp"

namespace indicate {

void McmcConfig::validate() const {
    if (n_chains < 1) throw ValidationError("n_chains must be >= 1");
    if (burn_in < 0 || burn_in >= n_iters) throw ValidationError("burn_in must satisfy 0 <= burn_in < n_iters");
    if (thin < 1) throw ValidationError("thin must be >= 1");
    if ((n_iters - burn_in) % thin != 0) {
        throw ValidationError("thin must divide n_iters - burn_in");
    }
    if (study_window < 1) throw ValidationError("study window K must be >= 1");
    if (!(delta0_step > 0.0) || !(delta1_step > 0.0)) throw ValidationError("metropolis steps must be positive");
    if (threads < 1) throw ValidationError("threads must be >= 1");
}

std::size_t PosteriorDraws::total_draws() const {
    std::size_t n = 0;
    for (const auto& c : chains) n += static_cast<std::size_t>(c.n_draws());
    return n;
}

ModelParams PosteriorDraws::mean_params() const {
    Eigen::Index cols = 0;
    for (const auto& c : chains) cols = std::max(cols, c.params.cols());
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(cols);
    double n = 0.0;
    for (const auto& c : chains) {
        sum += c.params.colwise().sum().transpose();
        n += static_cast<double>(c.n_draws());
    }
    if (n == 0.0) throw ValidationError("no stored draws");
    sum /= n;
    ModelParams params;
    params.rho = sum(0);
    params.delta0 = sum(1);
    params.delta1 = sum(2);
    params.beta = sum.tail(cols - 3);
    return params;
}

FitData prepare_fit_data(std::span<const CohortUnit> pool, const Standardization& standardization, int K,
                         const std::vector<std::string>& baseline_names,
                         const std::vector<std::string>& visit_names) {
    if (pool.empty()) throw ValidationError("empty unit pool");
    if (K < 1) throw ValidationError("study window K must be >= 1");

    std::vector<const CohortUnit*> ordered;
    ordered.reserve(pool.size());
    for (const auto& u : pool) ordered.push_back(&u);
    std::sort(ordered.begin(), ordered.end(),
              [](const CohortUnit* a, const CohortUnit* b) { return a->unit_id < b->unit_id; });

    FitData fit;
    fit.K = K;
    for (const CohortUnit* u : ordered) {
        if (u->treated && *u->indication_day < 1) {
            throw ValidationError("indication at day 0 has zero probability under the daily model (unit " +
                                  u->unit_id + ")");
        }
        FitUnit fu;
        fu.unit_id = u->unit_id;
        fu.treated = u->treated;
        if (u->treated && *u->indication_day <= K) fu.hit_day = *u->indication_day;
        fu.D = u->calendar_entry();
        fu.last_candidate = u->last_candidate_day(K);
        fu.path_len = fu.hit_day ? *fu.hit_day : K;
        const DailyPanel panel = build_panel(*u, K, standardization);
        fu.design = design_matrix(*u, panel, standardization);
        if (!fit.units.empty() && fu.design.cols() != fit.p) {
            throw ValidationError("inconsistent covariate dimensions across pool units");
        }
        fit.p = fu.design.cols();

        const Eigen::Index tri = fit.p * (fit.p + 1) / 2;
        fu.xtx_prefix = Eigen::MatrixXd::Zero(fu.path_len + 1, tri);
        for (int t = 1; t <= fu.path_len; ++t) {
            fu.xtx_prefix.row(t) = fu.xtx_prefix.row(t - 1);
            Eigen::Index slot = 0;
            for (Eigen::Index r = 0; r < fit.p; ++r) {
                for (Eigen::Index c = 0; c <= r; ++c) {
                    fu.xtx_prefix(t, slot++) += fu.design(t, r) * fu.design(t, c);
                }
            }
        }
        if (!u->treated) {
            fit.untreated.push_back(fit.units.size());
            fit.untreated_ids.push_back(u->unit_id);
        }
        fit.units.push_back(std::move(fu));
    }

    const Eigen::Index p0 = ordered.front()->baseline.size();
    for (Eigen::Index j = 0; j < fit.p; ++j) {
        std::string name;
        if (j < p0) {
            name = j < static_cast<Eigen::Index>(baseline_names.size()) ? baseline_names[j]
                                                                        : "x0_" + std::to_string(j + 1);
        } else {
            const Eigen::Index k = j - p0;
            name = k < static_cast<Eigen::Index>(visit_names.size()) ? visit_names[k]
                                                                     : "v_" + std::to_string(k + 1);
        }
        fit.beta_names.push_back("beta_" + name);
    }
    return fit;
}

namespace {

Eigen::VectorXd project_design(const Eigen::MatrixXd& design, const Eigen::VectorXd& beta) {
    if (beta.size() == 0) return Eigen::VectorXd::Zero(design.rows());
    return design * beta;
}

Eigen::VectorXd utilities_from_xb(const Eigen::VectorXd& theta, const Eigen::VectorXd& xb,
                                  std::optional<int> T, int K, Rng& rng) {
    const int len = T ? std::min(*T, K) : K;
    Eigen::VectorXd W(len);
    for (int t = 1; t <= len; ++t) {
        const double mean = theta(t) + xb(t);
        if (T && t == *T) {
            W(t - 1) = std::max(rng.trunc_normal_above(mean, 1.0, 0.0), 0.0);
        } else {
            W(t - 1) = std::min(rng.trunc_normal_below(mean, 1.0, 0.0), -1e-300);
        }
    }
    return W;
}

Eigen::VectorXd ffbs_from_xb(const Eigen::VectorXd& W, const Eigen::VectorXd& xb, double rho,
                             int path_len, Rng& rng) {
    const int n_obs = static_cast<int>(W.size());
    if (n_obs > path_len) throw ValidationError("ffbs_theta: more observations than path days");

    thread_local Eigen::VectorXd m, P;
    if (m.size() < path_len + 1) {
        m.resize(path_len + 1);
        P.resize(path_len + 1);
    }
    m(0) = 0.0;
    P(0) = 1.0;  // theta_0 ~ N(0, 1)
    for (int t = 1; t <= path_len; ++t) {
        const double a = rho * m(t - 1);
        const double R = rho * rho * P(t - 1) + 1.0;
        if (t <= n_obs) {
            const double y = W(t - 1) - xb(t);
            const double gain = R / (R + 1.0);
            m(t) = a + gain * (y - a);
            P(t) = R / (R + 1.0);
        } else {
            m(t) = a;
            P(t) = R;
        }
    }

    Eigen::VectorXd theta(path_len + 1);
    theta(path_len) = rng.normal(m(path_len), std::sqrt(P(path_len)));
    for (int t = path_len - 1; t >= 0; --t) {
        const double prec = 1.0 / P(t) + rho * rho;
        const double var = 1.0 / prec;
        const double mean = var * (m(t) / P(t) + rho * theta(t + 1));
        theta(t) = rng.normal(mean, std::sqrt(var));
    }
    return theta;
}

HittingPmf pmf_from_xb(const Eigen::VectorXd& theta, const Eigen::VectorXd& xb, int K) {
    HittingPmf pmf;
    pmf.day = Eigen::VectorXd::Zero(K);
    double log_surv = 0.0;
    for (int t = 1; t <= K; ++t) {
        const double z = std::clamp(theta(t) + xb(t), -kProbitClamp, kProbitClamp);
        double log_q, log_1mq;
        probit_logs(z, log_q, log_1mq);
        pmf.day(t - 1) = std::exp(log_surv + log_q);
        log_surv += log_1mq;
        if (log_surv < -746.0) break;
    }
    pmf.censored = std::exp(log_surv);
    return pmf;
}

std::optional<int> impute_from_xb(const FitUnit& unit, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXd& xb, const ModelParams& params, int K,
                                  Rng& rng) {
    const HittingPmf pmf = pmf_from_xb(theta, xb, K);
    const int last = std::min(unit.last_candidate, K);

    double total = pmf.censored;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(last);
    for (int t = 1; t <= last; ++t) {
        const double pi_t = assignment_prob(t, unit.D, params.delta0, params.delta1);
        w(t - 1) = pmf.day(t - 1) * (1.0 - pi_t);
        total += w(t - 1);
    }
    if (!(total > 0.0)) {
        throw NumericError("impute_indication_time: all weights zero for unit " + unit.unit_id);
    }

    double u = rng.uniform() * total;
    for (int t = 1; t <= last; ++t) {
        u -= w(t - 1);
        if (u <= 0.0) return t;
    }
    return std::nullopt;  // censored within the window
}

}  // namespace

Eigen::VectorXd sample_utilities(const Eigen::VectorXd& theta, const Eigen::MatrixXd& design,
                                 const Eigen::VectorXd& beta, std::optional<int> T, int K, Rng& rng) {
    return utilities_from_xb(theta, project_design(design, beta), T, K, rng);
}

Eigen::VectorXd ffbs_theta(const Eigen::VectorXd& W, const Eigen::MatrixXd& design,
                           const Eigen::VectorXd& beta, double rho, int path_len, Rng& rng) {
    return ffbs_from_xb(W, project_design(design, beta), rho, path_len, rng);
}

Eigen::VectorXd sample_beta_suffstats(const Eigen::MatrixXd& xtx, const Eigen::VectorXd& xtr,
                                      const PriorSpec& prior, Rng& rng) {
    const Eigen::Index p = xtr.size();
    if (p == 0) return Eigen::VectorXd();

    Eigen::LLT<Eigen::MatrixXd> prior_llt(prior.beta_cov);
    if (prior_llt.info() != Eigen::Success) throw NumericError("sample_beta: prior covariance not PD");
    const Eigen::MatrixXd prior_prec = prior_llt.solve(Eigen::MatrixXd::Identity(p, p));

    const Eigen::MatrixXd post_prec = prior_prec + xtx;
    const Eigen::VectorXd b = prior_prec * prior.beta_mean + xtr;
    Eigen::LLT<Eigen::MatrixXd> llt(post_prec);
    if (llt.info() != Eigen::Success) throw NumericError("sample_beta: singular posterior precision");

    const Eigen::VectorXd mean = llt.solve(b);
    Eigen::VectorXd z(p);
    for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.normal();
    // draw = mean + L^{-T} z, cov = (L L^T)^{-1}
    const Eigen::VectorXd noise = llt.matrixU().solve(z);
    return mean + noise;
}

Eigen::VectorXd sample_beta(const Eigen::MatrixXd& X, const Eigen::VectorXd& resid, const PriorSpec& prior,
                            Rng& rng) {
    if (X.rows() != resid.size()) throw ValidationError("sample_beta: row count mismatch");
    const Eigen::MatrixXd xtx = X.transpose() * X;
    const Eigen::VectorXd xtr = X.transpose() * resid;
    return sample_beta_suffstats(xtx, xtr, prior, rng);
}

double sample_rho_suffstats(double sum_lag_sq, double sum_cross, const PriorSpec& prior, Rng& rng) {
    const double prior_prec = 1.0 / (prior.rho_sd * prior.rho_sd);
    const double prec = prior_prec + sum_lag_sq;
    const double mean = (prior.rho_mean * prior_prec + sum_cross) / prec;
    const double draw = rng.trunc_normal(mean, std::sqrt(1.0 / prec), -1.0, 1.0);
    return std::clamp(draw, std::nextafter(-1.0, 0.0), std::nextafter(1.0, 0.0));
}

double sample_rho(const std::vector<Eigen::VectorXd>& paths, const PriorSpec& prior, Rng& rng) {
    double sum_lag_sq = 0.0, sum_cross = 0.0;
    for (const auto& theta : paths) {
        for (Eigen::Index t = 1; t < theta.size(); ++t) {
            sum_lag_sq += theta(t - 1) * theta(t - 1);
            sum_cross += theta(t) * theta(t - 1);
        }
    }
    return sample_rho_suffstats(sum_lag_sq, sum_cross, prior, rng);
}

namespace {

double delta_log_target(const std::vector<DeltaRecord>& records, const PriorSpec& prior, double delta0,
                        double log_neg_delta1) {
    const double delta1 = -std::exp(log_neg_delta1);
    double ll = 0.0;
    for (const auto& rec : records) {
        const double link = delta0 + delta1 * rec.D;
        ll += rec.Z ? log_invlogit(link) : log1m_invlogit(link);
    }
    const double z0 = (delta0 - prior.delta0_mean) / prior.delta0_sd;
    ll += -0.5 * z0 * z0;
    // Gamma(shape, rate) on -delta1 with the log-scale Jacobian folded in.
    ll += prior.delta1_gamma_shape * log_neg_delta1 - prior.delta1_gamma_rate * std::exp(log_neg_delta1);
    return ll;
}

}  // namespace

DeltaState sample_delta(const std::vector<DeltaRecord>& records, const PriorSpec& prior, DeltaState current,
                        double step0, double step1, Rng& rng, bool* accepted) {
    if (records.empty()) {
        DeltaState out;
        out.delta0 = rng.normal(prior.delta0_mean, prior.delta0_sd);
        out.delta1 = -rng.gamma(prior.delta1_gamma_shape, prior.delta1_gamma_rate);
        if (accepted) *accepted = true;
        return out;
    }

    const double u_cur = std::log(-current.delta1);
    const double cur_target = delta_log_target(records, prior, current.delta0, u_cur);

    const double d0_prop = current.delta0 + step0 * rng.normal();
    const double u_prop = u_cur + step1 * rng.normal();
    const double prop_target = delta_log_target(records, prior, d0_prop, u_prop);

    const bool accept = std::log(rng.uniform()) < prop_target - cur_target;
    if (accepted) *accepted = accept;
    if (accept) {
        return {d0_prop, -std::exp(u_prop)};
    }
    return current;
}

std::optional<int> impute_indication_time(const FitUnit& unit, const Eigen::VectorXd& theta,
                                          const ModelParams& params, int K, Rng& rng) {
    return impute_from_xb(unit, theta, project_design(unit.design, params.beta), params, K, rng);
}

namespace {

struct ChainState {
    ModelParams params;
    std::vector<Eigen::VectorXd> W;
    std::vector<Eigen::VectorXd> theta;
    std::vector<std::optional<int>> t_mis;  // aligned with FitData::untreated
};

std::optional<int> current_hit(const FitData& fit, const ChainState& state, std::size_t i,
                               const std::vector<std::ptrdiff_t>& untreated_slot) {
    const FitUnit& u = fit.units[i];
    if (u.treated) return u.hit_day;  // nullopt when beyond the window
    return state.t_mis[static_cast<std::size_t>(untreated_slot[i])];
}

}  // namespace

ChainDraws run_chain(const FitData& fit, const McmcConfig& config, const PriorSpec& prior, int chain_index,
                     const ChainObserver& observer) {
    config.validate();
    prior.validate();
    const int K = fit.K;
    const std::size_t n_units = fit.units.size();
    Rng rng(config.seed, static_cast<std::uint64_t>(chain_index) + 1);

    // Map unit index -> slot in the untreated arrays.
    std::vector<std::ptrdiff_t> untreated_slot(n_units, -1);
    for (std::size_t s = 0; s < fit.untreated.size(); ++s) untreated_slot[fit.untreated[s]] = static_cast<std::ptrdiff_t>(s);

    ChainState state;
    state.params.rho = std::clamp(prior.rho_mean, -0.9, 0.9);
    state.params.beta = prior.beta_mean;
    state.params.delta0 = prior.delta0_mean;
    state.params.delta1 = -std::max(prior.delta1_gamma_shape / prior.delta1_gamma_rate, 1e-6);
    state.W.resize(n_units);
    state.theta.resize(n_units);
    for (std::size_t i = 0; i < n_units; ++i) {
        state.theta[i] = Eigen::VectorXd::Zero(fit.units[i].path_len + 1);
    }
    state.t_mis.assign(fit.untreated.size(), std::nullopt);

    // Covariate projections x_t' beta, refreshed whenever beta moves.
    std::vector<Eigen::VectorXd> xb(n_units);
    const auto refresh_xb = [&] {
        for (std::size_t i = 0; i < n_units; ++i) {
            xb[i] = project_design(fit.units[i].design, state.params.beta);
        }
    };
    refresh_xb();

    const int kept = (config.n_iters - config.burn_in) / config.thin;
    ChainDraws draws;
    draws.params.resize(kept, 3 + fit.p);
    draws.t_mis.resize(kept, static_cast<Eigen::Index>(fit.untreated.size()));
    draws.n0.resize(kept);
    draws.iters.reserve(kept);

    double step0 = config.delta0_step;
    double step1 = config.delta1_step;
    int adapt_proposals = 0, adapt_accepts = 0;
    long post_proposals = 0, post_accepts = 0;
    int stored = 0;

    Eigen::MatrixXd xtx(fit.p, fit.p);
    Eigen::VectorXd xtr(fit.p);
    Eigen::RowVectorXd tri_sum(fit.p * (fit.p + 1) / 2);
    std::vector<DeltaRecord> records;
    records.reserve(n_units);

    for (int iter = 1; iter <= config.n_iters; ++iter) {
        // 1. utilities
        for (std::size_t i = 0; i < n_units; ++i) {
            state.W[i] = utilities_from_xb(state.theta[i], xb[i],
                                           current_hit(fit, state, i, untreated_slot), K, rng);
        }

        // 2. latent paths
        for (std::size_t i = 0; i < n_units; ++i) {
            state.theta[i] = ffbs_from_xb(state.W[i], xb[i], state.params.rho,
                                          fit.units[i].path_len, rng);
        }

        // 3. beta
        if (fit.p > 0) {
            tri_sum.setZero();
            xtr.setZero();
            for (std::size_t i = 0; i < n_units; ++i) {
                const FitUnit& u = fit.units[i];
                const int len = static_cast<int>(state.W[i].size());
                if (len == 0) continue;
                tri_sum += u.xtx_prefix.row(len);
                xtr.noalias() += u.design.middleRows(1, len).transpose() *
                                 (state.W[i] - state.theta[i].segment(1, len));
            }
            Eigen::Index slot = 0;
            for (Eigen::Index r = 0; r < fit.p; ++r) {
                for (Eigen::Index c = 0; c <= r; ++c) {
                    xtx(r, c) = tri_sum(slot);
                    xtx(c, r) = tri_sum(slot);
                    ++slot;
                }
            }
            state.params.beta = sample_beta_suffstats(xtx, xtr, prior, rng);
            refresh_xb();
        }

        // 4. rho
        {
            double sum_lag_sq = 0.0, sum_cross = 0.0;
            for (std::size_t i = 0; i < n_units; ++i) {
                const Eigen::VectorXd& theta = state.theta[i];
                for (Eigen::Index t = 1; t < theta.size(); ++t) {
                    sum_lag_sq += theta(t - 1) * theta(t - 1);
                    sum_cross += theta(t) * theta(t - 1);
                }
            }
            state.params.rho = sample_rho_suffstats(sum_lag_sq, sum_cross, prior, rng);
        }

        // 5. missing indication times, refreshing utilities so W stays
        // consistent with the new hit pattern
        for (std::size_t s = 0; s < fit.untreated.size(); ++s) {
            const std::size_t i = fit.untreated[s];
            const FitUnit& u = fit.units[i];
            state.t_mis[s] = impute_from_xb(u, state.theta[i], xb[i], state.params, K, rng);
            state.W[i] = utilities_from_xb(state.theta[i], xb[i], state.t_mis[s], K, rng);
        }

        // 6. assignment block
        records.clear();
        for (std::size_t i = 0; i < n_units; ++i) {
            const FitUnit& u = fit.units[i];
            const auto hit = current_hit(fit, state, i, untreated_slot);
            if (hit && *hit <= K) records.push_back({*hit, u.D, u.treated});
        }
        bool accepted = false;
        DeltaState delta{state.params.delta0, state.params.delta1};
        delta = sample_delta(records, prior, delta, step0, step1, rng, &accepted);
        state.params.delta0 = delta.delta0;
        state.params.delta1 = delta.delta1;

        if (iter <= config.burn_in) {
            ++adapt_proposals;
            adapt_accepts += accepted ? 1 : 0;
            if (adapt_proposals == 50) {
                const double rate = static_cast<double>(adapt_accepts) / 50.0;
                if (rate < 0.3) {
                    step0 *= 0.8;
                    step1 *= 0.8;
                } else if (rate > 0.5) {
                    step0 *= 1.25;
                    step1 *= 1.25;
                }
                adapt_proposals = 0;
                adapt_accepts = 0;
            }
        } else {
            ++post_proposals;
            post_accepts += accepted ? 1 : 0;
        }

        // 7. store
        if (iter > config.burn_in && (iter - config.burn_in) % config.thin == 0) {
            draws.iters.push_back(iter);
            draws.params(stored, 0) = state.params.rho;
            draws.params(stored, 1) = state.params.delta0;
            draws.params(stored, 2) = state.params.delta1;
            draws.params.row(stored).tail(fit.p) = state.params.beta.transpose();
            int n0 = 0;
            for (std::size_t s = 0; s < fit.untreated.size(); ++s) {
                const auto& t = state.t_mis[s];
                draws.t_mis(stored, static_cast<Eigen::Index>(s)) =
                    t ? static_cast<std::int16_t>(*t) : std::int16_t(-1);
                n0 += (t && *t <= K) ? 1 : 0;
            }
            draws.n0(stored) = n0;
            ++stored;
        }

        if (observer) {
            observer(ChainStateView{state.params, state.W, state.theta, state.t_mis, iter});
        }
    }

    draws.delta_accept_rate = post_proposals > 0 ? static_cast<double>(post_accepts) / post_proposals : 0.0;
    return draws;
}

PosteriorDraws run_chains(const FitData& fit, const McmcConfig& config, const PriorSpec& prior,
                          const ChainObserver& observer) {
    config.validate();
    PosteriorDraws out;
    out.K = fit.K;
    out.beta_names = fit.beta_names;
    out.untreated_ids = fit.untreated_ids;
    out.chains.resize(config.n_chains);

    const int workers = std::min(config.threads, config.n_chains);
    if (workers <= 1) {
        for (int c = 0; c < config.n_chains; ++c) {
            out.chains[c] = run_chain(fit, config, prior, c, observer);
        }
        return out;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(config.n_chains);
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int c = next.fetch_add(1); c < config.n_chains; c = next.fetch_add(1)) {
                try {
                    out.chains[c] = run_chain(fit, config, prior, c, observer);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

DicResult dic(const PosteriorDraws& draws, const FitData& fit, int mc_paths, std::uint64_t seed,
              int max_draws) {
    struct Slot {
        const ChainDraws* chain;
        Eigen::Index row;
    };
    std::vector<Slot> all;
    for (const auto& c : draws.chains) {
        for (Eigen::Index r = 0; r < c.n_draws(); ++r) all.push_back({&c, r});
    }
    if (all.empty()) throw ValidationError("dic: no stored draws");

    std::vector<Slot> selected;
    if (max_draws > 0 && static_cast<int>(all.size()) > max_draws) {
        const double stride = static_cast<double>(all.size()) / max_draws;
        for (int i = 0; i < max_draws; ++i) {
            selected.push_back(all[static_cast<std::size_t>(i * stride)]);
        }
    } else {
        selected = all;
    }

    const Eigen::Index p = fit.p;
    auto params_of = [&](const Slot& s) {
        ModelParams params;
        params.rho = s.chain->params(s.row, 0);
        params.delta0 = s.chain->params(s.row, 1);
        params.delta1 = s.chain->params(s.row, 2);
        params.beta = s.chain->params.row(s.row).tail(p).transpose();
        return params;
    };

    auto deviance = [&](const ModelParams& params) {
        double total = 0.0;
        for (std::size_t i = 0; i < fit.units.size(); ++i) {
            const FitUnit& u = fit.units[i];
            const std::uint64_t unit_seed = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
            total += unit_loglik(u.treated, u.treated ? std::optional<int>(u.hit_day ? *u.hit_day : fit.K + 1)
                                                      : std::nullopt,
                                 u.D, u.unit_id, u.design, params, fit.K, mc_paths, unit_seed);
        }
        return -2.0 * total;
    };

    DicResult result;
    result.n_draws_used = static_cast<int>(selected.size());
    double d_sum = 0.0;
    Eigen::VectorXd mean_row = Eigen::VectorXd::Zero(3 + p);
    for (const auto& s : selected) {
        d_sum += deviance(params_of(s));
        mean_row += s.chain->params.row(s.row).transpose();
    }
    mean_row /= static_cast<double>(selected.size());
    ModelParams mean_params;
    mean_params.rho = mean_row(0);
    mean_params.delta0 = mean_row(1);
    mean_params.delta1 = std::min(mean_row(2), 0.0);
    mean_params.beta = mean_row.tail(p);

    result.d_bar = d_sum / static_cast<double>(selected.size());
    result.d_at_mean = deviance(mean_params);
    result.p_d = result.d_bar - result.d_at_mean;
    result.dic = result.d_bar + result.p_d;
    return result;
}

}  // namespace indicate
