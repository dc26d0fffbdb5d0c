#include "indicate/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <unordered_map>

#include "indicate/csv.hpp"
#include "indicate/diagnostics.hpp"
#include "indicate/errors.hpp"
#include "indicate/spline.hpp"
#include "indicate/synth.hpp"

namespace fs = std::filesystem;

namespace indicate {

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create directory: " + dir);
}

std::string window_dir(const RunConfig& cfg, int K) {
    return cfg.out_dir + "/" + std::to_string(K);
}

std::string fmt_or_empty(double v) {
    return std::isfinite(v) ? csv::format_double(v) : std::string();
}

std::vector<int> clipped_windows(const RunConfig& cfg, int K_max) {
    std::vector<int> out;
    for (const int w : cfg.windows) {
        if (w <= K_max) out.push_back(w);
    }
    if (out.empty()) out.push_back(K_max);
    return out;
}

}  // namespace

Cohort load_configured_cohort(const RunConfig& cfg) {
    Cohort cohort = load_cohort(cfg.units_file, cfg.visits_file);
    return select_covariates(cohort, cfg.baseline_covariates, cfg.visit_covariates);
}

void cmd_simulate(const RunConfig& cfg) {
    cfg.validate();
    Cohort cohort;
    TruthRecord truth;
    if (cfg.sim_demo) {
        std::tie(cohort, truth) = demo_dataset();
    } else {
        std::tie(cohort, truth) = generate_cohort(cfg.sim_units, cfg.sim_window, GenParams::defaults(),
                                                  cfg.mcmc.seed);
    }

    const fs::path units_path(cfg.units_file);
    if (units_path.has_parent_path()) ensure_dir(units_path.parent_path().string());
    const fs::path visits_path(cfg.visits_file);
    if (visits_path.has_parent_path()) ensure_dir(visits_path.parent_path().string());
    const fs::path truth_path(cfg.truth_file);
    if (truth_path.has_parent_path()) ensure_dir(truth_path.parent_path().string());

    write_cohort(cohort, cfg.units_file, cfg.visits_file);
    write_truth(truth, cfg.truth_file);
    write_truth_ate(truth, clipped_windows(cfg, truth.K), cfg.horizon,
                    (truth_path.parent_path() / ("ate_" + truth_path.filename().string())).string());

    int treated = 0;
    for (const auto& u : cohort.units) treated += u.treated ? 1 : 0;
    std::cout << "simulated " << cohort.units.size() << " units (" << treated << " treated) to "
              << cfg.units_file << ", " << cfg.visits_file << "\n";
}

void cmd_validate(const RunConfig& cfg) {
    cfg.validate();
    const Cohort cohort = load_configured_cohort(cfg);
    int treated = 0, with_death = 0;
    std::size_t visits = 0;
    for (const auto& u : cohort.units) {
        treated += u.treated ? 1 : 0;
        with_death += u.death_day ? 1 : 0;
        visits += u.visits.size();
    }
    std::cout << "cohort valid: " << cohort.units.size() << " units, " << treated << " treated, "
              << with_death << " with observed death, " << visits << " visits, "
              << cohort.baseline_names.size() << " baseline + " << cohort.visit_names.size()
              << " time-varying covariates\n";
}

MatchResult cmd_match(const RunConfig& cfg) {
    cfg.validate();
    const Cohort cohort = load_configured_cohort(cfg);

    BaselineSet treated, controls;
    for (const auto& u : cohort.units) {
        (u.treated ? treated : controls).ids.push_back(u.unit_id);
    }
    const Eigen::Index p0 = cohort.units.empty() ? 0 : cohort.units.front().baseline.size();
    treated.rows.resize(static_cast<Eigen::Index>(treated.ids.size()), p0);
    controls.rows.resize(static_cast<Eigen::Index>(controls.ids.size()), p0);
    Eigen::Index it = 0, ic = 0;
    for (const auto& u : cohort.units) {
        if (u.treated) treated.rows.row(it++) = u.baseline.transpose();
        else controls.rows.row(ic++) = u.baseline.transpose();
    }

    const MatchResult result = nn_match(treated, controls);

    ensure_dir(cfg.out_dir);
    csv::Writer matches(cfg.out_dir + "/matches.csv");
    matches.write_row({"treated_id", "control_id", "distance"});
    for (const auto& pair : result.pairs) {
        matches.write_row({pair.treated_id, pair.control_id, csv::format_double(pair.distance)});
    }
    matches.close();

    // Balance over the matched control multiset (with replacement).
    std::unordered_map<std::string, Eigen::Index> control_row;
    for (std::size_t j = 0; j < controls.ids.size(); ++j) {
        control_row.emplace(controls.ids[j], static_cast<Eigen::Index>(j));
    }
    Eigen::MatrixXd matched(static_cast<Eigen::Index>(result.pairs.size()), p0);
    for (std::size_t i = 0; i < result.pairs.size(); ++i) {
        matched.row(static_cast<Eigen::Index>(i)) = controls.rows.row(control_row.at(result.pairs[i].control_id));
    }
    const auto balance = balance_table(cohort.baseline_names, treated.rows, matched);
    csv::Writer bal(cfg.out_dir + "/balance.csv");
    bal.write_row({"covariate", "mean_treated", "mean_control", "smd"});
    for (const auto& row : balance) {
        bal.write_row({row.covariate, csv::format_double(row.mean_treated),
                       csv::format_double(row.mean_control), fmt_or_empty(row.smd)});
    }
    bal.close();

    std::cout << "matched " << result.pairs.size() << " treated units to "
              << result.retained_controls.size() << " distinct controls\n";
    return result;
}

std::vector<CohortUnit> build_pool(const RunConfig& cfg, const Cohort& cohort) {
    std::vector<CohortUnit> pool;
    if (cfg.skip_matching) {
        pool = cohort.units;
        return pool;
    }
    const std::string path = cfg.out_dir + "/matches.csv";
    if (!fs::exists(path)) {
        throw ValidationError("match output not found (" + path +
                              "); run the match command first or set skip_matching = true");
    }
    const auto table = csv::read_file(path);
    const auto control_col = table.column("control_id", path);
    std::set<std::string> keep;
    for (const auto& row : table.rows) keep.insert(row[control_col]);

    for (const auto& u : cohort.units) {
        if (u.treated || keep.count(u.unit_id)) pool.push_back(u);
    }
    return pool;
}

void write_draws(const PosteriorDraws& draws, const std::string& dir) {
    ensure_dir(dir);
    csv::Writer out(dir + "/draws.csv");
    std::vector<std::string> header = {"chain", "iter", "rho", "delta0", "delta1"};
    for (const auto& name : draws.beta_names) header.push_back(name);
    out.write_row(header);
    for (std::size_t c = 0; c < draws.chains.size(); ++c) {
        const ChainDraws& chain = draws.chains[c];
        for (Eigen::Index d = 0; d < chain.n_draws(); ++d) {
            std::vector<std::string> row = {csv::format_int(static_cast<int>(c) + 1),
                                            csv::format_int(chain.iters[static_cast<std::size_t>(d)])};
            for (Eigen::Index j = 0; j < chain.params.cols(); ++j) {
                row.push_back(csv::format_double(chain.params(d, j)));
            }
            out.write_row(row);
        }
    }
    out.close();

    csv::Writer imp(dir + "/imputations.csv");
    imp.write_row({"chain", "iter", "unit_id", "t_mis"});
    for (std::size_t c = 0; c < draws.chains.size(); ++c) {
        const ChainDraws& chain = draws.chains[c];
        for (Eigen::Index d = 0; d < chain.n_draws(); ++d) {
            for (std::size_t j = 0; j < draws.untreated_ids.size(); ++j) {
                imp.write_row({csv::format_int(static_cast<int>(c) + 1),
                               csv::format_int(chain.iters[static_cast<std::size_t>(d)]),
                               draws.untreated_ids[j],
                               csv::format_int(chain.t_mis(d, static_cast<Eigen::Index>(j)))});
            }
        }
    }
    imp.close();
}

PosteriorDraws read_draws(const std::string& dir, int K) {
    PosteriorDraws draws;
    draws.K = K;

    const std::string dpath = dir + "/draws.csv";
    const auto table = csv::read_file(dpath);
    const auto chain_col = table.column("chain", dpath);
    const auto iter_col = table.column("iter", dpath);
    const auto rho_col = table.column("rho", dpath);
    for (std::size_t j = rho_col + 3; j < table.header.size(); ++j) {
        draws.beta_names.push_back(table.header[j]);
    }
    const Eigen::Index p = static_cast<Eigen::Index>(draws.beta_names.size());

    std::map<int, std::vector<std::pair<int, Eigen::VectorXd>>> by_chain;
    for (const auto& row : table.rows) {
        const int chain = csv::parse_int(row[chain_col], dpath);
        const int iter = csv::parse_int(row[iter_col], dpath);
        Eigen::VectorXd params(3 + p);
        for (Eigen::Index j = 0; j < 3 + p; ++j) {
            params(j) = csv::parse_double(row[rho_col + static_cast<std::size_t>(j)], dpath);
        }
        by_chain[chain].push_back({iter, std::move(params)});
    }

    const std::string ipath = dir + "/imputations.csv";
    const auto imp = csv::read_file(ipath);
    const auto ic_col = imp.column("chain", ipath);
    const auto ii_col = imp.column("iter", ipath);
    const auto id_col = imp.column("unit_id", ipath);
    const auto t_col = imp.column("t_mis", ipath);

    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> slot;
    std::map<int, std::map<int, std::vector<std::int16_t>>> imputed;  // chain -> iter -> values
    for (const auto& row : imp.rows) {
        const auto [it, added] = slot.emplace(row[id_col], ids.size());
        if (added) ids.push_back(row[id_col]);
        const int chain = csv::parse_int(row[ic_col], ipath);
        const int iter = csv::parse_int(row[ii_col], ipath);
        auto& values = imputed[chain][iter];
        values.resize(ids.size(), -1);
        if (values.size() <= it->second) values.resize(it->second + 1, -1);
        values[it->second] = static_cast<std::int16_t>(csv::parse_int(row[t_col], ipath));
    }
    draws.untreated_ids = ids;

    for (auto& [chain_id, rows] : by_chain) {
        ChainDraws chain;
        chain.params.resize(static_cast<Eigen::Index>(rows.size()), 3 + p);
        chain.t_mis.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ids.size()));
        chain.t_mis.setConstant(-1);
        chain.n0.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t d = 0; d < rows.size(); ++d) {
            chain.iters.push_back(rows[d].first);
            chain.params.row(static_cast<Eigen::Index>(d)) = rows[d].second.transpose();
            const auto chain_it = imputed.find(chain_id);
            if (chain_it != imputed.end()) {
                const auto iter_it = chain_it->second.find(rows[d].first);
                if (iter_it != chain_it->second.end()) {
                    const auto& values = iter_it->second;
                    for (std::size_t j = 0; j < values.size(); ++j) {
                        chain.t_mis(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(j)) = values[j];
                    }
                }
            }
            int n0 = 0;
            for (Eigen::Index j = 0; j < chain.t_mis.cols(); ++j) {
                const auto t = chain.t_mis(static_cast<Eigen::Index>(d), j);
                if (t >= 0 && t <= K) ++n0;
            }
            chain.n0(static_cast<Eigen::Index>(d)) = n0;
        }
        draws.chains.push_back(std::move(chain));
    }
    return draws;
}

namespace {

struct DiagnosticsTable {
    std::vector<std::string> parameters;
    std::vector<std::vector<double>> geweke;  // [param][chain], NaN on failure
    std::vector<double> rhat;                 // NaN when unavailable
};

DiagnosticsTable compute_diagnostics(const PosteriorDraws& draws) {
    DiagnosticsTable table;
    table.parameters = {"rho", "delta0", "delta1"};
    for (const auto& name : draws.beta_names) table.parameters.push_back(name);
    table.parameters.push_back("n0");

    const std::size_t n_params = table.parameters.size();
    const std::size_t n_chains = draws.chains.size();
    table.geweke.assign(n_params, std::vector<double>(n_chains, std::numeric_limits<double>::quiet_NaN()));
    table.rhat.assign(n_params, std::numeric_limits<double>::quiet_NaN());

    auto series = [&](const ChainDraws& chain, std::size_t param) {
        if (param + 1 == n_params) {
            return chain.n0.cast<double>().eval();
        }
        return chain.params.col(static_cast<Eigen::Index>(param)).eval();
    };

    for (std::size_t p = 0; p < n_params; ++p) {
        std::vector<Eigen::VectorXd> chains;
        for (std::size_t c = 0; c < n_chains; ++c) {
            const Eigen::VectorXd v = series(draws.chains[c], p);
            chains.push_back(v);
            try {
                table.geweke[p][c] = geweke_z(v);
            } catch (const DiagnosticError&) {
                // left as NaN
            }
        }
        if (n_chains >= 2) {
            try {
                table.rhat[p] = gelman_rubin(chains);
            } catch (const DiagnosticError&) {
            }
        }
    }
    return table;
}

void write_diagnostics(const DiagnosticsTable& table, std::size_t n_chains, const std::string& path) {
    csv::Writer out(path);
    std::vector<std::string> header = {"parameter"};
    for (std::size_t c = 1; c <= n_chains; ++c) header.push_back("geweke_z_chain" + std::to_string(c));
    header.push_back("rhat");
    out.write_row(header);
    for (std::size_t p = 0; p < table.parameters.size(); ++p) {
        std::vector<std::string> row = {table.parameters[p]};
        for (std::size_t c = 0; c < n_chains; ++c) row.push_back(fmt_or_empty(table.geweke[p][c]));
        row.push_back(fmt_or_empty(table.rhat[p]));
        out.write_row(row);
    }
    out.close();
}

}  // namespace

FitSummary cmd_fit(const RunConfig& cfg) {
    cfg.validate();
    const Cohort cohort = load_configured_cohort(cfg);
    const std::vector<CohortUnit> pool = build_pool(cfg, cohort);
    if (pool.empty()) throw ValidationError("empty fit pool");
    const Standardization standardization = compute_standardization(pool);

    FitSummary summary;
    for (const int K : cfg.windows) {
        const FitData fit = prepare_fit_data(pool, standardization, K, cohort.baseline_names,
                                             cohort.visit_names);
        McmcConfig mcmc = cfg.mcmc;
        mcmc.study_window = K;
        const PriorSpec prior = cfg.prior(fit.p);
        const PosteriorDraws draws = run_chains(fit, mcmc, prior);

        const std::string dir = window_dir(cfg, K);
        write_draws(draws, dir);

        const DiagnosticsTable diag = compute_diagnostics(draws);
        write_diagnostics(diag, draws.chains.size(), dir + "/diagnostics.csv");

        const DicResult dic_result = dic(draws, fit, cfg.mc_paths, cfg.mcmc.seed + 77, cfg.dic_max_draws);
        csv::Writer dic_out(dir + "/dic.csv");
        dic_out.write_row({"dic", "p_d", "d_bar", "d_at_mean", "n_draws_used"});
        dic_out.write_row({csv::format_double(dic_result.dic), csv::format_double(dic_result.p_d),
                           csv::format_double(dic_result.d_bar), csv::format_double(dic_result.d_at_mean),
                           csv::format_int(dic_result.n_draws_used)});
        dic_out.close();

        FitWindowSummary ws;
        ws.window = K;
        ws.dic = dic_result.dic;
        ws.p_d = dic_result.p_d;
        double accept = 0.0;
        for (const auto& chain : draws.chains) accept += chain.delta_accept_rate;
        ws.delta_accept = accept / static_cast<double>(draws.chains.size());
        ws.max_rhat = std::numeric_limits<double>::quiet_NaN();
        if (draws.chains.size() >= 2) {
            summary.rhat_available = true;
            double max_rhat = 0.0;
            for (const double r : diag.rhat) {
                if (std::isfinite(r)) max_rhat = std::max(max_rhat, r);
            }
            ws.max_rhat = max_rhat;
            summary.max_rhat = std::max(summary.max_rhat, max_rhat);
            if (max_rhat > 1.1) summary.converged = false;
        }
        summary.windows.push_back(ws);

        std::cout << "window " << K << ": " << draws.total_draws() << " draws";
        if (std::isfinite(ws.max_rhat)) std::cout << ", max R-hat " << ws.max_rhat;
        std::cout << ", delta acceptance " << ws.delta_accept << ", DIC " << ws.dic << "\n";
    }
    if (!summary.rhat_available) {
        std::cout << "note: R-hat not computed (single chain); rerun with chains >= 2 for convergence checks\n";
    }
    return summary;
}

void cmd_report(const RunConfig& cfg) {
    cfg.validate();
    const Cohort cohort = load_configured_cohort(cfg);
    ensure_dir(cfg.out_dir);

    std::vector<EffectEstimate> effects;
    std::vector<std::vector<double>> tau_draws_per_window;
    for (const int K : cfg.windows) {
        const PosteriorDraws draws = read_draws(window_dir(cfg, K), K);
        EffectEstimate est = estimate_ate(draws, cohort, K, cfg.horizon);
        tau_draws_per_window.push_back(est.tau_draws);
        effects.push_back(std::move(est));
    }

    csv::Writer eff(cfg.out_dir + "/effects.csv");
    eff.write_row({"window", "n1", "n0_median", "n0_lo", "n0_hi", "surv_treated", "surv_control", "tau",
                   "tau_lo", "tau_hi"});
    for (const auto& e : effects) {
        eff.write_row({csv::format_int(e.window), csv::format_int(e.n1), fmt_or_empty(e.n0_median),
                       fmt_or_empty(e.n0_lo), fmt_or_empty(e.n0_hi), fmt_or_empty(e.surv_treated),
                       fmt_or_empty(e.surv_control), fmt_or_empty(e.tau_mean), fmt_or_empty(e.tau_lo),
                       fmt_or_empty(e.tau_hi)});
        if (e.n_empty_draws > 0) {
            std::cout << "window " << e.window << ": " << e.n_empty_draws << " of " << e.n_draws
                      << " draws had no usable control group\n";
        }
    }
    eff.close();

    csv::Writer rmst(cfg.out_dir + "/effects_rmst.csv");
    rmst.write_row({"window", "rmst_treated", "rmst_control", "rmst_diff", "rmst_lo", "rmst_hi"});
    for (const auto& e : effects) {
        rmst.write_row({csv::format_int(e.window), fmt_or_empty(e.rmst_treated),
                        fmt_or_empty(e.rmst_control), fmt_or_empty(e.rmst_diff), fmt_or_empty(e.rmst_lo),
                        fmt_or_empty(e.rmst_hi)});
    }
    rmst.close();

    // CATE over consecutive window intervals.
    csv::Writer cate(cfg.out_dir + "/cate.csv");
    cate.write_row({"window_lo", "window_hi", "n1", "n0_median", "surv_treated", "surv_control", "tau",
                    "tau_lo", "tau_hi"});
    int prev = 0;
    for (const int K : cfg.windows) {
        const PosteriorDraws draws = read_draws(window_dir(cfg, K), K);
        const EffectEstimate e = estimate_cate(draws, cohort, prev + 1, K, cfg.horizon);
        cate.write_row({csv::format_int(prev + 1), csv::format_int(K), csv::format_int(e.n1),
                        fmt_or_empty(e.n0_median), fmt_or_empty(e.surv_treated),
                        fmt_or_empty(e.surv_control), fmt_or_empty(e.tau_mean), fmt_or_empty(e.tau_lo),
                        fmt_or_empty(e.tau_hi)});
        prev = K;
    }
    cate.close();

    // Smoothed effect curve with pointwise bands from per-draw spline fits.
    if (effects.size() >= 3) {
        std::vector<std::pair<int, double>> knots;
        for (const auto& e : effects) knots.push_back({e.window, e.tau_mean});
        const auto curve = smooth_curve(knots, cfg.spline_lambda);

        std::vector<std::vector<double>> band(curve.size());
        Rng rng(cfg.mcmc.seed, 0xBA5EBA11ULL);
        for (int s = 0; s < cfg.curve_band_samples; ++s) {
            std::vector<std::pair<int, double>> sampled;
            bool ok = true;
            for (std::size_t w = 0; w < effects.size(); ++w) {
                const auto& taus = tau_draws_per_window[w];
                if (taus.empty()) {
                    ok = false;
                    break;
                }
                const double tau = taus[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<int>(taus.size()) - 1))];
                sampled.push_back({effects[w].window, tau});
            }
            if (!ok) break;
            const auto sampled_curve = smooth_curve(sampled, cfg.spline_lambda);
            for (std::size_t i = 0; i < sampled_curve.size(); ++i) {
                band[i].push_back(sampled_curve[i].value);
            }
        }

        csv::Writer cw(cfg.out_dir + "/curve.csv");
        cw.write_row({"day", "tau_smooth", "lo", "hi"});
        for (std::size_t i = 0; i < curve.size(); ++i) {
            double lo = std::numeric_limits<double>::quiet_NaN();
            double hi = std::numeric_limits<double>::quiet_NaN();
            if (!band[i].empty()) {
                std::vector<double> v = band[i];
                std::sort(v.begin(), v.end());
                const auto q = [&](double p) {
                    const double idx = p * static_cast<double>(v.size() - 1);
                    const std::size_t lo_i = static_cast<std::size_t>(std::floor(idx));
                    const std::size_t hi_i = static_cast<std::size_t>(std::ceil(idx));
                    return (1.0 - (idx - lo_i)) * v[lo_i] + (idx - lo_i) * v[hi_i];
                };
                lo = q(0.025);
                hi = q(0.975);
            }
            cw.write_row({csv::format_int(curve[i].day), csv::format_double(curve[i].value),
                          fmt_or_empty(lo), fmt_or_empty(hi)});
        }
        cw.close();
    }

    // Risk-set-matching reference and baseline balance.
    const auto rsm = risk_set_match(cohort, cfg.windows, cfg.horizon);
    csv::Writer rw(cfg.out_dir + "/rsm.csv");
    rw.write_row({"window", "n_treated", "n_matched", "surv_treated", "surv_control", "diff"});
    for (const auto& row : rsm) {
        rw.write_row({csv::format_int(row.window), csv::format_int(row.n_treated),
                      csv::format_int(row.n_matched), fmt_or_empty(row.surv_treated),
                      fmt_or_empty(row.surv_control), fmt_or_empty(row.diff)});
    }
    rw.close();

    std::cout << "report: " << effects.size() << " effect rows written to " << cfg.out_dir << "\n";
    for (const auto& e : effects) {
        std::cout << "  " << e.window << " days: n1=" << e.n1 << " n0=" << e.n0_median << " "
                  << format_percent(e.surv_treated) << " vs " << format_percent(e.surv_control)
                  << " tau " << format_percent(e.tau_mean) << " [" << format_percent(e.tau_lo) << ", "
                  << format_percent(e.tau_hi) << "]\n";
    }
}

std::vector<RsmRow> cmd_rsm(const RunConfig& cfg) {
    cfg.validate();
    const Cohort cohort = load_configured_cohort(cfg);
    const auto rows = risk_set_match(cohort, cfg.windows, cfg.horizon);
    ensure_dir(cfg.out_dir);
    csv::Writer out(cfg.out_dir + "/rsm.csv");
    out.write_row({"window", "n_treated", "n_matched", "surv_treated", "surv_control", "diff"});
    for (const auto& row : rows) {
        out.write_row({csv::format_int(row.window), csv::format_int(row.n_treated),
                       csv::format_int(row.n_matched), fmt_or_empty(row.surv_treated),
                       fmt_or_empty(row.surv_control), fmt_or_empty(row.diff)});
        std::cout << row.window << " days: " << format_percent(row.surv_treated) << " vs "
                  << format_percent(row.surv_control) << " diff " << format_percent(row.diff) << "\n";
    }
    out.close();
    return rows;
}

void cmd_diagnose(const RunConfig& cfg) {
    cfg.validate();
    for (const int K : cfg.windows) {
        const std::string dir = window_dir(cfg, K);
        const PosteriorDraws draws = read_draws(dir, K);
        const DiagnosticsTable table = compute_diagnostics(draws);
        write_diagnostics(table, draws.chains.size(), dir + "/diagnostics.csv");
        double max_rhat = std::numeric_limits<double>::quiet_NaN();
        for (const double r : table.rhat) {
            if (std::isfinite(r)) max_rhat = std::isfinite(max_rhat) ? std::max(max_rhat, r) : r;
        }
        std::cout << "window " << K << ": ";
        if (std::isfinite(max_rhat)) {
            std::cout << "max R-hat " << max_rhat << "\n";
        } else {
            std::cout << "R-hat unavailable (single chain)\n";
        }
    }
}

}  // namespace indicate
