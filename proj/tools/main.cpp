#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "indicate/errors.hpp"
#include "indicate/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitConvergence = 5;

struct GlobalFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> chains;
    bool allow_unconverged = false;
    bool skip_matching = false;
};

indicate::RunConfig resolve_config(const GlobalFlags& flags) {
    indicate::RunConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = indicate::parse_config_file(flags.config_path);
    }
    if (flags.seed) cfg.mcmc.seed = *flags.seed;
    if (flags.threads) cfg.mcmc.threads = *flags.threads;
    if (flags.chains) cfg.mcmc.n_chains = *flags.chains;
    if (flags.skip_matching) cfg.skip_matching = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal inference for treatment-by-indication cohorts: infers missing indication "
                 "times under a latent first-hitting-time model and estimates treatment effects"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "Path to a key = value configuration file");
    app.add_option("--seed", flags.seed, "Override the configured RNG seed");
    app.add_option("--threads", flags.threads, "Cap on worker threads for parallel chains");
    app.add_option("--chains", flags.chains, "Override the configured chain count");
    app.add_flag("--allow-unconverged", flags.allow_unconverged,
                 "Do not fail the fit when R-hat exceeds 1.1");
    app.add_flag("--skip-matching", flags.skip_matching,
                 "Fit on the full cohort instead of the matched pool");

    const auto add_sub = [&](const char* name, const char* desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->fallthrough();  // global flags may follow the subcommand
        return sub;
    };
    auto* simulate = add_sub("simulate", "Write a synthetic cohort with ground truth");
    auto* validate = add_sub("validate", "Load and validate the configured cohort");
    auto* match = add_sub("match", "Select the potential-control pool by baseline matching");
    auto* fit = add_sub("fit", "Run the MCMC sampler for every study window");
    auto* report = add_sub("report", "Turn stored draws into effect tables and curves");
    auto* rsm = add_sub("rsm", "Risk-set-matching reference estimates");
    auto* diagnose = add_sub("diagnose", "Recompute convergence diagnostics from stored draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        const indicate::RunConfig cfg = resolve_config(flags);
        if (simulate->parsed()) {
            indicate::cmd_simulate(cfg);
        } else if (validate->parsed()) {
            indicate::cmd_validate(cfg);
        } else if (match->parsed()) {
            indicate::cmd_match(cfg);
        } else if (fit->parsed()) {
            const auto summary = indicate::cmd_fit(cfg);
            if (summary.rhat_available && !summary.converged && !flags.allow_unconverged) {
                std::cerr << "fit did not converge: max R-hat " << summary.max_rhat
                          << " > 1.1 (rerun longer or pass --allow-unconverged)\n";
                return kExitConvergence;
            }
        } else if (report->parsed()) {
            indicate::cmd_report(cfg);
        } else if (rsm->parsed()) {
            indicate::cmd_rsm(cfg);
        } else if (diagnose->parsed()) {
            indicate::cmd_diagnose(cfg);
        }
    } catch (const indicate::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const indicate::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const indicate::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const indicate::DiagnosticError& e) {
        std::cerr << "diagnostic failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
