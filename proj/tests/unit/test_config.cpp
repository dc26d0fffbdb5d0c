#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "indicate/config.hpp"
#include "indicate/errors.hpp"

using namespace indicate;

TEST_CASE("defaults follow the study protocol") {
    const RunConfig cfg;
    CHECK(cfg.windows == std::vector<int>({14, 30, 60, 90, 120, 180, 270, 365}));
    CHECK(cfg.mcmc.n_chains == 4);
    CHECK(cfg.mcmc.n_iters == 20000);
    CHECK(cfg.mcmc.burn_in == 5000);
    CHECK(cfg.horizon == 365);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parses keys, lists, and comments") {
    const std::string text =
        "# run setup\n"
        "units_file = data/u.csv\n"
        "windows = 7, 14, 28   # short windows\n"
        "chains = 2\n"
        "iterations = 400\n"
        "burn_in = 100\n"
        "seed = 99\n"
        "baseline_covariates = x0_1, x0_3\n"
        "spline_lambda = 12.5\n"
        "skip_matching = true\n"
        "\n";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.units_file == "data/u.csv");
    CHECK(cfg.windows == std::vector<int>({7, 14, 28}));
    CHECK(cfg.mcmc.n_chains == 2);
    CHECK(cfg.mcmc.n_iters == 400);
    CHECK(cfg.mcmc.seed == 99);
    CHECK(cfg.baseline_covariates == std::vector<std::string>({"x0_1", "x0_3"}));
    CHECK(cfg.spline_lambda == doctest::Approx(12.5));
    CHECK(cfg.skip_matching);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("rejects malformed input") {
    CHECK_THROWS_AS(parse_config_text("windows 14"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("unknown_key = 3"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("chains = two"), ValidationError);

    RunConfig cfg = parse_config_text("windows = 30, 14");
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = parse_config_text("windows = 14, 14");
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = parse_config_text("burn_in = 500\niterations = 400");
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("prior construction is isotropic over the covariate blocks") {
    RunConfig cfg;
    cfg.beta_prior_sd = 3.0;
    const PriorSpec prior = cfg.prior(4);
    CHECK(prior.beta_mean.size() == 4);
    CHECK(prior.beta_cov(2, 2) == doctest::Approx(9.0));
    CHECK(prior.beta_cov(0, 1) == 0.0);
    CHECK_NOTHROW(prior.validate());
}
