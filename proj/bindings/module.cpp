#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "indicate/cohort.hpp"
#include "indicate/diagnostics.hpp"
#include "indicate/errors.hpp"
#include "indicate/effects.hpp"
#include "indicate/matching.hpp"
#include "indicate/model.hpp"
#include "indicate/pipeline.hpp"
#include "indicate/sampler.hpp"
#include "indicate/spline.hpp"
#include "indicate/synth.hpp"

namespace py = pybind11;
using namespace indicate;

namespace {

std::optional<int> opt_from(py::object obj) {
    if (obj.is_none()) return std::nullopt;
    return obj.cast<int>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Causal inference for treatment-by-indication cohorts: latent first-hitting-time "
              "model, missing indication-time imputation, and effect estimation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<DiagnosticError>(m, "DiagnosticError", PyExc_RuntimeError);

    py::class_<Visit>(m, "Visit")
        .def(py::init([](int day, Eigen::VectorXd values) {
                 return Visit{day, std::move(values)};
             }),
             py::arg("day"), py::arg("values"))
        .def_readwrite("day", &Visit::day)
        .def_readwrite("values", &Visit::values);

    py::class_<CohortUnit>(m, "CohortUnit")
        .def(py::init<>())
        .def_readwrite("unit_id", &CohortUnit::unit_id)
        .def_readwrite("treated", &CohortUnit::treated)
        .def_readwrite("indication_day", &CohortUnit::indication_day)
        .def_readwrite("death_day", &CohortUnit::death_day)
        .def_readwrite("followup_end_day", &CohortUnit::followup_end_day)
        .def_readwrite("baseline", &CohortUnit::baseline)
        .def_readwrite("exogenous", &CohortUnit::exogenous)
        .def_readwrite("visits", &CohortUnit::visits)
        .def("calendar_entry", &CohortUnit::calendar_entry)
        .def("last_candidate_day", &CohortUnit::last_candidate_day, py::arg("K"))
        .def("__repr__", [](const CohortUnit& u) {
            return "<CohortUnit " + u.unit_id + (u.treated ? " treated>" : ">");
        });

    py::class_<Cohort>(m, "Cohort")
        .def(py::init<>())
        .def_readwrite("units", &Cohort::units)
        .def_readwrite("baseline_names", &Cohort::baseline_names)
        .def_readwrite("visit_names", &Cohort::visit_names)
        .def("__len__", [](const Cohort& c) { return c.units.size(); });

    py::class_<DailyPanel>(m, "DailyPanel")
        .def_readonly("unit_id", &DailyPanel::unit_id)
        .def_readonly("rows", &DailyPanel::rows);

    py::class_<Standardization>(m, "Standardization")
        .def_readonly("baseline_mean", &Standardization::baseline_mean)
        .def_readonly("baseline_sd", &Standardization::baseline_sd)
        .def_readonly("visit_mean", &Standardization::visit_mean)
        .def_readonly("visit_sd", &Standardization::visit_sd);

    m.def("validate_unit", &validate_unit, py::arg("unit"));
    m.def("load_cohort", &load_cohort, py::arg("units_file"), py::arg("visits_file"));
    m.def("write_cohort", &write_cohort, py::arg("cohort"), py::arg("units_file"), py::arg("visits_file"));
    m.def(
        "compute_standardization",
        [](const Cohort& cohort) { return compute_standardization(cohort.units); },
        py::arg("cohort"));
    m.def("build_panel", &build_panel, py::arg("unit"), py::arg("K"), py::arg("standardization"));
    m.def("design_matrix", &design_matrix, py::arg("unit"), py::arg("panel"), py::arg("standardization"));
    m.def(
        "eligibility_flag",
        [](py::object T, int K) { return eligibility_flag(opt_from(T), K); },
        py::arg("T"), py::arg("K"));

    // model core
    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("rho", &ModelParams::rho)
        .def_readwrite("beta", &ModelParams::beta)
        .def_readwrite("delta0", &ModelParams::delta0)
        .def_readwrite("delta1", &ModelParams::delta1)
        .def("validate", &ModelParams::validate);

    py::class_<PriorSpec>(m, "PriorSpec")
        .def(py::init<>())
        .def_static("defaults", &PriorSpec::defaults, py::arg("p"))
        .def_readwrite("rho_mean", &PriorSpec::rho_mean)
        .def_readwrite("rho_sd", &PriorSpec::rho_sd)
        .def_readwrite("beta_mean", &PriorSpec::beta_mean)
        .def_readwrite("beta_cov", &PriorSpec::beta_cov)
        .def_readwrite("delta0_mean", &PriorSpec::delta0_mean)
        .def_readwrite("delta0_sd", &PriorSpec::delta0_sd)
        .def_readwrite("delta1_gamma_shape", &PriorSpec::delta1_gamma_shape)
        .def_readwrite("delta1_gamma_rate", &PriorSpec::delta1_gamma_rate);

    m.def("indication_prob", &indication_prob, py::arg("theta_t"), py::arg("x_t"), py::arg("beta"));
    m.def(
        "hitting_time",
        [](const std::vector<std::uint8_t>& psi) -> py::object {
            const auto T = hitting_time(psi);
            if (!T) return py::none();
            return py::int_(*T);
        },
        py::arg("psi"));
    m.def("assignment_prob", &assignment_prob, py::arg("T"), py::arg("D"), py::arg("delta0"),
          py::arg("delta1"));

    py::class_<HittingPmf>(m, "HittingPmf")
        .def_readonly("day", &HittingPmf::day)
        .def_readonly("censored", &HittingPmf::censored)
        .def("total", &HittingPmf::total);
    m.def("hitting_pmf_given_path", &hitting_pmf_given_path, py::arg("theta"), py::arg("design"),
          py::arg("beta"), py::arg("K"));
    m.def(
        "unit_loglik",
        [](const CohortUnit& unit, const Eigen::MatrixXd& design, const ModelParams& params, int K,
           int mc_paths, std::uint64_t seed) {
            return unit_loglik(unit, design, params, K, mc_paths, seed);
        },
        py::arg("unit"), py::arg("design"), py::arg("params"), py::arg("K"), py::arg("mc_paths"),
        py::arg("seed"));

    // synthetic cohorts
    py::class_<GenParams>(m, "GenParams")
        .def(py::init<>())
        .def_static("defaults", &GenParams::defaults)
        .def_readwrite("n_baseline", &GenParams::n_baseline)
        .def_readwrite("n_visit", &GenParams::n_visit)
        .def_readwrite("model", &GenParams::model)
        .def_readwrite("probit_offset", &GenParams::probit_offset)
        .def_readwrite("outcome_base_logit", &GenParams::outcome_base_logit)
        .def_readwrite("outcome_treat_logit", &GenParams::outcome_treat_logit)
        .def_readwrite("outcome_health_logit", &GenParams::outcome_health_logit)
        .def_readwrite("background_death_hazard", &GenParams::background_death_hazard)
        .def_readwrite("calendar_span", &GenParams::calendar_span)
        .def_readwrite("short_followup_frac", &GenParams::short_followup_frac);

    py::class_<UnitTruth>(m, "UnitTruth")
        .def_readonly("unit_id", &UnitTruth::unit_id)
        .def_readonly("theta", &UnitTruth::theta)
        .def_readonly("T", &UnitTruth::T)
        .def_readonly("Z", &UnitTruth::Z)
        .def_readonly("y0", &UnitTruth::y0)
        .def_readonly("y1", &UnitTruth::y1);

    py::class_<TruthRecord>(m, "TruthRecord")
        .def_readonly("K", &TruthRecord::K)
        .def_readonly("units", &TruthRecord::units);

    m.def("generate_cohort", &generate_cohort, py::arg("n_units"), py::arg("K"), py::arg("params"),
          py::arg("seed"));
    m.def("true_ate", &true_ate, py::arg("truth"), py::arg("window"), py::arg("horizon") = 365);
    m.def("demo_dataset", &demo_dataset);

    // matching
    py::class_<BaselineSet>(m, "BaselineSet")
        .def(py::init([](std::vector<std::string> ids, Eigen::MatrixXd rows) {
                 return BaselineSet{std::move(ids), std::move(rows)};
             }),
             py::arg("ids"), py::arg("rows"))
        .def_readwrite("ids", &BaselineSet::ids)
        .def_readwrite("rows", &BaselineSet::rows);

    py::class_<MatchPair>(m, "MatchPair")
        .def_readonly("treated_id", &MatchPair::treated_id)
        .def_readonly("control_id", &MatchPair::control_id)
        .def_readonly("distance", &MatchPair::distance);

    py::class_<MatchResult>(m, "MatchResult")
        .def_readonly("pairs", &MatchResult::pairs)
        .def_readonly("pooled_covariance", &MatchResult::pooled_covariance)
        .def_readonly("covariance_inverse", &MatchResult::covariance_inverse)
        .def_readonly("retained_controls", &MatchResult::retained_controls);

    py::class_<BalanceRow>(m, "BalanceRow")
        .def_readonly("covariate", &BalanceRow::covariate)
        .def_readonly("mean_treated", &BalanceRow::mean_treated)
        .def_readonly("mean_control", &BalanceRow::mean_control)
        .def_readonly("smd", &BalanceRow::smd);

    m.def("mahalanobis", &mahalanobis, py::arg("x"), py::arg("y"), py::arg("cov_inv"));
    m.def("nn_match", &nn_match, py::arg("treated"), py::arg("controls"));
    m.def("balance_table", &balance_table, py::arg("names"), py::arg("treated"),
          py::arg("matched_controls"));

    // sampler
    py::class_<McmcConfig>(m, "McmcConfig")
        .def(py::init<>())
        .def_readwrite("n_chains", &McmcConfig::n_chains)
        .def_readwrite("n_iters", &McmcConfig::n_iters)
        .def_readwrite("burn_in", &McmcConfig::burn_in)
        .def_readwrite("thin", &McmcConfig::thin)
        .def_readwrite("seed", &McmcConfig::seed)
        .def_readwrite("study_window", &McmcConfig::study_window)
        .def_readwrite("delta0_step", &McmcConfig::delta0_step)
        .def_readwrite("delta1_step", &McmcConfig::delta1_step)
        .def_readwrite("threads", &McmcConfig::threads);

    py::class_<ChainDraws>(m, "ChainDraws")
        .def_readonly("iters", &ChainDraws::iters)
        .def_readonly("params", &ChainDraws::params)
        .def_property_readonly("t_mis",
                               [](const ChainDraws& c) {
                                   return Eigen::MatrixXi(c.t_mis.cast<int>());
                               })
        .def_property_readonly("n0", [](const ChainDraws& c) { return Eigen::VectorXi(c.n0); })
        .def_readonly("delta_accept_rate", &ChainDraws::delta_accept_rate);

    py::class_<PosteriorDraws>(m, "PosteriorDraws")
        .def_readonly("K", &PosteriorDraws::K)
        .def_readonly("beta_names", &PosteriorDraws::beta_names)
        .def_readonly("untreated_ids", &PosteriorDraws::untreated_ids)
        .def_readonly("chains", &PosteriorDraws::chains)
        .def("total_draws", &PosteriorDraws::total_draws);

    py::class_<FitData>(m, "FitData")
        .def_readonly("K", &FitData::K)
        .def_readonly("p", &FitData::p)
        .def_readonly("beta_names", &FitData::beta_names)
        .def_readonly("untreated_ids", &FitData::untreated_ids);

    m.def(
        "prepare_fit_data",
        [](const Cohort& cohort, const Standardization& st, int K) {
            return prepare_fit_data(cohort.units, st, K, cohort.baseline_names, cohort.visit_names);
        },
        py::arg("cohort"), py::arg("standardization"), py::arg("K"));
    m.def("run_chains",
          [](const FitData& fit, const McmcConfig& cfg, const PriorSpec& prior) {
              return run_chains(fit, cfg, prior);
          },
          py::arg("fit"), py::arg("config"), py::arg("prior"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<DicResult>(m, "DicResult")
        .def_readonly("dic", &DicResult::dic)
        .def_readonly("p_d", &DicResult::p_d)
        .def_readonly("d_bar", &DicResult::d_bar)
        .def_readonly("d_at_mean", &DicResult::d_at_mean)
        .def_readonly("n_draws_used", &DicResult::n_draws_used);
    m.def("dic", &dic, py::arg("draws"), py::arg("fit"), py::arg("mc_paths"), py::arg("seed"),
          py::arg("max_draws") = 0, py::call_guard<py::gil_scoped_release>());

    m.def("geweke_z", &geweke_z, py::arg("chain"), py::arg("frac_a") = 0.1, py::arg("frac_b") = 0.5);
    m.def("gelman_rubin", &gelman_rubin, py::arg("chains"));

    // effects
    py::enum_<SurvivalStatus>(m, "SurvivalStatus")
        .value("died", SurvivalStatus::died)
        .value("survived", SurvivalStatus::survived)
        .value("indeterminate", SurvivalStatus::indeterminate);
    m.def("survival_outcome", &survival_outcome, py::arg("unit"), py::arg("T"),
          py::arg("horizon") = 365);

    py::class_<EffectEstimate>(m, "EffectEstimate")
        .def_readonly("window", &EffectEstimate::window)
        .def_readonly("n1", &EffectEstimate::n1)
        .def_readonly("n0_median", &EffectEstimate::n0_median)
        .def_readonly("n0_lo", &EffectEstimate::n0_lo)
        .def_readonly("n0_hi", &EffectEstimate::n0_hi)
        .def_readonly("surv_treated", &EffectEstimate::surv_treated)
        .def_readonly("surv_control", &EffectEstimate::surv_control)
        .def_readonly("tau_mean", &EffectEstimate::tau_mean)
        .def_readonly("tau_median", &EffectEstimate::tau_median)
        .def_readonly("tau_lo", &EffectEstimate::tau_lo)
        .def_readonly("tau_hi", &EffectEstimate::tau_hi)
        .def_readonly("n_draws", &EffectEstimate::n_draws)
        .def_readonly("n_empty_draws", &EffectEstimate::n_empty_draws)
        .def_readonly("rmst_treated", &EffectEstimate::rmst_treated)
        .def_readonly("rmst_control", &EffectEstimate::rmst_control)
        .def_readonly("rmst_diff", &EffectEstimate::rmst_diff)
        .def_readonly("tau_draws", &EffectEstimate::tau_draws);

    m.def("estimate_ate", &estimate_ate, py::arg("draws"), py::arg("cohort"), py::arg("K"),
          py::arg("horizon") = 365);
    m.def("estimate_cate", &estimate_cate, py::arg("draws"), py::arg("cohort"), py::arg("lo"),
          py::arg("hi"), py::arg("horizon") = 365);

    py::class_<RsmRow>(m, "RsmRow")
        .def_readonly("window", &RsmRow::window)
        .def_readonly("n_treated", &RsmRow::n_treated)
        .def_readonly("n_matched", &RsmRow::n_matched)
        .def_readonly("surv_treated", &RsmRow::surv_treated)
        .def_readonly("surv_control", &RsmRow::surv_control)
        .def_readonly("diff", &RsmRow::diff);
    m.def("risk_set_match", &risk_set_match, py::arg("cohort"), py::arg("windows"),
          py::arg("horizon") = 365);

    py::class_<SmoothingSpline>(m, "SmoothingSpline")
        .def_static("fit", &SmoothingSpline::fit, py::arg("x"), py::arg("y"), py::arg("lambda"))
        .def("__call__", &SmoothingSpline::operator(), py::arg("t"))
        .def_property_readonly("knots", &SmoothingSpline::knots)
        .def_property_readonly("fitted", &SmoothingSpline::fitted);

    py::class_<CurvePoint>(m, "CurvePoint")
        .def_readonly("day", &CurvePoint::day)
        .def_readonly("value", &CurvePoint::value);
    m.def("smooth_curve", &smooth_curve, py::arg("points"), py::arg("lambda"));
}
