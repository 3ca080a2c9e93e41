// Command-line front end: single-batch estimates, closed-form moments, and the
// Monte Carlo sweeps, emitting CSV or JSON tables.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isus/isus.hpp"

namespace {

using namespace isus;

struct CvSpec {
  enum class Kind { None, Value, SamplingMean } kind = Kind::None;
  double value = 0.0;
};

CvSpec parse_cv(const std::string& s) {
  if (s == "none") return {};
  if (s == "sampling-mean") return {CvSpec::Kind::SamplingMean, 0.0};
  if (s.rfind("value:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(6), &used);
      if (used == s.size() - 6) return {CvSpec::Kind::Value, v};
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("--cv expects none, value:<real> or sampling-mean, got '" + s + "'");
}

/// E_g[h] by Simpson quadrature over each interval of g's support.
double sampling_mean(const EstimationProblem& p) {
  const auto support = p.sampling.support_intervals();
  if (!support) throw ConfigError("sampling-mean control variate needs an analytic sampling density");
  double total = 0.0;
  for (const auto& part : support->parts()) {
    total += simpson([&](double x) { return p.sampling.pdf(x) * p.evaluation(x); }, part.lo,
                     part.hi, 200000);
  }
  return total;
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
}

struct Common {
  std::uint64_t seed = 20170204;
  std::string out = "-";
  std::string format = "csv";
  double delta = 0.1;
  std::string cv = "none";
  unsigned threads = 0;
};

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output path ('-' for stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string config;
  double f_max = 1.0;
  double theta = 1.0;
  std::size_t n = 100;
};

void run_estimate(const EstimateArgs& a, const Common& c) {
  const auto problem = a.config.empty() ? illustrative_problem(a.f_max, a.theta)
                                        : problem_from_json(load_json_file(a.config));
  const auto spec = parse_cv(c.cv);
  ControlVariate cv;
  if (spec.kind == CvSpec::Kind::Value) cv.t = spec.value;
  if (spec.kind == CvSpec::Kind::SamplingMean) cv.t = sampling_mean(problem);

  auto stream = RandomStream(c.seed);
  const auto batch = draw(problem.sampling, stream, a.n);
  const auto is = is_estimate(problem, batch, cv);
  const auto us = us_estimate(problem, batch, cv);
  const auto us_hat = us_estimate_empirical_c(problem, batch);
  const auto wis = wis_estimate(problem, batch, cv);
  const std::size_t k = count_in_c(problem, batch);
  const double c_hat = static_cast<double>(k) / static_cast<double>(batch.n());

  auto value_or_nan = [](const EstimateResult& r) { return r.defined ? r.value : std::nan(""); };
  if (c.format == "json") {
    nlohmann::json j = {{"n", batch.n()},
                        {"seed", c.seed},
                        {"k", k},
                        {"c", problem.pruning.mass()},
                        {"c_hat", c_hat},
                        {"t", cv.t},
                        {"is", is.value},
                        {"us", detail::real_to_json(value_or_nan(us))},
                        {"us_defined", us.defined},
                        {"us_empirical_c", detail::real_to_json(value_or_nan(us_hat))},
                        {"wis", detail::real_to_json(value_or_nan(wis))},
                        {"wis_defined", wis.defined}};
    write_text(j.dump(2) + "\n", c.out);
    return;
  }
  std::string text = "n,seed,k,c,c_hat,t,is,us,us_defined,us_empirical_c,wis,wis_defined\n";
  text += std::to_string(batch.n()) + "," + std::to_string(c.seed) + "," + std::to_string(k) +
          "," + format_real(problem.pruning.mass()) + "," + format_real(c_hat) + "," +
          format_real(cv.t) + "," + format_real(is.value) + "," + format_real(value_or_nan(us)) +
          "," + (us.defined ? "1" : "0") + "," + format_real(value_or_nan(us_hat)) + "," +
          format_real(value_or_nan(wis)) + "," + (wis.defined ? "1" : "0") + "\n";
  write_text(text, c.out);
}

// ---------------------------------------------------------------------------

struct MomentsArgs {
  std::size_t n = 50;
  std::optional<double> c;
  std::optional<double> f_max;
  std::optional<double> v;
  double theta = 0.0;
  std::optional<std::size_t> kappa;
};

void run_moments(const MomentsArgs& a, const Common& common) {
  double c = 1.0;
  double v = 0.0;
  if (a.f_max) {
    const auto p = illustrative_params(*a.f_max, a.theta);
    c = p.c;
    v = p.v;
  }
  if (a.c) c = *a.c;
  if (a.v) v = *a.v;
  if (!a.f_max && (!a.c || !a.v)) throw ConfigError("moments needs --f-max or both --c and --v");

  MomentInputs in{a.n, c, v, a.theta, std::nullopt};
  std::vector<MomentReport> reports;
  for (auto est : {Estimator::IS, Estimator::US}) {
    for (auto reg : {Regime::Unconditional, Regime::PositiveCount}) {
      reports.push_back(moment_report(est, reg, in));
    }
  }
  if (a.kappa) {
    MomentInputs exact = in;
    exact.kappa = a.kappa;
    for (auto est : {Estimator::IS, Estimator::US}) {
      reports.push_back(moment_report(est, Regime::ExactCount, exact));
    }
  }

  const double r = rho(a.n, c);
  const double inv_k = binom_inv_moment(a.n, c);
  const bool beats = us_beats_is(a.n, c);
  const double margin = count_variance_margin(a.n, c);

  if (common.format == "json") {
    nlohmann::json j = {{"n", a.n},           {"c", c},
                        {"v", v},             {"theta", a.theta},
                        {"rho", r},           {"inv_kappa_moment", inv_k},
                        {"us_beats_is", beats}, {"count_variance_margin", margin},
                        {"reports", reports}};
    if (a.kappa) j["kappa"] = *a.kappa;
    write_text(j.dump(2) + "\n", common.out);
    return;
  }
  std::string text = "# n=" + std::to_string(a.n) + " c=" + format_real(c) +
                     " v=" + format_real(v) + " theta=" + format_real(a.theta) +
                     " rho=" + format_real(r) + " inv_kappa_moment=" + format_real(inv_k) +
                     " us_beats_is=" + (beats ? "true" : "false") +
                     " count_variance_margin=" + format_real(margin) + "\n";
  text += "estimator,regime,mean,bias,variance,mse\n";
  for (const auto& m : reports) {
    text += std::string(to_string(m.estimator)) + "," + std::string(to_string(m.regime)) + "," +
            format_real(m.mean) + "," + format_real(m.bias) + "," +
            (m.variance ? format_real(*m.variance) : "") + "," +
            (m.mse ? format_real(*m.mse) : "") + "\n";
  }
  write_text(text, common.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IS, US and WIS estimators: closed-form moments, bounds and sweeps"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "Master RNG seed");
    cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
    add_output_flags(cmd, common);
  };

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Draw one batch and print IS, US and WIS");
  add_common(estimate);
  estimate->add_option("--config", est.config, "Problem configuration (JSON)");
  estimate->add_option("--f-max", est.f_max, "Illustrative example: target support [0, f_max]");
  estimate->add_option("--theta", est.theta, "Illustrative example: true value");
  estimate->add_option("--n", est.n, "Batch size")->check(CLI::PositiveNumber);
  estimate->add_option("--cv", common.cv, "Control variate: none | value:<real> | sampling-mean");

  MomentsArgs mom;
  auto* moments = app.add_subcommand("moments", "Closed-form means, variances and MSEs");
  add_common(moments);
  moments->add_option("--n", mom.n, "Sample count")->check(CLI::PositiveNumber);
  moments->add_option("--c", mom.c, "Mass of C under the sampling distribution");
  moments->add_option("--v", mom.v, "Conditional single-sample variance given C");
  moments->add_option("--f-max", mom.f_max, "Take c and v from the illustrative example");
  moments->add_option("--theta", mom.theta, "True value");
  moments->add_option("--kappa", mom.kappa, "Also report the k = kappa regime");

  std::vector<double> f_max_grid = default_f_max_grid();
  std::vector<double> theta_grid = {0.0, 1.0, 10.0};
  std::vector<std::size_t> n_grid = {5, 10, 50};
  auto* sweep_ill =
      app.add_subcommand("sweep-illustrative", "Analytic vs empirical moments over a grid");
  add_common(sweep_ill);
  std::size_t ill_trials = 200000;
  sweep_ill->add_option("--trials", ill_trials, "Trials per grid point");
  sweep_ill->add_option("--f-max", f_max_grid, "f_max grid")->delimiter(',');
  sweep_ill->add_option("--theta", theta_grid, "theta grid")->delimiter(',');
  sweep_ill->add_option("--n", n_grid, "n grid")->delimiter(',');

  std::vector<double> cr_min_grid = default_cr_min_grid();
  std::size_t treatment_n = 30;
  auto* sweep_tr = app.add_subcommand("sweep-treatment", "Synthetic treatment-policy study");
  add_common(sweep_tr);
  std::size_t tr_trials = 200000;
  sweep_tr->add_option("--trials", tr_trials, "Trials per CR_min");
  sweep_tr->add_option("--cr-min", cr_min_grid, "CR_min grid")->delimiter(',');
  sweep_tr->add_option("--n", treatment_n, "Days per trial")->check(CLI::PositiveNumber);
  sweep_tr->add_option("--cv", common.cv, "Control variate: none | sampling-mean");

  double bounds_f_max = 0.5;
  std::vector<std::size_t> bounds_n = {5, 10, 20, 30, 50, 100, 200};
  std::string split = "halved";
  auto* bounds = app.add_subcommand("bounds", "Mean Hoeffding intervals for IS and US");
  add_common(bounds);
  bounds->add_option("--f-max", bounds_f_max, "Target support [0, f_max]");
  bounds->add_option("--n", bounds_n, "n grid")->delimiter(',');
  bounds->add_option("--delta", common.delta, "Interval miss probability");
  std::size_t bounds_trials = 10000;
  bounds->add_option("--trials", bounds_trials, "Trials per n");
  bounds->add_option("--split", split, "halved: delta/2 per side; per-side: delta per side")
      ->check(CLI::IsMember({"halved", "per-side"}));

  double cov_f_max = 1.0;
  std::vector<std::size_t> cov_n = {10, 50};
  auto* cov = app.add_subcommand("coverage", "Empirical coverage of one-sided lower bounds");
  add_common(cov);
  cov->add_option("--f-max", cov_f_max, "Target support [0, f_max]");
  cov->add_option("--n", cov_n, "n grid")->delimiter(',');
  cov->add_option("--delta", common.delta, "Bound miss probability");
  std::size_t cov_trials = 10000;
  cov->add_option("--trials", cov_trials, "Trials per n");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto format = parse_format(common.format);
    if (estimate->parsed()) {
      run_estimate(est, common);
    } else if (moments->parsed()) {
      run_moments(mom, common);
    } else if (sweep_ill->parsed()) {
      emit(sweep_illustrative(f_max_grid, theta_grid, n_grid, ill_trials, common.seed,
                              common.threads),
           format, common.out);
    } else if (sweep_tr->parsed()) {
      const auto spec = parse_cv(common.cv);
      if (spec.kind == CvSpec::Kind::Value) {
        throw ConfigError("sweep-treatment supports --cv none or sampling-mean");
      }
      const auto mode = spec.kind == CvSpec::Kind::SamplingMean ? CvMode::SamplingMean : CvMode::None;
      emit(sweep_treatment_surrogate(cr_min_grid, treatment_n, tr_trials, mode, common.seed,
                                     {}, common.threads),
           format, common.out);
    } else if (bounds->parsed()) {
      emit(sweep_bounds(bounds_f_max, bounds_n, common.delta, bounds_trials, common.seed,
                        split == "halved" ? DeltaSplit::Halved : DeltaSplit::PerSide,
                        common.threads),
           format, common.out);
    } else if (cov->parsed()) {
      std::vector<CoverageRow> rows;
      for (std::size_t i = 0; i < cov_n.size(); ++i) {
        rows.push_back(coverage(cov_f_max, cov_n[i], common.delta, cov_trials,
                                splitmix64(common.seed ^ splitmix64(i)), common.threads));
      }
      emit(rows, format, common.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "isus: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
