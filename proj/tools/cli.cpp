#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>

#include "onlinecp/dataset.hpp"
#include "onlinecp/diagnostics.hpp"
#include "onlinecp/error.hpp"
#include "onlinecp/protocol.hpp"

namespace onlinecp::cli {

namespace {

struct GenerateArgs {
  std::string out;
  std::size_t k = 100;
  std::size_t n = 600;
  std::uint64_t seed = 0;
};

struct RunArgs {
  std::string data;
  std::string predictor = "iid";
  std::vector<double> eps{0.05, 0.01, 0.005};
  bool smoothed = false;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 1000;
  std::optional<std::size_t> threshold;
  double ridge = 0.01;
  std::string out;
};

struct ValidateArgs {
  std::string data;
  bool synthetic = false;
  std::string predictor = "gauss";
  std::size_t seeds = 20;
  double eps = 0.05;
  bool smoothed = true;
  std::size_t mc_samples = 1000;
};

struct ReportArgs {
  std::string ledger;
  std::string out;
};

FeatureSchedule schedule_for(std::size_t features, const RunArgs& a) {
  FeatureSchedule s = FeatureSchedule::defaults(features);
  if (a.threshold) s.threshold = *a.threshold;
  s.ridge = a.ridge;
  s.validate();
  return s;
}

void progress_to(std::ostream& err, std::size_t step, std::size_t total) {
  if (step % 100 == 0 || step == total) err << "  step " << step << '/' << total << '\n';
}

int cmd_generate(const GenerateArgs& a, std::ostream& err) {
  SyntheticSpec spec;
  spec.features = a.k;
  spec.observations = a.n;
  spec.seed = a.seed;
  const auto stream = generate(spec);
  write_stream(a.out, stream, a.k);
  err << "wrote " << stream.size() << " observations with " << a.k << " features to " << a.out
      << '\n';
  return kOk;
}

int cmd_run(const RunArgs& a, std::ostream& err) {
  RunConfig config;
  config.predictor = parse_predictor_kind(a.predictor);
  config.epsilons = a.eps;
  config.smoothed = a.smoothed;
  config.seed = a.seed;
  config.mc_samples = a.mc_samples;
  config.validate();
  if (a.ridge <= 0.0) throw UsageError("--ridge must be positive");

  const auto stream = read_stream(a.data);
  if (!stream.empty()) config.schedule = schedule_for(stream_dimension(stream), a);
  err << "running " << a.predictor << " on " << stream.size() << " observations\n";
  const auto result = run_online(config, stream, [&](std::size_t step, std::size_t total) {
    progress_to(err, step, total);
  });
  write_ledger(a.out, result.ledger);
  err << "wrote ledger to " << a.out << '\n';
  return kOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.seeds == 0) throw UsageError("--seeds must be positive");
  if (a.synthetic == !a.data.empty()) throw UsageError("give exactly one of --data and --synthetic");
  SignificanceLevel{a.eps};
  const PredictorKind kind = parse_predictor_kind(a.predictor);

  std::vector<Observation> fixed;
  if (!a.synthetic) fixed = read_stream(a.data);

  std::size_t uniform_pass = 0, independence_pass = 0, frequency_pass = 0;
  std::size_t uniform_applicable = 0, independence_applicable = 0;
  for (std::size_t s = 0; s < a.seeds; ++s) {
    std::vector<Observation> synthetic;
    if (a.synthetic) {
      SyntheticSpec spec;
      spec.features = 2;
      spec.observations = 1000;
      spec.seed = derive_seed(s, 7);
      synthetic = generate(spec);
    }
    const auto& stream = a.synthetic ? synthetic : fixed;
    if (stream.empty()) throw DataError("no observations to validate on");

    RunConfig config;
    config.predictor = kind;
    config.epsilons = {a.eps};
    config.smoothed = a.smoothed;
    config.seed = s;
    config.mc_samples = a.mc_samples;
    const auto result = run_online(config, stream);
    const auto predictor = make_predictor(kind, result.features);
    const std::size_t from = predictor->validity_start(a.eps);
    const std::size_t n = result.ledger.steps();

    const auto uni = uniformity_test(result.trace);
    const auto ind = independence_test(error_sequence(result.ledger, a.eps, from));
    const auto freq = error_frequency_check(result.ledger, a.eps, n, from);
    if (uni.outcome != TestOutcome::inapplicable) ++uniform_applicable;
    if (uni.outcome == TestOutcome::pass) ++uniform_pass;
    if (ind.outcome != TestOutcome::inapplicable) ++independence_applicable;
    if (ind.outcome == TestOutcome::pass) ++independence_pass;
    if (freq.passed) ++frequency_pass;

    out << "seed " << s << ": uniformity " << to_string(uni.outcome) << " (D=" << uni.ks.statistic
        << "), independence " << to_string(ind.outcome) << " (r1=" << ind.autocorrelation
        << ", runs z=" << ind.runs_z << "), frequency " << (freq.passed ? "pass" : "fail") << " ("
        << freq.errors << '/' << freq.trials << " in [" << freq.lower << ", " << freq.upper
        << "])\n";
    err << "  seed " << s + 1 << '/' << a.seeds << " done\n";
  }

  const std::size_t need = a.seeds - a.seeds / 20;
  const auto verdict = [&](std::size_t passes, std::size_t applicable) -> std::string {
    if (applicable == 0) return "inapplicable";
    return passes >= need ? "pass" : "fail";
  };
  const std::string u = verdict(uniform_pass, uniform_applicable);
  const std::string i = verdict(independence_pass, independence_applicable);
  const std::string f = verdict(frequency_pass, a.seeds);
  out << "uniformity: " << uniform_pass << '/' << a.seeds << ' ' << u << '\n';
  out << "independence: " << independence_pass << '/' << a.seeds << ' ' << i << '\n';
  out << "frequency: " << frequency_pass << '/' << a.seeds << ' ' << f << '\n';
  const bool ok = u != "fail" && i != "fail" && f != "fail";
  out << "overall: " << (ok ? "pass" : "fail") << '\n';
  return kOk;
}

int cmd_report(const ReportArgs& a, std::ostream& err) {
  const auto ledger = read_ledger(a.ledger);
  write_plot_data(a.out, ledger);
  for (double eps : ledger.epsilons()) {
    const auto first = first_finite_median_step(ledger, eps);
    err << "eps " << format_epsilon(eps) << ": first finite median at "
        << (first ? std::to_string(*first) : std::string("none")) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"On-line conformal prediction for linear regression"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic linear-regression dataset");
  generate_cmd->add_option("--out", gen.out, "Output CSV")->required();
  generate_cmd->add_option("--k", gen.k, "Number of explanatory variables")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("--n", gen.n, "Number of observations");
  generate_cmd->add_option("--seed", gen.seed, "Random seed");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a predictor on-line and write its ledger");
  run_cmd->add_option("--data", run_args.data, "Observation CSV")->required();
  run_cmd->add_option("--predictor", run_args.predictor, "iid, gauss, mva, iid-gauss or wilks");
  run_cmd->add_option("--eps", run_args.eps, "Significance levels, decreasing")->delimiter(',');
  run_cmd->add_option("--smoothed", run_args.smoothed, "Smoothed p-values (true/false)");
  run_cmd->add_option("--seed", run_args.seed, "Seed for smoothing and Monte Carlo");
  run_cmd->add_option("--mc-samples", run_args.mc_samples, "Monte Carlo draws (iid-gauss)");
  run_cmd->add_option("--schedule-threshold", run_args.threshold,
                      "First step using all features (default K + 3)");
  run_cmd->add_option("--ridge", run_args.ridge, "Ridge coefficient");
  run_cmd->add_option("--out", run_args.out, "Ledger CSV")->required();

  ValidateArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "Check validity over seed replicates");
  auto* data_opt = validate_cmd->add_option("--data", val.data, "Observation CSV");
  auto* synthetic_opt =
      validate_cmd->add_flag("--synthetic", val.synthetic, "Fresh K = 2, n = 1000 data per seed");
  data_opt->excludes(synthetic_opt);
  validate_cmd->add_option("--predictor", val.predictor, "Predictor name");
  validate_cmd->add_option("--seeds", val.seeds, "Number of replicates");
  validate_cmd->add_option("--eps", val.eps, "Significance level");
  validate_cmd->add_option("--smoothed", val.smoothed, "Smoothed p-values (true/false)");
  validate_cmd->add_option("--mc-samples", val.mc_samples, "Monte Carlo draws (iid-gauss)");

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Write plot data from a ledger");
  report_cmd->add_option("--ledger", rep.ledger, "Ledger CSV")->required();
  report_cmd->add_option("--out", rep.out, "Plot data file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen, err);
    if (run_cmd->parsed()) return cmd_run(run_args, err);
    if (validate_cmd->parsed()) return cmd_validate(val, out, err);
    if (report_cmd->parsed()) return cmd_report(rep, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace onlinecp::cli
