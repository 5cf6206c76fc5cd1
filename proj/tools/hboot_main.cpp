// Command-line front end: ci / normalize / coverage / chart over CSV or
// JSON datasets. Exit codes: 0 success, 1 validation error, 2 I/O error,
// 3 infeasible configuration.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hboot/hboot.hpp"

namespace {

struct CommonArgs {
  std::string input;
  std::string input_kind = "auto";  // auto | h | profiles
  std::string norms;
  std::string output;  // empty = stdout
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::size_t b = 1000;
  std::vector<double> levels{0.90, 0.95};
  std::vector<std::string> methods{"nb", "bb", "pb", "bca"};
  std::string stat = "both";
  bool accelerate = false;
  std::size_t threads = 1;
  bool no_total = false;
};

void add_common_options(CLI::App* cmd, CommonArgs& args, bool with_intervals) {
  cmd->add_option("--input", args.input, "input dataset (CSV or .json)")->required();
  cmd->add_option("--input-kind", args.input_kind, "input row format: auto, h, profiles")
      ->check(CLI::IsMember({"auto", "h", "profiles"}));
  cmd->add_option("--norms", args.norms, "per-field norms CSV");
  cmd->add_option("--output", args.output, "output path (default: stdout)");
  cmd->add_option("--format", args.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", args.seed, "master seed (default 0)");
  cmd->add_option("--b", args.b, "number of bootstrap samples B (default 1000)");
  if (with_intervals) {
    cmd->add_option("--levels", args.levels, "confidence levels in (0,1)")->expected(-1);
    cmd->add_option("--methods", args.methods, "interval methods: nb bb pb bca")->expected(-1);
    cmd->add_option("--stat", args.stat, "statistic: mean, median or both")
        ->check(CLI::IsMember({"mean", "median", "both"}));
    cmd->add_flag("--accelerate", args.accelerate,
                  "use the jackknife acceleration constant in BCa");
    cmd->add_flag("--no-total", args.no_total, "omit the pooled TOTAL row");
  }
  cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
}

hboot::Dataset load_input(const CommonArgs& args) {
  hboot::DatasetKind kind = hboot::DatasetKind::h_values;
  if (args.input_kind == "profiles") {
    kind = hboot::DatasetKind::citation_profiles;
  } else if (args.input_kind == "auto") {
    kind = hboot::detect_dataset_kind(args.input);
  }
  hboot::Dataset ds = hboot::load_dataset(args.input, kind);
  if (!args.norms.empty()) hboot::attach_norms(ds, args.norms);
  return ds;
}

hboot::RunOptions make_options(const CommonArgs& args) {
  hboot::RunOptions opt;
  opt.b = args.b;
  opt.seed = args.seed;
  opt.levels = args.levels;
  std::sort(opt.levels.begin(), opt.levels.end());
  opt.levels.erase(std::unique(opt.levels.begin(), opt.levels.end()), opt.levels.end());

  opt.methods.clear();
  for (const std::string& name : args.methods) {
    const hboot::IntervalMethod m = hboot::interval_method_from_name(name);
    if (std::find(opt.methods.begin(), opt.methods.end(), m) == opt.methods.end()) {
      opt.methods.push_back(m);
    }
  }
  std::sort(opt.methods.begin(), opt.methods.end());  // canonical NB, BB, PB, BCa order

  opt.statistics.clear();
  if (args.stat == "mean" || args.stat == "both") {
    opt.statistics.push_back(hboot::StatisticKind::mean);
  }
  if (args.stat == "median" || args.stat == "both") {
    opt.statistics.push_back(hboot::StatisticKind::median);
  }
  opt.accelerate = args.accelerate;
  opt.threads = args.threads;
  opt.include_total = !args.no_total;
  return opt;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    hboot::write_file_atomic(output, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bootstrap confidence intervals for h-index samples"};
  app.require_subcommand(1);

  CommonArgs ci_args;
  auto* ci_cmd = app.add_subcommand("ci", "per-field bootstrap confidence intervals");
  add_common_options(ci_cmd, ci_args, true);

  CommonArgs norm_args;
  std::string norm_kind;
  auto* norm_cmd = app.add_subcommand("normalize", "apply a field normalization to a dataset");
  add_common_options(norm_cmd, norm_args, false);
  norm_cmd->add_option("--kind", norm_kind, "normalization: iglesias, n-index or generalized")
      ->required()
      ->check(CLI::IsMember({"iglesias", "n-index", "generalized"}));

  CommonArgs cov_args;
  std::size_t cov_reps = 2000;
  std::size_t cov_sample_size = 0;
  auto* cov_cmd = app.add_subcommand("coverage", "observed coverage of the interval methods");
  add_common_options(cov_cmd, cov_args, true);
  cov_cmd->add_option("--reps", cov_reps, "outer Monte Carlo replications M (default 2000)");
  cov_cmd->add_option("--sample-size", cov_sample_size,
                      "per-draw sample size n (default: each field's own size)");

  CommonArgs chart_args;
  std::string chart_method = "bb";
  double chart_level = 0.90;
  auto* chart_cmd = app.add_subcommand("chart", "SVG interval chart for one method and level");
  add_common_options(chart_cmd, chart_args, false);
  chart_cmd->add_option("--method", chart_method, "interval method: nb, bb, pb or bca");
  chart_cmd->add_option("--level", chart_level, "confidence level (default 0.90)");
  chart_cmd->add_option("--stat", chart_args.stat, "statistic: mean or median")
      ->check(CLI::IsMember({"mean", "median"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (ci_cmd->parsed()) {
      const hboot::Dataset ds = load_input(ci_args);
      const hboot::CiReport report = run_ci(ds, make_options(ci_args));
      emit(ci_args.output, ci_args.format == "json" ? hboot::render_ci_json(report)
                                                    : hboot::render_ci_csv(report));
    } else if (norm_cmd->parsed()) {
      const hboot::Dataset ds = load_input(norm_args);
      hboot::IndexKind target = hboot::IndexKind::normalized_h;
      if (norm_kind == "n-index") target = hboot::IndexKind::n_index;
      if (norm_kind == "generalized") target = hboot::IndexKind::generalized_h;
      const hboot::Dataset out = hboot::run_normalize(ds, target);
      emit(norm_args.output, norm_args.format == "json" ? hboot::serialize_dataset_json(out)
                                                        : hboot::serialize_dataset_csv(out));
    } else if (cov_cmd->parsed()) {
      const hboot::Dataset ds = load_input(cov_args);
      hboot::RunOptions opt = make_options(cov_args);
      opt.coverage_reps = cov_reps;
      opt.coverage_sample_size = cov_sample_size;
      const std::vector<hboot::CoverageReport> reports = run_coverage_all(ds, opt);
      emit(cov_args.output, cov_args.format == "json"
                                ? hboot::render_coverage_json(reports)
                                : hboot::render_coverage_csv(reports, opt.levels));
    } else if (chart_cmd->parsed()) {
      if (chart_args.output.empty()) {
        throw std::invalid_argument("chart: --output is required");
      }
      if (chart_args.stat == "both") chart_args.stat = "mean";
      const hboot::Dataset ds = load_input(chart_args);
      hboot::RunOptions opt = make_options(chart_args);
      opt.levels = {chart_level};
      opt.methods = {hboot::interval_method_from_name(chart_method)};
      opt.statistics = {chart_args.stat == "median" ? hboot::StatisticKind::median
                                                    : hboot::StatisticKind::mean};
      opt.include_total = false;
      const hboot::CiReport report = run_ci(ds, opt);
      hboot::write_file_atomic(chart_args.output,
                               hboot::render_ci_chart(report, opt.methods.front(), chart_level,
                                                      opt.statistics.front()));
    }
  } catch (const hboot::infeasible_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hboot::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
