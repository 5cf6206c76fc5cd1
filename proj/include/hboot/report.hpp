#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hboot/chart.hpp"
#include "hboot/coverage.hpp"
#include "hboot/dataset.hpp"
#include "hboot/errors.hpp"
#include "hboot/format.hpp"
#include "hboot/intervals.hpp"
#include "hboot/parallel.hpp"
#include "hboot/resampling.hpp"

namespace hboot {

inline constexpr const char* kPooledFieldName = "TOTAL";

// Shared knobs of the ci / normalize / coverage / chart runs.
struct RunOptions {
  std::size_t b = 1000;
  std::uint64_t seed = 0;
  std::vector<double> levels{0.90, 0.95};
  std::vector<IntervalMethod> methods{
      IntervalMethod::normal_bootstrap, IntervalMethod::basic_bootstrap,
      IntervalMethod::percentile_bootstrap, IntervalMethod::bias_corrected};
  std::vector<StatisticKind> statistics{StatisticKind::mean, StatisticKind::median};
  bool accelerate = false;
  std::size_t threads = 1;  // 0 = hardware concurrency
  bool include_total = true;
  std::size_t coverage_reps = 2000;        // M
  std::size_t coverage_sample_size = 0;    // 0 = each field's own n
};

struct CiRow {
  std::string field_id;
  StatisticKind statistic = StatisticKind::mean;
  std::size_t sample_size = 0;
  double estimate = 0.0;
  double bias = 0.0;
  double std_error = 0.0;
  std::vector<ConfidenceInterval> intervals;  // level-major, method-minor
};

struct CiReport {
  std::vector<CiRow> rows;  // field-major (TOTAL last), statistic-minor
  std::vector<IntervalMethod> methods;
  std::vector<double> levels;
  std::size_t b = 0;
  std::uint64_t seed = 0;
  IndexKind kind = IndexKind::raw_h;
};

namespace detail {

inline void check_run_options(const RunOptions& opt) {
  if (opt.b < 2) throw infeasible_error("B must be >= 2, got " + std::to_string(opt.b));
  if (opt.levels.empty()) throw std::invalid_argument("at least one confidence level required");
  if (opt.methods.empty()) throw std::invalid_argument("at least one interval method required");
  if (opt.statistics.empty()) throw std::invalid_argument("at least one statistic required");
  for (double level : opt.levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw std::invalid_argument("confidence level " + std::to_string(level) +
                                  " outside (0, 1)");
    }
    if (static_cast<double>(opt.b) * (1.0 - level) / 2.0 < 1.0 - 1e-9) {
      throw infeasible_error("level " + std::to_string(level) + " infeasible for B = " +
                             std::to_string(opt.b) + " (B*alpha/2 < 1)");
    }
  }
}

// Fields in deterministic (sorted) order, with the pooled TOTAL sample
// appended when requested and at least two fields are present. Pooled
// values concatenate the fields in that same order.
[[nodiscard]] inline std::vector<IndexSample> ordered_samples(const Dataset& ds,
                                                              bool include_total) {
  std::vector<IndexSample> out;
  out.reserve(ds.samples.size() + 1);
  for (const auto& [field, sample] : ds.samples) out.push_back(sample);
  if (include_total && ds.samples.size() >= 2 && !ds.samples.count(kPooledFieldName)) {
    IndexSample pooled;
    pooled.field_id = kPooledFieldName;
    pooled.kind = out.front().kind;
    for (const IndexSample& s : out) {
      pooled.values.insert(pooled.values.end(), s.values.begin(), s.values.end());
    }
    out.push_back(std::move(pooled));
  }
  return out;
}

[[nodiscard]] inline std::string interval_column_header(IntervalMethod m, double level) {
  return std::string(interval_method_label(m)) + " (" + format_level_percent(level) + ")";
}

}  // namespace detail

[[nodiscard]] inline IntervalMethod interval_method_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "nb" || lower == "normal") return IntervalMethod::normal_bootstrap;
  if (lower == "bb" || lower == "basic") return IntervalMethod::basic_bootstrap;
  if (lower == "pb" || lower == "percentile") return IntervalMethod::percentile_bootstrap;
  if (lower == "bca" || lower == "bc" || lower == "bias-corrected") {
    return IntervalMethod::bias_corrected;
  }
  throw std::invalid_argument("unknown interval method '" + std::string(name) +
                              "' (expected nb, bb, pb or bca)");
}

// Bootstraps every field (and the pooled TOTAL) for each requested
// statistic and constructs all requested intervals. Each field draws from
// its own substream of the master seed, so the report does not depend on
// evaluation order or thread count.
[[nodiscard]] inline CiReport run_ci(const Dataset& ds, const RunOptions& opt) {
  detail::check_run_options(opt);
  if (ds.samples.empty()) throw std::invalid_argument("ci: dataset has no samples");

  const std::vector<IndexSample> samples = detail::ordered_samples(ds, opt.include_total);

  CiReport report;
  report.methods = opt.methods;
  report.levels = opt.levels;
  report.b = opt.b;
  report.seed = opt.seed;
  report.kind = samples.front().kind;
  report.rows.resize(samples.size() * opt.statistics.size());

  parallel_for(report.rows.size(), opt.threads, [&](std::size_t task) {
    const IndexSample& sample = samples[task / opt.statistics.size()];
    const StatisticKind statistic = opt.statistics[task % opt.statistics.size()];

    BootstrapConfig config;
    config.b = opt.b;
    config.seed = mix_seed(opt.seed, fnv1a(sample.field_id));
    config.statistic = statistic;
    const BootstrapDistribution dist = bootstrap_distribution(sample, config);
    const double accel = opt.accelerate ? jackknife_acceleration(sample, statistic) : 0.0;

    CiRow& row = report.rows[task];
    row.field_id = sample.field_id;
    row.statistic = statistic;
    row.sample_size = sample.values.size();
    row.estimate = dist.original_estimate;
    row.bias = bias(dist);
    row.std_error = std_error(dist);
    row.intervals.reserve(opt.levels.size() * opt.methods.size());
    for (double level : opt.levels) {
      for (IntervalMethod method : opt.methods) {
        row.intervals.push_back(make_interval(method, dist, level, accel));
      }
    }
  });
  return report;
}

// Applies one of the field-normalization schemes to a raw-h dataset and
// returns the transformed dataset (kind tagged), ready to feed back into
// run_ci. The generalized scheme recomputes from citation profiles.
[[nodiscard]] inline Dataset run_normalize(const Dataset& ds, IndexKind target) {
  if (target == IndexKind::raw_h) {
    throw std::invalid_argument("normalize: target kind must be a normalized kind");
  }
  if (ds.samples.empty()) throw std::invalid_argument("normalize: dataset has no samples");
  for (const auto& [field, sample] : ds.samples) {
    if (sample.kind != IndexKind::raw_h) {
      throw std::invalid_argument("normalize: sample '" + field + "' is already " +
                                  std::string(index_kind_name(sample.kind)) +
                                  "; expected raw_h input");
    }
  }
  if (target == IndexKind::generalized_h && ds.profiles.empty()) {
    throw std::invalid_argument(
        "normalize: generalized_h needs citation profiles, not h values");
  }

  std::vector<std::string> missing;
  for (const auto& [field, sample] : ds.samples) {
    if (!ds.norms.count(field)) missing.push_back(field);
  }
  if (!missing.empty()) {
    std::string msg = "normalize: missing norms for fields:";
    for (const std::string& f : missing) msg += " " + f;
    throw std::invalid_argument(msg);
  }

  Dataset out;
  out.norms = ds.norms;
  out.reference_field = ds.reference_field;

  if (target == IndexKind::generalized_h) {
    for (const CitationProfile& profile : ds.profiles) {
      const FieldNorms& n = ds.norms.at(profile.field_id);
      const double value = generalized_h(profile, n.c0, n.n0);
      detail::append_value(out, profile.field_id, profile.researcher_id, value,
                           IndexKind::generalized_h);
    }
  } else {
    for (const auto& [field, sample] : ds.samples) {
      const FieldNorms& n = ds.norms.at(field);
      const double factor = normalization_factor(n);
      for (std::size_t i = 0; i < sample.values.size(); ++i) {
        const double v = sample.values[i];
        const double transformed = (target == IndexKind::normalized_h)
                                       ? normalized_h(v, factor)
                                       : n_index(static_cast<int>(v), n.journal_h_max);
        detail::append_value(out, field, detail::researcher_label(ds, field, i), transformed,
                             target);
      }
    }
  }
  for (const auto& [field, sample] : out.samples) validate_sample(sample);
  return out;
}

// One coverage report per (field, statistic), fields in sorted order with
// the pooled TOTAL population last.
[[nodiscard]] inline std::vector<CoverageReport> run_coverage_all(const Dataset& ds,
                                                                  const RunOptions& opt) {
  detail::check_run_options(opt);
  if (ds.samples.empty()) throw std::invalid_argument("coverage: dataset has no samples");

  const std::vector<IndexSample> samples = detail::ordered_samples(ds, opt.include_total);
  std::vector<CoverageReport> reports;
  reports.reserve(samples.size() * opt.statistics.size());
  for (const IndexSample& sample : samples) {
    for (StatisticKind statistic : opt.statistics) {
      CoverageConfig config;
      config.population = sample;
      config.sample_size =
          opt.coverage_sample_size > 0 ? opt.coverage_sample_size : sample.values.size();
      config.outer_reps = opt.coverage_reps;
      config.bootstrap.b = opt.b;
      config.bootstrap.seed = mix_seed(opt.seed, fnv1a(sample.field_id));
      config.bootstrap.statistic = statistic;
      config.methods = opt.methods;
      config.levels = opt.levels;
      config.accelerate = opt.accelerate;
      config.threads = opt.threads;
      reports.push_back(run_coverage(config));
    }
  }
  return reports;
}

// ---- report serialization ----------------------------------------------

[[nodiscard]] inline std::string render_ci_csv(const CiReport& report) {
  std::string out = "field,statistic,n,estimate,bias,std_error";
  for (double level : report.levels) {
    for (IntervalMethod method : report.methods) {
      out += "," + detail::interval_column_header(method, level);
    }
  }
  out += '\n';
  for (const CiRow& row : report.rows) {
    out += row.field_id;
    out += ',';
    out += statistic_name(row.statistic);
    out += ',';
    out += std::to_string(row.sample_size);
    out += ',';
    out += format_fixed(row.estimate, 2);
    out += ',';
    out += format_fixed(row.bias, 3);
    out += ',';
    out += format_fixed(row.std_error, 3);
    for (const ConfidenceInterval& ci : row.intervals) {
      out += ',';
      out += format_fixed(ci.lower, 2);
      out += " - ";
      out += format_fixed(ci.upper, 2);
    }
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline std::string render_ci_json(const CiReport& report) {
  nlohmann::json doc;
  doc["b"] = report.b;
  doc["seed"] = report.seed;
  doc["kind"] = std::string(index_kind_name(report.kind));
  doc["levels"] = report.levels;
  doc["methods"] = nlohmann::json::array();
  for (IntervalMethod m : report.methods) {
    doc["methods"].push_back(std::string(interval_method_label(m)));
  }
  doc["rows"] = nlohmann::json::array();
  const auto round2 = [](double v) { return std::stod(format_fixed(v, 2)); };
  for (const CiRow& row : report.rows) {
    nlohmann::json r;
    r["field_id"] = row.field_id;
    r["statistic"] = std::string(statistic_name(row.statistic));
    r["n"] = row.sample_size;
    r["estimate"] = round2(row.estimate);
    r["bias"] = std::stod(format_fixed(row.bias, 3));
    r["std_error"] = std::stod(format_fixed(row.std_error, 3));
    r["intervals"] = nlohmann::json::array();
    for (const ConfidenceInterval& ci : row.intervals) {
      nlohmann::json c;
      c["method"] = std::string(interval_method_label(ci.method));
      c["level"] = ci.level;
      c["lower"] = round2(ci.lower);
      c["upper"] = round2(ci.upper);
      if (ci.clamped) c["clamped"] = true;
      r["intervals"].push_back(std::move(c));
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

// Coverage CSV: the per-level table layout (field, method, then observed
// coverage and miss-rate percentages for mean and median) with a leading
// level column, levels stacked in ascending order.
[[nodiscard]] inline std::string render_coverage_csv(const std::vector<CoverageReport>& reports,
                                                     const std::vector<double>& levels) {
  std::string out = "level";
  bool header_done = false;
  std::string body;
  for (double level : levels) {
    const ReportTable table = format_coverage_table(reports, level);
    if (!header_done) {
      for (const std::string& c : table.columns) out += "," + c;
      out += '\n';
      header_done = true;
    }
    for (const auto& row : table.rows) {
      body += format_level_percent(level);
      for (const std::string& cell : row) body += "," + cell;
      body += '\n';
    }
  }
  return out + body;
}

[[nodiscard]] inline std::string render_coverage_json(
    const std::vector<CoverageReport>& reports) {
  nlohmann::json doc;
  doc["reports"] = nlohmann::json::array();
  const auto pct1 = [](double v) { return std::stod(format_fixed(100.0 * v, 1)); };
  for (const CoverageReport& report : reports) {
    nlohmann::json r;
    r["field_id"] = report.field_id;
    r["statistic"] = std::string(statistic_name(report.statistic));
    r["true_parameter"] = std::stod(format_fixed(report.true_parameter, 2));
    r["outer_reps"] = report.outer_reps;
    r["seed"] = report.master_seed;
    r["cells"] = nlohmann::json::array();
    for (const CoverageCell& cell : report.cells) {
      nlohmann::json c;
      c["method"] = std::string(interval_method_label(cell.method));
      c["level"] = cell.level;
      c["covered"] = cell.covered;
      c["missed_low"] = cell.missed_low;
      c["missed_high"] = cell.missed_high;
      c["observed_coverage_pct"] = pct1(cell.observed_coverage);
      c["lower_miss_pct"] = pct1(cell.lower_miss);
      c["upper_miss_pct"] = pct1(cell.upper_miss);
      r["cells"].push_back(std::move(c));
    }
    doc["reports"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

// ---- chart assembly ------------------------------------------------------

[[nodiscard]] inline std::string index_kind_display(IndexKind kind) {
  switch (kind) {
    case IndexKind::raw_h: return "h-index";
    case IndexKind::normalized_h: return "normalized h-index";
    case IndexKind::n_index: return "n-index";
    case IndexKind::generalized_h: return "generalized h-index";
  }
  return "h-index";
}

// Builds the per-field interval chart for one (method, level, statistic)
// view of a ci report. The pooled TOTAL row is left out; the chart
// compares fields.
[[nodiscard]] inline std::string render_ci_chart(const CiReport& report, IntervalMethod method,
                                                 double level, StatisticKind statistic) {
  std::vector<ChartEntry> entries;
  for (const CiRow& row : report.rows) {
    if (row.statistic != statistic || row.field_id == kPooledFieldName) continue;
    for (const ConfidenceInterval& ci : row.intervals) {
      if (ci.method == method && ci.level == level) {
        entries.push_back({row.field_id, ci.lower, ci.upper, row.estimate});
        break;
      }
    }
  }
  if (entries.empty()) {
    throw std::invalid_argument("chart: no intervals for the requested method/level/statistic");
  }
  const std::string stat_label = std::string(statistic_name(statistic)) + " " +
                                 index_kind_display(report.kind);
  const std::string title = format_level_percent(level) + " " +
                            std::string(interval_method_long_name(method)) +
                            " bootstrap confidence intervals for the " + stat_label;
  return render_interval_chart(entries, title, stat_label);
}

}  // namespace hboot
