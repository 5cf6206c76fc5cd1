#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hboot/errors.hpp"
#include "hboot/format.hpp"
#include "hboot/intervals.hpp"
#include "hboot/parallel.hpp"
#include "hboot/resampling.hpp"

namespace hboot {

// Monte Carlo protocol: the field sample is treated as a finite population
// with known parameter (its mean or median). Each of the M outer
// replications draws a size-n sample with replacement, bootstraps it, and
// checks whether every requested interval brackets the parameter.
struct CoverageConfig {
  IndexSample population;
  std::size_t sample_size = 31;
  std::size_t outer_reps = 2000;
  BootstrapConfig bootstrap;  // b, master seed, statistic
  std::vector<IntervalMethod> methods{
      IntervalMethod::normal_bootstrap, IntervalMethod::basic_bootstrap,
      IntervalMethod::percentile_bootstrap, IntervalMethod::bias_corrected};
  std::vector<double> levels{0.90, 0.95};
  bool accelerate = false;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

struct CoverageCell {
  IntervalMethod method = IntervalMethod::percentile_bootstrap;
  double level = 0.95;
  StatisticKind statistic = StatisticKind::mean;
  // Counts partition the M outer replications exactly.
  std::uint64_t covered = 0;
  std::uint64_t missed_low = 0;   // parameter below the lower limit
  std::uint64_t missed_high = 0;  // parameter above the upper limit
  double observed_coverage = 0.0;
  double lower_miss = 0.0;
  double upper_miss = 0.0;
};

struct CoverageReport {
  std::string field_id;
  StatisticKind statistic = StatisticKind::mean;
  double true_parameter = 0.0;
  std::vector<CoverageCell> cells;  // one per (method, level)
  std::size_t outer_reps = 0;
  std::uint64_t master_seed = 0;
};

[[nodiscard]] inline double true_parameter(const IndexSample& population,
                                           StatisticKind statistic) {
  if (population.values.empty()) throw std::invalid_argument("true_parameter: empty population");
  return evaluate_statistic(statistic, population.values);
}

namespace detail {

inline constexpr std::uint64_t kInnerStreamTag = fnv1a("inner");

inline void check_coverage_config(const CoverageConfig& cfg) {
  if (cfg.population.values.empty()) {
    throw std::invalid_argument("coverage: population is empty");
  }
  if (cfg.sample_size < 2) throw std::invalid_argument("coverage: sample_size must be >= 2");
  if (cfg.outer_reps < 1) throw std::invalid_argument("coverage: outer_reps must be >= 1");
  if (cfg.methods.empty() || cfg.levels.empty()) {
    throw std::invalid_argument("coverage: methods and levels must be non-empty");
  }
  for (double level : cfg.levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw std::invalid_argument("coverage: level " + std::to_string(level) +
                                  " outside (0, 1)");
    }
    // Same feasibility rule the percentile/basic constructions enforce,
    // surfaced before any replication runs.
    if (static_cast<double>(cfg.bootstrap.b) * (1.0 - level) / 2.0 < 1.0 - 1e-9) {
      throw infeasible_error("coverage: level " + std::to_string(level) +
                             " infeasible for B = " + std::to_string(cfg.bootstrap.b));
    }
  }
}

}  // namespace detail

[[nodiscard]] inline CoverageReport run_coverage(const CoverageConfig& config) {
  detail::check_coverage_config(config);

  const double target = true_parameter(config.population, config.bootstrap.statistic);
  const std::size_t n_methods = config.methods.size();
  const std::size_t n_levels = config.levels.size();
  const std::size_t n_cells = n_methods * n_levels;
  const std::size_t threads = resolve_thread_count(config.threads);

  // Per-replication outcome codes, reduced to counts afterwards; writing
  // into disjoint slots keeps the run independent of thread scheduling.
  enum : std::uint8_t { kCovered = 0, kLow = 1, kHigh = 2 };
  std::vector<std::uint8_t> outcomes(config.outer_reps * n_cells);

  parallel_for(config.outer_reps, threads, [&](std::size_t rep) {
    Xoshiro256ss outer_rng(config.bootstrap.seed, static_cast<std::uint64_t>(rep));
    IndexSample draw;
    draw.field_id = config.population.field_id;
    draw.kind = config.population.kind;
    draw.values.resize(config.sample_size);
    detail::resample_into(config.population.values, outer_rng, draw.values);

    BootstrapConfig inner = config.bootstrap;
    inner.seed = mix_seed(mix_seed(config.bootstrap.seed, static_cast<std::uint64_t>(rep)),
                          detail::kInnerStreamTag);
    const BootstrapDistribution dist = bootstrap_distribution(draw, inner);
    const double accel =
        config.accelerate ? jackknife_acceleration(draw, config.bootstrap.statistic) : 0.0;

    std::uint8_t* slot = outcomes.data() + rep * n_cells;
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      for (std::size_t li = 0; li < n_levels; ++li) {
        const ConfidenceInterval ci =
            make_interval(config.methods[mi], dist, config.levels[li], accel);
        // Endpoints count as covered: the tables print closed intervals.
        std::uint8_t outcome = kCovered;
        if (target < ci.lower) {
          outcome = kLow;
        } else if (target > ci.upper) {
          outcome = kHigh;
        }
        slot[mi * n_levels + li] = outcome;
      }
    }
  });

  CoverageReport report;
  report.field_id = config.population.field_id;
  report.statistic = config.bootstrap.statistic;
  report.true_parameter = target;
  report.outer_reps = config.outer_reps;
  report.master_seed = config.bootstrap.seed;
  report.cells.resize(n_cells);
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    for (std::size_t li = 0; li < n_levels; ++li) {
      CoverageCell& cell = report.cells[mi * n_levels + li];
      cell.method = config.methods[mi];
      cell.level = config.levels[li];
      cell.statistic = config.bootstrap.statistic;
    }
  }
  for (std::size_t rep = 0; rep < config.outer_reps; ++rep) {
    const std::uint8_t* slot = outcomes.data() + rep * n_cells;
    for (std::size_t c = 0; c < n_cells; ++c) {
      switch (slot[c]) {
        case kCovered: ++report.cells[c].covered; break;
        case kLow: ++report.cells[c].missed_low; break;
        default: ++report.cells[c].missed_high; break;
      }
    }
  }
  const double m = static_cast<double>(config.outer_reps);
  for (CoverageCell& cell : report.cells) {
    cell.observed_coverage = static_cast<double>(cell.covered) / m;
    cell.lower_miss = static_cast<double>(cell.missed_low) / m;
    cell.upper_miss = static_cast<double>(cell.missed_high) / m;
  }
  return report;
}

// Plain tabular value; the reporting layer renders it to csv/json/text.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Lays out coverage results for one confidence level: one row per
// (field, method), with observed coverage and miss-rate percentages for
// the mean and then the median, one decimal each. `reports` may hold a
// mean and a median report per field; fields keep their first-appearance
// order.
[[nodiscard]] inline ReportTable format_coverage_table(
    const std::vector<CoverageReport>& reports, double level) {
  if (reports.empty()) {
    throw std::invalid_argument("format_coverage_table: no reports");
  }
  ReportTable table;
  table.columns = {"field",          "method",          "oc_mean",
                   "lower_miss_mean", "upper_miss_mean", "oc_median",
                   "lower_miss_median", "upper_miss_median"};

  std::vector<std::string> field_order;
  std::map<std::string, std::pair<const CoverageReport*, const CoverageReport*>> by_field;
  std::vector<IntervalMethod> method_order;
  for (const CoverageReport& r : reports) {
    auto [it, inserted] = by_field.try_emplace(r.field_id, nullptr, nullptr);
    if (inserted) field_order.push_back(r.field_id);
    (r.statistic == StatisticKind::mean ? it->second.first : it->second.second) = &r;
    for (const CoverageCell& cell : r.cells) {
      if (std::find(method_order.begin(), method_order.end(), cell.method) == method_order.end()) {
        method_order.push_back(cell.method);
      }
    }
  }

  const auto cell_text = [&](const CoverageReport* report, IntervalMethod method,
                             std::string out[3]) {
    out[0] = out[1] = out[2] = "";
    if (report == nullptr) return;
    for (const CoverageCell& cell : report->cells) {
      if (cell.method == method && cell.level == level) {
        out[0] = format_fixed(100.0 * cell.observed_coverage, 1);
        out[1] = format_fixed(100.0 * cell.lower_miss, 1);
        out[2] = format_fixed(100.0 * cell.upper_miss, 1);
        return;
      }
    }
  };

  bool any_cell = false;
  for (const std::string& field : field_order) {
    const auto& pair = by_field[field];
    for (IntervalMethod method : method_order) {
      std::string mean_cells[3];
      std::string median_cells[3];
      cell_text(pair.first, method, mean_cells);
      cell_text(pair.second, method, median_cells);
      if (mean_cells[0].empty() && median_cells[0].empty()) continue;
      any_cell = true;
      table.rows.push_back({field, std::string(interval_method_label(method)), mean_cells[0],
                            mean_cells[1], mean_cells[2], median_cells[0], median_cells[1],
                            median_cells[2]});
    }
  }
  if (!any_cell) {
    throw std::invalid_argument("format_coverage_table: no cells at level " +
                                std::to_string(level));
  }
  return table;
}

}  // namespace hboot
