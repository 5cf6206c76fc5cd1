#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hboot/indices.hpp"
#include "hboot/rng.hpp"

namespace hboot {

enum class StatisticKind { mean, median };

[[nodiscard]] inline std::string_view statistic_name(StatisticKind s) {
  return s == StatisticKind::mean ? "mean" : "median";
}

struct BootstrapConfig {
  std::size_t b = 1000;
  std::uint64_t seed = 0;
  StatisticKind statistic = StatisticKind::mean;
};

// The bootstrap distribution of a statistic: B replicate values stored in
// non-decreasing order, plus the estimate computed on the original sample.
// Interval constructions consume only these order statistics.
struct BootstrapDistribution {
  StatisticKind statistic = StatisticKind::mean;
  double original_estimate = 0.0;
  std::vector<double> replicates;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
};

namespace detail {

// May reorder `values` (median uses nth_element).
[[nodiscard]] inline double statistic_inplace(StatisticKind kind, std::span<double> values) {
  return kind == StatisticKind::mean ? mean_of(values) : median_inplace(values);
}

inline void resample_into(std::span<const double> values, Xoshiro256ss& rng,
                          std::span<double> out) {
  const std::uint64_t n = values.size();
  for (double& slot : out) {
    slot = values[static_cast<std::size_t>(uniform_below(rng, n))];
  }
}

}  // namespace detail

[[nodiscard]] inline double evaluate_statistic(StatisticKind kind, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("evaluate_statistic: empty sample");
  if (kind == StatisticKind::mean) return detail::mean_of(values);
  std::vector<double> scratch(values.begin(), values.end());
  return detail::median_inplace(scratch);
}

// One bootstrap resample: n draws with replacement from the sample,
// advancing `rng`. Replicate i of bootstrap_distribution below equals the
// statistic of resample_once run with rng = Xoshiro256ss(seed, i).
[[nodiscard]] inline IndexSample resample_once(const IndexSample& sample, Xoshiro256ss& rng) {
  if (sample.values.empty()) throw std::invalid_argument("resample_once: empty sample");
  IndexSample out;
  out.field_id = sample.field_id;
  out.kind = sample.kind;
  out.values.resize(sample.values.size());
  detail::resample_into(sample.values, rng, out.values);
  return out;
}

// Generates the bootstrap distribution of the configured statistic. Each
// replicate draws from its own substream (seed, replicate index), so the
// result is identical no matter how or where replicates are evaluated.
[[nodiscard]] inline BootstrapDistribution bootstrap_distribution(const IndexSample& sample,
                                                                  const BootstrapConfig& config) {
  if (sample.values.empty()) throw std::invalid_argument("bootstrap_distribution: empty sample");
  if (config.b < 1) throw std::invalid_argument("bootstrap_distribution: B must be >= 1");

  BootstrapDistribution dist;
  dist.statistic = config.statistic;
  dist.seed = config.seed;
  dist.sample_size = sample.values.size();
  dist.original_estimate = evaluate_statistic(config.statistic, sample.values);

  dist.replicates.resize(config.b);
  std::vector<double> scratch(sample.values.size());
  for (std::size_t i = 0; i < config.b; ++i) {
    Xoshiro256ss rng(config.seed, static_cast<std::uint64_t>(i));
    detail::resample_into(sample.values, rng, scratch);
    dist.replicates[i] = detail::statistic_inplace(config.statistic, scratch);
  }
  std::sort(dist.replicates.begin(), dist.replicates.end());
  return dist;
}

// Replicate mean minus the original estimate.
[[nodiscard]] inline double bias(const BootstrapDistribution& dist) {
  if (dist.replicates.empty()) throw std::invalid_argument("bias: empty distribution");
  return detail::mean_of(dist.replicates) - dist.original_estimate;
}

// Bootstrap standard error: the (B-1)-denominator standard deviation of the
// replicates.
[[nodiscard]] inline double std_error(const BootstrapDistribution& dist) {
  if (dist.replicates.size() < 2) {
    throw std::invalid_argument("std_error: needs at least 2 replicates");
  }
  const double mean = detail::mean_of(dist.replicates);
  return detail::sample_sd(dist.replicates, mean);
}

// Acceleration constant for the accelerated BC interval, estimated from the
// skewness of leave-one-out statistic values. Returns 0 for degenerate
// samples.
[[nodiscard]] inline double jackknife_acceleration(const IndexSample& sample,
                                                   StatisticKind statistic) {
  const std::size_t n = sample.values.size();
  if (n < 2) return 0.0;
  std::vector<double> loo(n);
  std::vector<double> scratch;
  scratch.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    scratch.assign(sample.values.begin(), sample.values.end());
    scratch.erase(scratch.begin() + static_cast<std::ptrdiff_t>(i));
    loo[i] = detail::statistic_inplace(statistic, scratch);
  }
  const double center = detail::mean_of(loo);
  double sum2 = 0.0;
  double sum3 = 0.0;
  for (double v : loo) {
    const double d = center - v;
    sum2 += d * d;
    sum3 += d * d * d;
  }
  if (sum2 <= 0.0) return 0.0;
  return sum3 / (6.0 * std::pow(sum2, 1.5));
}

}  // namespace hboot
