#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hboot/errors.hpp"
#include "hboot/normal.hpp"
#include "hboot/resampling.hpp"

namespace hboot {

enum class IntervalMethod { normal_bootstrap, basic_bootstrap, percentile_bootstrap, bias_corrected };

// Short labels as used in the report tables.
[[nodiscard]] inline std::string_view interval_method_label(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::normal_bootstrap: return "NB";
    case IntervalMethod::basic_bootstrap: return "BB";
    case IntervalMethod::percentile_bootstrap: return "PB";
    case IntervalMethod::bias_corrected: return "BCa";
  }
  return "?";
}

[[nodiscard]] inline std::string_view interval_method_long_name(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::normal_bootstrap: return "normal";
    case IntervalMethod::basic_bootstrap: return "basic";
    case IntervalMethod::percentile_bootstrap: return "percentile";
    case IntervalMethod::bias_corrected: return "bias-corrected";
  }
  return "?";
}

struct ConfidenceInterval {
  IntervalMethod method = IntervalMethod::percentile_bootstrap;
  double level = 0.95;  // 1 - alpha
  double lower = 0.0;
  double upper = 0.0;
  // Set when a bias-corrected rank had to be clamped into [1, B] because
  // the adjusted probability ran off the end of the replicate set.
  bool clamped = false;
};

namespace detail {

inline void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1), got " +
                                std::to_string(level));
  }
}

// Rank index with the nearest-rank (ceiling) rule. Values of k that are
// integers up to floating-point noise snap to that integer, so canonical
// ranks like B*alpha/2 = 25 at B = 1000 are hit exactly.
[[nodiscard]] inline std::size_t ceil_rank(double k) {
  const double rounded = std::round(k);
  if (std::fabs(k - rounded) <= 1e-9 * std::max(1.0, std::fabs(k))) {
    return static_cast<std::size_t>(rounded);
  }
  return static_cast<std::size_t>(std::ceil(k));
}

}  // namespace detail

// Sorted-replicate order statistic at real-valued rank k (1-based), using
// the nearest-rank rule: integer k picks rank k, fractional k rounds up.
[[nodiscard]] inline double nearest_rank(const BootstrapDistribution& dist, double k) {
  const std::size_t b = dist.replicates.size();
  if (!(k > 0.0) || k > static_cast<double>(b) + 1e-9) {
    throw std::invalid_argument("nearest_rank: rank " + std::to_string(k) +
                                " outside (0, B] with B = " + std::to_string(b));
  }
  std::size_t rank = detail::ceil_rank(k);
  rank = std::clamp<std::size_t>(rank, 1, b);
  return dist.replicates[rank - 1];
}

// Normal bootstrap: estimate +/- z_{1-alpha/2} times the bootstrap standard
// error. Exactly symmetric about the original estimate.
[[nodiscard]] inline ConfidenceInterval normal_interval(const BootstrapDistribution& dist,
                                                        double level) {
  detail::check_level(level);
  const double half_width = inverse_normal_cdf(0.5 * (1.0 + level)) * std_error(dist);
  return {IntervalMethod::normal_bootstrap, level, dist.original_estimate - half_width,
          dist.original_estimate + half_width, false};
}

namespace detail {

struct PercentileRanks {
  double k_lower = 0.0;
  double k_upper = 0.0;
};

[[nodiscard]] inline PercentileRanks percentile_ranks(const BootstrapDistribution& dist,
                                                      double level) {
  check_level(level);
  const double b = static_cast<double>(dist.replicates.size());
  const double k_lower = b * (1.0 - level) / 2.0;
  if (k_lower < 1.0 - 1e-9) {
    throw infeasible_error("level " + std::to_string(level) + " infeasible for B = " +
                           std::to_string(dist.replicates.size()) + " (B*alpha/2 < 1)");
  }
  return {k_lower, b * (0.5 + level / 2.0)};
}

}  // namespace detail

// Percentile bootstrap: the 100(alpha/2)% and 100(1-alpha/2)% points of the
// replicate distribution. Endpoints are always replicate values.
[[nodiscard]] inline ConfidenceInterval percentile_interval(const BootstrapDistribution& dist,
                                                            double level) {
  const auto ranks = detail::percentile_ranks(dist, level);
  return {IntervalMethod::percentile_bootstrap, level, nearest_rank(dist, ranks.k_lower),
          nearest_rank(dist, ranks.k_upper), false};
}

// Basic bootstrap: the percentile interval reflected about the original
// estimate (upper replicate quantile bounds the estimate from below).
[[nodiscard]] inline ConfidenceInterval basic_interval(const BootstrapDistribution& dist,
                                                       double level) {
  const auto ranks = detail::percentile_ranks(dist, level);
  const double est = dist.original_estimate;
  return {IntervalMethod::basic_bootstrap, level,
          2.0 * est - nearest_rank(dist, ranks.k_upper),
          2.0 * est - nearest_rank(dist, ranks.k_lower), false};
}

// Bias-corrected interval. The correction constant z0 comes from the
// position of the original estimate inside the sorted replicates; with
// replicates tied to the estimate (common for medians of integer data)
// the midrank i = #{below} + floor(#{tied}/2) is used, clamped to
// [1, B-1] so z0 stays finite. With acceleration = 0 (the default) the
// adjusted probabilities are Phi(2*z0 + z_{alpha/2}) and
// Phi(2*z0 + z_{1-alpha/2}); a nonzero acceleration constant (see
// jackknife_acceleration) switches on the full accelerated adjustment.
[[nodiscard]] inline ConfidenceInterval bias_corrected_interval(const BootstrapDistribution& dist,
                                                                double level,
                                                                double acceleration = 0.0) {
  detail::check_level(level);
  const std::size_t b = dist.replicates.size();
  if (b < 2) throw std::invalid_argument("bias_corrected_interval: needs B >= 2");

  const double est = dist.original_estimate;
  if (dist.replicates.front() == est && dist.replicates.back() == est) {
    return {IntervalMethod::bias_corrected, level, est, est, false};
  }

  const auto begin = dist.replicates.begin();
  const auto end = dist.replicates.end();
  const std::size_t below = static_cast<std::size_t>(std::lower_bound(begin, end, est) - begin);
  const std::size_t tied = static_cast<std::size_t>(std::upper_bound(begin, end, est) - begin) - below;
  std::size_t i = below + tied / 2;
  i = std::clamp<std::size_t>(i, 1, b - 1);
  const double z0 = inverse_normal_cdf(static_cast<double>(i) / static_cast<double>(b));

  const double z_lo = inverse_normal_cdf((1.0 - level) / 2.0);
  const double z_hi = inverse_normal_cdf(0.5 * (1.0 + level));

  bool clamped = false;
  const auto adjusted_probability = [&](double z) {
    const double shifted = z0 + z;
    const double denom = 1.0 - acceleration * shifted;
    if (denom <= 1e-12) {
      clamped = true;
      return shifted > 0.0 ? 1.0 : 0.0;
    }
    return normal_cdf(z0 + shifted / denom);
  };

  const auto rank_for = [&](double p) {
    if (p <= 0.0 || p >= 1.0) clamped = true;
    std::size_t rank = detail::ceil_rank(static_cast<double>(b) * p);
    if (rank < 1) {
      rank = 1;
      clamped = true;
    } else if (rank > b) {
      rank = b;
      clamped = true;
    }
    return rank;
  };

  const std::size_t rank_lo = rank_for(adjusted_probability(z_lo));
  const std::size_t rank_hi = rank_for(adjusted_probability(z_hi));
  const auto [lo, hi] = std::minmax(dist.replicates[rank_lo - 1], dist.replicates[rank_hi - 1]);
  return {IntervalMethod::bias_corrected, level, lo, hi, clamped};
}

// Dispatch helper used by the report and coverage layers.
[[nodiscard]] inline ConfidenceInterval make_interval(IntervalMethod method,
                                                      const BootstrapDistribution& dist,
                                                      double level, double acceleration = 0.0) {
  switch (method) {
    case IntervalMethod::normal_bootstrap: return normal_interval(dist, level);
    case IntervalMethod::basic_bootstrap: return basic_interval(dist, level);
    case IntervalMethod::percentile_bootstrap: return percentile_interval(dist, level);
    case IntervalMethod::bias_corrected: return bias_corrected_interval(dist, level, acceleration);
  }
  throw std::invalid_argument("make_interval: unknown method");
}

}  // namespace hboot
