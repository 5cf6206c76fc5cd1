#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hboot {

// One researcher's citation record: the number of citations received by
// each paper, in any order. May be empty (no papers).
struct CitationProfile {
  std::string researcher_id;
  std::string field_id;
  std::vector<std::int64_t> citations;
};

// Per-field normalization constants. chi is the field's average citations
// per paper, chi_ref the reference field's (the scaling baseline); c0 and
// n0 are the field averages of citations per article and articles per
// author used by the generalized index; journal_h_max is the highest
// journal h-index of the field.
struct FieldNorms {
  std::string field_id;
  double chi = 1.0;
  double chi_ref = 1.0;
  double c0 = 1.0;
  double n0 = 1.0;
  int journal_h_max = 1;
};

enum class IndexKind { raw_h, normalized_h, n_index, generalized_h };

[[nodiscard]] inline std::string_view index_kind_name(IndexKind k) {
  switch (k) {
    case IndexKind::raw_h: return "raw_h";
    case IndexKind::normalized_h: return "normalized_h";
    case IndexKind::n_index: return "n_index";
    case IndexKind::generalized_h: return "generalized_h";
  }
  return "raw_h";
}

// One field's sample of index values, one per researcher. For raw_h the
// values are integer-valued; normalized kinds are reals.
struct IndexSample {
  std::string field_id;
  std::vector<double> values;
  IndexKind kind = IndexKind::raw_h;
};

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

namespace detail {

[[nodiscard]] inline double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Median with the even-n midpoint rule; reorders `v`.
[[nodiscard]] inline double median_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

[[nodiscard]] inline double sample_sd(std::span<const double> v, double mean) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) {
    const double d = x - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(n - 1));
}

// x^(2/3) via cbrt so that perfect cubes come out exact.
[[nodiscard]] inline double two_thirds_power(double x) {
  const double c = std::cbrt(x);
  return c * c;
}

}  // namespace detail

// Hirsch's h: the largest k such that at least k papers have >= k citations.
[[nodiscard]] inline int h_index(const CitationProfile& profile) {
  std::vector<std::int64_t> sorted = profile.citations;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  int h = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= static_cast<std::int64_t>(i) + 1) {
      h = static_cast<int>(i) + 1;
    } else {
      break;
    }
  }
  return h;
}

// Zipf-model theoretical h for a researcher with n_p papers averaging chi
// citations each: (n_p/4)^(1/3) * chi^(2/3).
[[nodiscard]] inline double theoretical_h(int n_p, double chi) {
  if (n_p < 1) throw std::invalid_argument("theoretical_h: paper count must be >= 1");
  if (!(chi > 0.0)) throw std::invalid_argument("theoretical_h: chi must be positive");
  return std::cbrt(static_cast<double>(n_p) / 4.0) * detail::two_thirds_power(chi);
}

// Field scaling factor f = (chi_ref / chi)^(2/3); equals 1 for the
// reference field itself.
[[nodiscard]] inline double normalization_factor(double chi_ref, double chi) {
  if (!(chi > 0.0) || !(chi_ref > 0.0)) {
    throw std::invalid_argument("normalization_factor: chi values must be positive");
  }
  return detail::two_thirds_power(chi_ref / chi);
}

[[nodiscard]] inline double normalization_factor(const FieldNorms& norms) {
  return normalization_factor(norms.chi_ref, norms.chi);
}

[[nodiscard]] inline double normalized_h(double h, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("normalized_h: factor must be positive");
  if (h < 0.0) throw std::invalid_argument("normalized_h: h must be non-negative");
  return factor * h;
}

// h divided by the field's highest journal h-index; may exceed 1.
[[nodiscard]] inline double n_index(int h, int journal_h_max) {
  if (journal_h_max < 1) throw std::invalid_argument("n_index: journal_h_max must be >= 1");
  if (h < 0) throw std::invalid_argument("n_index: h must be non-negative");
  return static_cast<double>(h) / static_cast<double>(journal_h_max);
}

// Relative citation indicator per paper: c / c0, in input order.
[[nodiscard]] inline std::vector<double> cf_scores(const CitationProfile& profile, double c0) {
  if (!(c0 > 0.0)) throw std::invalid_argument("cf_scores: c0 must be positive");
  std::vector<double> out;
  out.reserve(profile.citations.size());
  for (std::int64_t c : profile.citations) {
    out.push_back(static_cast<double>(c) / c0);
  }
  return out;
}

// Generalized (field-rescaled) h: order papers by c_f = c/c0 descending and
// return the last reduced rank r/n0 whose c_f is strictly larger than it;
// 0 when no rank qualifies. The inequality is strict, so on unscaled data
// (c0 = n0 = 1) the value can sit one below the ordinary h at ties.
[[nodiscard]] inline double generalized_h(const CitationProfile& profile, double c0, double n0) {
  if (!(c0 > 0.0) || !(n0 > 0.0)) {
    throw std::invalid_argument("generalized_h: c0 and n0 must be positive");
  }
  std::vector<double> cf = cf_scores(profile, c0);
  std::sort(cf.begin(), cf.end(), std::greater<>());
  double result = 0.0;
  for (std::size_t r = 1; r <= cf.size(); ++r) {
    const double reduced_rank = static_cast<double>(r) / n0;
    if (cf[r - 1] > reduced_rank) {
      result = reduced_rank;
    } else {
      break;  // c_f non-increasing, r/n0 increasing: no later rank can qualify
    }
  }
  return result;
}

[[nodiscard]] inline SummaryStats summary_stats(const IndexSample& sample) {
  if (sample.values.empty()) {
    throw std::invalid_argument("summary_stats: sample '" + sample.field_id + "' is empty");
  }
  SummaryStats s;
  s.count = sample.values.size();
  s.mean = detail::mean_of(sample.values);
  std::vector<double> scratch = sample.values;
  s.median = detail::median_inplace(scratch);
  s.sd = detail::sample_sd(sample.values, s.mean);
  const auto [lo, hi] = std::minmax_element(sample.values.begin(), sample.values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

// Invariant checks used at ingestion boundaries.
inline void validate_profile(const CitationProfile& profile) {
  for (std::int64_t c : profile.citations) {
    if (c < 0) {
      throw std::invalid_argument("profile '" + profile.researcher_id +
                                  "': negative citation count " + std::to_string(c));
    }
  }
}

inline void validate_sample(const IndexSample& sample) {
  if (sample.values.empty()) {
    throw std::invalid_argument("sample '" + sample.field_id + "' has no values");
  }
  for (double v : sample.values) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("sample '" + sample.field_id + "' has negative value " +
                                  std::to_string(v));
    }
    if (sample.kind == IndexKind::raw_h && v != std::floor(v)) {
      throw std::invalid_argument("sample '" + sample.field_id +
                                  "' is raw_h but holds non-integer value " + std::to_string(v));
    }
  }
}

inline void validate_norms(const FieldNorms& n) {
  if (!(n.chi > 0.0) || !(n.chi_ref > 0.0) || !(n.c0 > 0.0) || !(n.n0 > 0.0)) {
    throw std::invalid_argument("norms for '" + n.field_id +
                                "': chi, chi_ref, c0 and n0 must all be positive");
  }
  if (n.journal_h_max < 1) {
    throw std::invalid_argument("norms for '" + n.field_id + "': journal_h_max must be >= 1");
  }
}

}  // namespace hboot
