#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "hboot/indices.hpp"
#include "hboot/rng.hpp"
#include "oracles.hpp"

using hboot::CitationProfile;
using hboot::IndexKind;
using hboot::IndexSample;

namespace {

CitationProfile profile(std::vector<std::int64_t> citations) {
  return {"r", "f", std::move(citations)};
}

CitationProfile random_profile(hboot::Xoshiro256ss& rng, std::size_t max_len,
                               std::int64_t max_citations) {
  CitationProfile p{"r", "f", {}};
  const std::size_t len = hboot::uniform_below(rng, max_len + 1);
  p.citations.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    p.citations.push_back(
        static_cast<std::int64_t>(hboot::uniform_below(rng, max_citations + 1)));
  }
  return p;
}

}  // namespace

TEST_CASE("h_index on the worked examples") {
  CHECK(hboot::h_index(profile({})) == 0);
  CHECK(hboot::h_index(profile({0, 0, 0})) == 0);
  CHECK(hboot::h_index(profile({5, 4, 3, 2, 1})) == 3);
  CHECK(hboot::h_index(profile({10, 10})) == 2);
  // oracle agreement on the same inputs
  CHECK(oracle::h_index_scan({5, 4, 3, 2, 1}) == 3);
  CHECK(oracle::h_index_scan({10, 10}) == 2);
}

TEST_CASE("h_index matches the brute-force scan on random profiles") {
  hboot::Xoshiro256ss rng(20240601);
  for (int i = 0; i < 2000; ++i) {
    const CitationProfile p = random_profile(rng, 60, 120);
    CHECK(hboot::h_index(p) == oracle::h_index_scan(p.citations));
  }
}

TEST_CASE("h_index invariants") {
  hboot::Xoshiro256ss rng(7);
  for (int i = 0; i < 300; ++i) {
    CitationProfile p = random_profile(rng, 40, 80);
    const int h = hboot::h_index(p);

    // bounds
    const std::int64_t max_c =
        p.citations.empty() ? 0 : *std::max_element(p.citations.begin(), p.citations.end());
    CHECK(h >= 0);
    CHECK(h <= static_cast<int>(p.citations.size()));
    CHECK(h <= max_c);

    // permutation invariance
    CitationProfile shuffled = p;
    std::shuffle(shuffled.citations.begin(), shuffled.citations.end(),
                 std::mt19937_64(1234 + i));
    CHECK(hboot::h_index(shuffled) == h);

    // appending a paper never decreases h
    CitationProfile more = p;
    more.citations.push_back(static_cast<std::int64_t>(hboot::uniform_below(rng, 50)));
    CHECK(hboot::h_index(more) >= h);

    // incrementing a citation never decreases h
    if (!p.citations.empty()) {
      CitationProfile bumped = p;
      bumped.citations[hboot::uniform_below(rng, bumped.citations.size())] += 1;
      CHECK(hboot::h_index(bumped) >= h);
    }
  }
}

TEST_CASE("theoretical_h on exact roots") {
  CHECK(hboot::theoretical_h(4, 1.0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(hboot::theoretical_h(32, 8.0) == Catch::Approx(8.0).margin(1e-12));
  CHECK(hboot::theoretical_h(4, 8.0) == Catch::Approx(4.0).margin(1e-12));
  CHECK_THROWS_AS(hboot::theoretical_h(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hboot::theoretical_h(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hboot::theoretical_h(4, -2.0), std::invalid_argument);
}

TEST_CASE("normalization_factor") {
  CHECK(hboot::normalization_factor(3.7, 3.7) == 1.0);  // reference field, exact
  CHECK(hboot::normalization_factor(8.0, 1.0) == Catch::Approx(4.0).margin(1e-12));
  CHECK(hboot::normalization_factor(1.0, 8.0) == Catch::Approx(0.25).margin(1e-12));
  CHECK_THROWS_AS(hboot::normalization_factor(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hboot::normalization_factor(1.0, -1.0), std::invalid_argument);

  hboot::FieldNorms norms;
  norms.chi = 2.0;
  norms.chi_ref = 2.0;
  CHECK(hboot::normalization_factor(norms) == 1.0);
}

TEST_CASE("normalized_h and n_index") {
  CHECK(hboot::normalized_h(26.0, 1.0) == 26.0);
  CHECK(hboot::normalized_h(0.0, 2.5) == 0.0);
  CHECK(hboot::normalized_h(10.0, 0.25) == 2.5);
  CHECK_THROWS_AS(hboot::normalized_h(10.0, 0.0), std::invalid_argument);

  CHECK(hboot::n_index(0, 100) == 0.0);
  CHECK(hboot::n_index(50, 100) == 0.5);
  CHECK(hboot::n_index(120, 100) == 1.2);  // may exceed 1
  CHECK_THROWS_AS(hboot::n_index(10, 0), std::invalid_argument);
}

TEST_CASE("rank preservation of the monotone scalings") {
  hboot::Xoshiro256ss rng(99);
  for (int i = 0; i < 500; ++i) {
    const int h1 = static_cast<int>(hboot::uniform_below(rng, 150));
    const int h2 = h1 + static_cast<int>(hboot::uniform_below(rng, 30));
    const double factor = 0.1 + 0.01 * static_cast<double>(hboot::uniform_below(rng, 300));
    const int jmax = 1 + static_cast<int>(hboot::uniform_below(rng, 400));
    CHECK(hboot::normalized_h(h1, factor) <= hboot::normalized_h(h2, factor));
    CHECK(hboot::n_index(h1, jmax) <= hboot::n_index(h2, jmax));
  }
}

TEST_CASE("cf_scores") {
  CHECK(hboot::cf_scores(profile({10, 5}), 5.0) == std::vector<double>{2.0, 1.0});
  CHECK(hboot::cf_scores(profile({}), 3.0).empty());
  CHECK(hboot::cf_scores(profile({7}), 1.0) == std::vector<double>{7.0});
  CHECK_THROWS_AS(hboot::cf_scores(profile({1}), 0.0), std::invalid_argument);
}

TEST_CASE("generalized_h definition cases") {
  CHECK(hboot::generalized_h(profile({}), 1.0, 1.0) == 0.0);

  // Strict inequality: c_f at rank 3 is 3, which is not > 3, so the last
  // qualifying rank is 2. Confirmed by full-rank enumeration.
  CHECK(oracle::generalized_h_enumerate({5, 4, 3, 2, 1}, 1.0, 1.0) == 2.0);
  CHECK(hboot::generalized_h(profile({5, 4, 3, 2, 1}), 1.0, 1.0) == 2.0);

  // c_f = 5 at every rank; reduced ranks 0.5, 1.0, 1.5, 2.0 all qualify.
  CHECK(oracle::generalized_h_enumerate({10, 10, 10, 10}, 2.0, 2.0) == 2.0);
  CHECK(hboot::generalized_h(profile({10, 10, 10, 10}), 2.0, 2.0) == 2.0);

  CHECK_THROWS_AS(hboot::generalized_h(profile({1}), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hboot::generalized_h(profile({1}), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("generalized_h properties") {
  hboot::Xoshiro256ss rng(2024);
  for (int i = 0; i < 400; ++i) {
    const CitationProfile p = random_profile(rng, 30, 60);

    // joint scaling of citations and c0 leaves the value unchanged
    CitationProfile scaled = p;
    for (auto& c : scaled.citations) c *= 7;
    const double base = hboot::generalized_h(p, 1.0, 1.0);
    CHECK(hboot::generalized_h(scaled, 7.0, 1.0) == base);

    // agreement with the no-shortcut enumeration
    CHECK(base == oracle::generalized_h_enumerate(p.citations, 1.0, 1.0));

    // with c0 = n0 = 1 the value sits at h or h-1 (strict boundary rule)
    const double h = static_cast<double>(hboot::h_index(p));
    CHECK((base == h || base == h - 1.0 || (h == 0.0 && base == 0.0)));
  }
}

TEST_CASE("summary_stats") {
  SECTION("singleton") {
    const auto s = hboot::summary_stats({"f", {5.0}, IndexKind::raw_h});
    CHECK(s.mean == 5.0);
    CHECK(s.median == 5.0);
    CHECK(s.sd == 0.0);
    CHECK(s.min == 5.0);
    CHECK(s.max == 5.0);
    CHECK(s.count == 1);
  }
  SECTION("even-n median midpoint rule") {
    const auto s = hboot::summary_stats({"f", {1.0, 2.0, 3.0, 4.0}, IndexKind::raw_h});
    CHECK(s.median == 2.5);
    CHECK(s.mean == 2.5);
  }
  SECTION("empty sample is a domain error") {
    CHECK_THROWS_AS(hboot::summary_stats({"f", {}, IndexKind::raw_h}), std::invalid_argument);
  }
  SECTION("ordering and spread invariants") {
    hboot::Xoshiro256ss rng(5);
    for (int i = 0; i < 200; ++i) {
      IndexSample sample{"f", {}, IndexKind::raw_h};
      const std::size_t n = 1 + hboot::uniform_below(rng, 12);
      for (std::size_t k = 0; k < n; ++k) {
        sample.values.push_back(static_cast<double>(hboot::uniform_below(rng, 40)));
      }
      const auto s = hboot::summary_stats(sample);
      CHECK(s.min <= s.median);
      CHECK(s.median <= s.max);
      CHECK(s.min <= s.mean);
      CHECK(s.mean <= s.max);
      const bool all_equal =
          std::all_of(sample.values.begin(), sample.values.end(),
                      [&](double v) { return v == sample.values.front(); });
      CHECK((s.sd == 0.0) == all_equal);
    }
  }
}

TEST_CASE("validation helpers") {
  CHECK_THROWS_AS(hboot::validate_profile({"r", "f", {3, -1}}), std::invalid_argument);
  CHECK_THROWS_AS(hboot::validate_sample({"f", {}, IndexKind::raw_h}), std::invalid_argument);
  CHECK_THROWS_AS(hboot::validate_sample({"f", {1.5}, IndexKind::raw_h}), std::invalid_argument);
  CHECK_NOTHROW(hboot::validate_sample({"f", {1.5}, IndexKind::normalized_h}));
  CHECK_THROWS_AS(hboot::validate_sample({"f", {-0.5}, IndexKind::normalized_h}),
                  std::invalid_argument);
}
