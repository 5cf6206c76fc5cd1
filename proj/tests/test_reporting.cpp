#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <string>
#include <vector>

#include "hboot/report.hpp"

using hboot::Dataset;
using hboot::DatasetKind;
using hboot::IndexKind;
using hboot::IndexSample;
using hboot::RunOptions;
using hboot::StatisticKind;

namespace {

Dataset two_field_dataset() {
  Dataset ds;
  ds.samples["alpha"] = {"alpha", {10, 12, 13, 15, 16, 18, 20, 21, 23, 26}, IndexKind::raw_h};
  ds.samples["beta"] = {"beta", {40, 42, 45, 47, 50, 52, 55, 58, 60, 64}, IndexKind::raw_h};
  return ds;
}

RunOptions quick_options() {
  RunOptions opt;
  opt.b = 200;
  opt.seed = 31;
  opt.coverage_reps = 60;
  return opt;
}

}  // namespace

TEST_CASE("format_fixed rounds half away from zero") {
  CHECK(hboot::format_fixed(0.125, 2) == "0.13");
  CHECK(hboot::format_fixed(-0.125, 2) == "-0.13");
  CHECK(hboot::format_fixed(2.5, 0) == "3");
  CHECK(hboot::format_fixed(-2.5, 0) == "-3");
  CHECK(hboot::format_fixed(90.25, 1) == "90.3");
  CHECK(hboot::format_fixed(0.903 * 100.0, 1) == "90.3");
  CHECK(hboot::format_fixed(-0.0004, 2) == "0.00");  // no negative zero
  CHECK(hboot::format_fixed(26.0, 2) == "26.00");
  CHECK(hboot::format_level_percent(0.90) == "90%");
  CHECK(hboot::format_level_percent(0.975) == "97.5%");
}

TEST_CASE("run_ci report structure") {
  const Dataset ds = two_field_dataset();
  const hboot::CiReport report = run_ci(ds, quick_options());

  // alpha, beta, TOTAL x mean, median
  REQUIRE(report.rows.size() == 6);
  CHECK(report.rows[0].field_id == "alpha");
  CHECK(report.rows[0].statistic == StatisticKind::mean);
  CHECK(report.rows[1].statistic == StatisticKind::median);
  CHECK(report.rows[4].field_id == hboot::kPooledFieldName);
  CHECK(report.rows[4].sample_size == 20);

  for (const auto& row : report.rows) {
    REQUIRE(row.intervals.size() == 8);  // 4 methods x 2 levels
    for (const auto& ci : row.intervals) CHECK(ci.lower <= ci.upper);
  }

  SECTION("csv header lays out methods within levels") {
    const std::string csv = render_ci_csv(report);
    CHECK(csv.rfind("field,statistic,n,estimate,bias,std_error,"
                    "NB (90%),BB (90%),PB (90%),BCa (90%),"
                    "NB (95%),BB (95%),PB (95%),BCa (95%)\n", 0) == 0);
    CHECK(csv.find("TOTAL,mean,") != std::string::npos);
  }

  SECTION("json is parseable and rounded to report precision") {
    const auto doc = nlohmann::json::parse(render_ci_json(report));
    REQUIRE(doc.at("rows").size() == 6);
    const auto& row = doc.at("rows").at(0);
    CHECK(row.at("field_id") == "alpha");
    const double est = row.at("estimate").get<double>();
    CHECK(est == Catch::Approx(17.4).margin(1e-9));  // mean of alpha, two decimals
    REQUIRE(row.at("intervals").size() == 8);
  }

  SECTION("no TOTAL row for a single field or when disabled") {
    Dataset single;
    single.samples["alpha"] = ds.samples.at("alpha");
    CHECK(run_ci(single, quick_options()).rows.size() == 2);

    RunOptions opt = quick_options();
    opt.include_total = false;
    CHECK(run_ci(ds, opt).rows.size() == 4);
  }
}

TEST_CASE("run_ci on a constant field degenerates every interval") {
  Dataset ds;
  ds.samples["const"] = {"const", std::vector<double>(12, 9.0), IndexKind::raw_h};
  const hboot::CiReport report = run_ci(ds, quick_options());
  for (const auto& row : report.rows) {
    CHECK(row.estimate == 9.0);
    CHECK(row.std_error == 0.0);
    for (const auto& ci : row.intervals) {
      CHECK(ci.lower == 9.0);
      CHECK(ci.upper == 9.0);
    }
  }
}

TEST_CASE("run_ci determinism across runs and thread counts") {
  const Dataset ds = two_field_dataset();
  RunOptions opt = quick_options();
  opt.threads = 1;
  const std::string a = render_ci_csv(run_ci(ds, opt));
  const std::string b = render_ci_csv(run_ci(ds, opt));
  opt.threads = 4;
  const std::string c = render_ci_csv(run_ci(ds, opt));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("infeasible level/B combinations fail before computing") {
  const Dataset ds = two_field_dataset();
  RunOptions opt = quick_options();
  opt.b = 10;
  opt.levels = {0.95};
  CHECK_THROWS_AS(run_ci(ds, opt), hboot::infeasible_error);
  CHECK_THROWS_AS(run_coverage_all(ds, opt), hboot::infeasible_error);
}

TEST_CASE("run_normalize") {
  Dataset ds = two_field_dataset();
  ds.norms["alpha"] = {"alpha", 2.0, 8.0, 4.0, 2.0, 100};  // f = (8/2)^(2/3)
  ds.norms["beta"] = {"beta", 8.0, 8.0, 8.0, 2.0, 200};    // reference: f = 1
  ds.reference_field = "beta";

  SECTION("reference field is unchanged under the chi scaling") {
    const Dataset out = run_normalize(ds, IndexKind::normalized_h);
    CHECK(out.samples.at("beta").values == ds.samples.at("beta").values);
    CHECK(out.samples.at("beta").kind == IndexKind::normalized_h);
    const double factor = hboot::normalization_factor(8.0, 2.0);
    for (std::size_t i = 0; i < out.samples.at("alpha").values.size(); ++i) {
      CHECK(out.samples.at("alpha").values[i] ==
            factor * ds.samples.at("alpha").values[i]);
    }
  }
  SECTION("n-index divides by the journal maximum") {
    const Dataset out = run_normalize(ds, IndexKind::n_index);
    CHECK(out.samples.at("alpha").values[0] == 0.1);  // 10 / 100
    CHECK(out.samples.at("beta").values[0] == 0.2);   // 40 / 200
  }
  SECTION("generalized needs citation profiles") {
    CHECK_THROWS_WITH(run_normalize(ds, IndexKind::generalized_h),
                      Catch::Matchers::ContainsSubstring("citation profiles"));
  }
  SECTION("missing norms are reported with the field list") {
    Dataset missing = two_field_dataset();
    missing.norms["alpha"] = ds.norms["alpha"];
    missing.reference_field = "alpha";
    CHECK_THROWS_WITH(run_normalize(missing, IndexKind::n_index),
                      Catch::Matchers::ContainsSubstring("missing norms") &&
                          Catch::Matchers::ContainsSubstring("beta"));
  }
  SECTION("normalized output feeds back into run_ci") {
    const Dataset out = run_normalize(ds, IndexKind::normalized_h);
    const hboot::CiReport report = run_ci(out, quick_options());
    CHECK(report.kind == IndexKind::normalized_h);
  }
  SECTION("raw_h target is rejected") {
    CHECK_THROWS_AS(run_normalize(ds, IndexKind::raw_h), std::invalid_argument);
  }
}

TEST_CASE("run_normalize generalized from profiles") {
  Dataset ds;
  ds.profiles.push_back({"r1", "alpha", {50, 30, 20, 10, 5}});
  ds.profiles.push_back({"r2", "alpha", {8, 2}});
  for (const auto& p : ds.profiles) {
    hboot::detail::append_value(ds, p.field_id, p.researcher_id,
                                static_cast<double>(hboot::h_index(p)), IndexKind::raw_h);
  }
  hboot::FieldNorms norms;
  norms.field_id = "alpha";
  norms.chi = 2.0;
  norms.chi_ref = 2.0;
  norms.c0 = 5.0;
  norms.n0 = 2.0;
  norms.journal_h_max = 100;
  ds.norms["alpha"] = norms;
  ds.reference_field = "alpha";

  const Dataset out = run_normalize(ds, IndexKind::generalized_h);
  REQUIRE(out.samples.at("alpha").values.size() == 2);
  CHECK(out.samples.at("alpha").values[0] == hboot::generalized_h(ds.profiles[0], 5.0, 2.0));
  CHECK(out.samples.at("alpha").values[1] == hboot::generalized_h(ds.profiles[1], 5.0, 2.0));
  CHECK(out.samples.at("alpha").kind == IndexKind::generalized_h);
}

TEST_CASE("run_coverage_all") {
  SECTION("a constant field is covered everywhere") {
    Dataset ds;
    ds.samples["const"] = {"const", std::vector<double>(10, 4.0), IndexKind::raw_h};
    const auto reports = run_coverage_all(ds, quick_options());
    REQUIRE(reports.size() == 2);  // mean + median
    for (const auto& report : reports) {
      for (const auto& cell : report.cells) {
        CHECK(cell.observed_coverage == 1.0);
      }
    }
  }
  SECTION("TOTAL population appears with at least two fields") {
    const auto reports = run_coverage_all(two_field_dataset(), quick_options());
    REQUIRE(reports.size() == 6);
    CHECK(reports[4].field_id == hboot::kPooledFieldName);
    CHECK(reports[4].statistic == StatisticKind::mean);
    CHECK(reports[5].statistic == StatisticKind::median);
  }
  SECTION("coverage csv lays out level-stacked tables with TOTAL rows") {
    RunOptions opt = quick_options();
    const auto reports = run_coverage_all(two_field_dataset(), opt);
    const std::string csv = render_coverage_csv(reports, opt.levels);
    CHECK(csv.rfind("level,field,method,oc_mean,lower_miss_mean,upper_miss_mean,"
                    "oc_median,lower_miss_median,upper_miss_median\n", 0) == 0);
    CHECK(csv.find("90%,alpha,NB,") != std::string::npos);
    CHECK(csv.find("95%,TOTAL,BCa,") != std::string::npos);
    // one decimal per percentage cell
    const auto first_row_start = csv.find("90%,alpha,NB,");
    const auto line_end = csv.find('\n', first_row_start);
    const std::string row = csv.substr(first_row_start, line_end - first_row_start);
    CHECK(std::count(row.begin(), row.end(), '.') == 6);
  }
  SECTION("coverage json carries exact counts") {
    RunOptions opt = quick_options();
    Dataset ds;
    ds.samples["alpha"] = two_field_dataset().samples.at("alpha");
    const auto reports = run_coverage_all(ds, opt);
    const auto doc = nlohmann::json::parse(render_coverage_json(reports));
    for (const auto& r : doc.at("reports")) {
      for (const auto& c : r.at("cells")) {
        const auto total = c.at("covered").get<std::uint64_t>() +
                           c.at("missed_low").get<std::uint64_t>() +
                           c.at("missed_high").get<std::uint64_t>();
        CHECK(total == opt.coverage_reps);
      }
    }
  }
}

TEST_CASE("interval chart rendering") {
  const Dataset ds = two_field_dataset();
  RunOptions opt = quick_options();
  opt.include_total = false;
  const hboot::CiReport report = run_ci(ds, opt);
  const std::string svg = render_ci_chart(report, hboot::IntervalMethod::basic_bootstrap, 0.90,
                                          StatisticKind::mean);
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("alpha") != std::string::npos);
  CHECK(svg.find("beta") != std::string::npos);
  // one center marker per field
  std::size_t markers = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1)) {
    ++markers;
  }
  CHECK(markers == 2);
  CHECK(svg.find("90% basic bootstrap confidence intervals") != std::string::npos);

  SECTION("deterministic bytes") {
    CHECK(svg == render_ci_chart(report, hboot::IntervalMethod::basic_bootstrap, 0.90,
                                 StatisticKind::mean));
  }
  SECTION("degenerate single entry still renders") {
    const std::string one = hboot::render_interval_chart({{"only", 5.0, 5.0, 5.0}}, "t", "x");
    CHECK(one.rfind("<svg ", 0) == 0);
  }
  SECTION("empty entries are rejected") {
    CHECK_THROWS_AS(hboot::render_interval_chart({}, "t", "x"), std::invalid_argument);
  }
}

namespace {

// x1/x2 of the horizontal (y1 == y2) colored segments, in document order.
std::vector<std::pair<double, double>> segment_spans(const std::string& svg) {
  std::vector<std::pair<double, double>> spans;
  for (std::size_t pos = svg.find("<line"); pos != std::string::npos;
       pos = svg.find("<line", pos + 1)) {
    const std::string tag = svg.substr(pos, svg.find("/>", pos) - pos);
    if (tag.find("stroke=\"#1f4e8c\"") == std::string::npos) continue;
    const auto attr = [&](const std::string& name) {
      const auto at = tag.find(name + "=\"") + name.size() + 2;
      return std::stod(tag.substr(at));
    };
    if (attr("y1") == attr("y2")) spans.emplace_back(attr("x1"), attr("x2"));
  }
  return spans;
}

}  // namespace

TEST_CASE("disjoint intervals never overlap in the chart") {
  const std::string svg = hboot::render_interval_chart(
      {{"low", 1.0, 2.0, 1.5}, {"high", 10.0, 12.0, 11.0}}, "t", "x");
  const auto spans = segment_spans(svg);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].second < spans[1].first);
}
