#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecpd/eval.hpp"
#include "ecpd/rng.hpp"
#include "ecpd/simlab.hpp"
#include "test_support.hpp"

using ecpd::DivisiveConfig;
using ecpd::GeneratedSeries;
using ecpd::Scenario;
using ecpd::ScenarioKind;
using ecpd::StudyReport;
using ecpd::TimeSeries;
using ecpd::generate;
using ecpd::run_study;
using testsupport::abs_close;

namespace {

double segment_mean(const TimeSeries& s, int from, int to, int dim) {
  double sum = 0.0;
  for (int t = from; t <= to; ++t) sum += s.row(t)[dim];
  return sum / (to - from + 1);
}

double segment_variance(const TimeSeries& s, int from, int to, int dim) {
  double mean = segment_mean(s, from, to, dim);
  double ss = 0.0;
  for (int t = from; t <= to; ++t) {
    double d = s.row(t)[dim] - mean;
    ss += d * d;
  }
  return ss / (to - from);  // n - 1
}

double segment_correlation(const TimeSeries& s, int from, int to, int a, int b) {
  double ma = segment_mean(s, from, to, a);
  double mb = segment_mean(s, from, to, b);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int t = from; t <= to; ++t) {
    double da = s.row(t)[a] - ma;
    double db = s.row(t)[b] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  return sab / std::sqrt(saa * sbb);
}

Scenario make_scenario(ScenarioKind kind, double param, int length, std::uint64_t seed) {
  Scenario scn;
  scn.kind = kind;
  scn.param = param;
  scn.length = length;
  scn.seed = seed;
  return scn;
}

}  // namespace

TEST_CASE("scenario names round trip") {
  for (ScenarioKind kind :
       {ScenarioKind::UniMean, ScenarioKind::UniVariance, ScenarioKind::UniTail,
        ScenarioKind::BiMean, ScenarioKind::BiCorrelation, ScenarioKind::DimCorrelation}) {
    CHECK(ecpd::scenario_kind_from_string(ecpd::to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(ecpd::scenario_kind_from_string("tri-modal"), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(generate(make_scenario(ScenarioKind::UniMean, 0.0, 100, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate(make_scenario(ScenarioKind::UniVariance, 0.0, 300, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate(make_scenario(ScenarioKind::UniTail, -1.0, 300, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate(make_scenario(ScenarioKind::BiCorrelation, 1.0, 300, 1)),
                  std::invalid_argument);
  Scenario dim = make_scenario(ScenarioKind::DimCorrelation, 0.9, 300, 1);
  dim.dimension = 1;
  CHECK_THROWS_AS(generate(dim), std::invalid_argument);
}

TEST_CASE("generation is deterministic and truth sits at the thirds") {
  Scenario scn = make_scenario(ScenarioKind::UniMean, 2.0, 300, 77);
  GeneratedSeries a = generate(scn);
  GeneratedSeries b = generate(scn);
  CHECK(a.series.data() == b.series.data());
  CHECK(a.truth.boundaries() == std::vector<int>{100, 200});
  CHECK(a.series.rows() == 300);
  CHECK(a.series.cols() == 1);

  scn.seed = 78;
  GeneratedSeries c = generate(scn);
  CHECK(a.series.data() != c.series.data());
}

TEST_CASE("uni-mean shifts only the middle third") {
  double mid = 0.0, flank = 0.0;
  const int draws = 100;
  for (int i = 0; i < draws; ++i) {
    GeneratedSeries g = generate(make_scenario(ScenarioKind::UniMean, 3.0, 300, 100 + i));
    mid += segment_mean(g.series, 101, 200, 0);
    flank += (segment_mean(g.series, 1, 100, 0) + segment_mean(g.series, 201, 300, 0)) / 2;
  }
  CHECK(abs_close(mid / draws, 3.0, 0.05));
  CHECK(abs_close(flank / draws, 0.0, 0.05));
}

TEST_CASE("uni-variance rescales only the middle third") {
  double mid = 0.0, flank = 0.0;
  const int draws = 100;
  for (int i = 0; i < draws; ++i) {
    GeneratedSeries g = generate(make_scenario(ScenarioKind::UniVariance, 5.0, 300, 200 + i));
    mid += segment_variance(g.series, 101, 200, 0);
    flank += (segment_variance(g.series, 1, 100, 0) + segment_variance(g.series, 201, 300, 0)) / 2;
  }
  CHECK(abs_close(mid / draws, 5.0, 0.5));
  CHECK(abs_close(flank / draws, 1.0, 0.1));
}

TEST_CASE("uni-tail draws heavy-tailed middle observations") {
  double mid = 0.0, flank = 0.0;
  const int draws = 100;
  for (int i = 0; i < draws; ++i) {
    GeneratedSeries g = generate(make_scenario(ScenarioKind::UniTail, 5.0, 300, 300 + i));
    mid += segment_variance(g.series, 101, 200, 0);
    flank += (segment_variance(g.series, 1, 100, 0) + segment_variance(g.series, 201, 300, 0)) / 2;
  }
  CHECK(abs_close(mid / draws, 5.0 / 3.0, 0.3));  // t5 variance
  CHECK(abs_close(flank / draws, 1.0, 0.1));
}

TEST_CASE("bi-mean shifts both coordinates of the middle third") {
  GeneratedSeries g = generate(make_scenario(ScenarioKind::BiMean, 2.0, 300, 400));
  CHECK(g.series.cols() == 2);
  for (int dim : {0, 1}) {
    CHECK(abs_close(segment_mean(g.series, 101, 200, dim), 2.0, 0.6));
    CHECK(abs_close(segment_mean(g.series, 1, 100, dim), 0.0, 0.6));
  }
}

TEST_CASE("bi-correlation correlates the middle third") {
  double mid = 0.0, flank = 0.0;
  const int draws = 100;
  for (int i = 0; i < draws; ++i) {
    GeneratedSeries g =
        generate(make_scenario(ScenarioKind::BiCorrelation, 0.9, 300, 500 + i));
    double c = segment_correlation(g.series, 101, 200, 0, 1);
    CHECK(abs_close(c, 0.9, 0.2));  // every single draw stays in a loose window
    mid += c;
    flank += segment_correlation(g.series, 1, 100, 0, 1);
  }
  CHECK(abs_close(mid / draws, 0.9, 0.08));
  CHECK(abs_close(flank / draws, 0.0, 0.08));
}

TEST_CASE("dim-correlation with noise confines the change to the first pair") {
  Scenario scn = make_scenario(ScenarioKind::DimCorrelation, 0.9, 300, 600);
  scn.dimension = 9;
  scn.noise = true;
  const int draws = 100;
  std::vector<double> sums(9 * 9, 0.0);
  for (int i = 0; i < draws; ++i) {
    scn.seed = 600 + i;
    GeneratedSeries g = generate(scn);
    REQUIRE(g.series.cols() == 9);
    for (int a = 0; a < 9; ++a) {
      for (int b = a + 1; b < 9; ++b) {
        sums[static_cast<std::size_t>(a) * 9 + b] +=
            segment_correlation(g.series, 101, 200, a, b);
      }
    }
  }
  for (int a = 0; a < 9; ++a) {
    for (int b = a + 1; b < 9; ++b) {
      double avg = sums[static_cast<std::size_t>(a) * 9 + b] / draws;
      CAPTURE(a);
      CAPTURE(b);
      if (a == 0 && b == 1) {
        CHECK(abs_close(avg, 0.9, 0.1));
      } else {
        CHECK(abs_close(avg, 0.0, 0.1));
      }
    }
  }
}

TEST_CASE("dim-correlation without noise correlates every pair") {
  Scenario scn = make_scenario(ScenarioKind::DimCorrelation, 0.5, 300, 700);
  scn.dimension = 5;
  scn.noise = false;
  const int draws = 50;
  double acc = 0.0;
  int pairs = 0;
  for (int i = 0; i < draws; ++i) {
    scn.seed = 700 + i;
    GeneratedSeries g = generate(scn);
    for (int a = 0; a < 5; ++a) {
      for (int b = a + 1; b < 5; ++b) {
        acc += segment_correlation(g.series, 101, 200, a, b);
        ++pairs;
      }
    }
  }
  CHECK(abs_close(acc / pairs, 0.5, 0.05));
}

TEST_CASE("single-replicate studies degenerate cleanly") {
  Scenario scn = make_scenario(ScenarioKind::UniMean, 4.0, 90, 41);
  DivisiveConfig cfg;
  cfg.min_size = 10;
  cfg.num_permutations = 49;
  StudyReport report = run_study(scn, 1, cfg);
  CHECK(report.replications == 1);
  CHECK(report.rand_se == 0.0);
  CHECK(report.generator == std::string(ecpd::kGeneratorId));

  // The single replicate is reproducible by hand from the substreams.
  Scenario rep = scn;
  rep.seed = ecpd::substream(scn.seed, 1, 0);
  DivisiveConfig inner = cfg;
  inner.seed = ecpd::substream(scn.seed, 2, 0);
  GeneratedSeries g = generate(rep);
  auto result = ecpd::e_divisive(g.series, inner);
  CHECK(report.mean_rand == ecpd::rand_index(g.truth, result.final_partition));
}

TEST_CASE("studies are reproducible") {
  Scenario scn = make_scenario(ScenarioKind::UniMean, 4.0, 90, 43);
  DivisiveConfig cfg;
  cfg.min_size = 10;
  cfg.num_permutations = 49;
  StudyReport a = run_study(scn, 8, cfg);
  StudyReport b = run_study(scn, 8, cfg);
  CHECK(a.mean_rand == b.mean_rand);
  CHECK(a.rand_se == b.rand_se);
  CHECK(a.mean_rand > 0.9);  // a 4-sigma shift is easy to find
  CHECK(a.rand_se >= 0.0);
}

TEST_CASE("study reports render as csv and json") {
  Scenario scn = make_scenario(ScenarioKind::UniMean, 4.0, 90, 47);
  DivisiveConfig cfg;
  cfg.min_size = 10;
  cfg.num_permutations = 49;
  StudyReport report = run_study(scn, 2, cfg);

  std::string header = ecpd::study_csv_header();
  std::string row = ecpd::study_csv_row(report);
  auto count_fields = [](const std::string& line) {
    int n = 1;
    for (char c : line) n += (c == ',');
    return n;
  };
  CHECK(count_fields(header) == 15);
  CHECK(count_fields(row) == 15);
  CHECK(row.substr(0, row.find(',')) == "uni-mean");
  CHECK(row.find("mt19937_64/polar") != std::string::npos);

  nlohmann::json j = nlohmann::json::parse(ecpd::study_json(report));
  CHECK(j.at("scenario").get<std::string>() == "uni-mean");
  CHECK(j.at("length").get<int>() == 90);
  CHECK(j.at("replications").get<int>() == 2);
  CHECK(j.at("mean_rand").get<double>() == doctest::Approx(report.mean_rand));
  CHECK(j.at("generator").get<std::string>() == "mt19937_64/polar");
}

TEST_CASE("detection quality improves with series length") {
  DivisiveConfig cfg;
  cfg.min_size = 30;
  cfg.num_permutations = 199;
  double previous = -1.0;
  for (int t : {150, 300, 600}) {
    Scenario scn = make_scenario(ScenarioKind::UniMean, 2.0, t, 7);
    StudyReport report = run_study(scn, 100, cfg);
    CAPTURE(t);
    CHECK(report.mean_rand >= previous);
    previous = report.mean_rand;
  }
  CHECK(previous > 0.99);  // the longest series should be nearly perfect
}
