#include <doctest.h>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecpd/result_io.hpp"
#include "ecpd/rng.hpp"
#include "test_support.hpp"

using testsupport::CommandResult;
using testsupport::TempDir;
using testsupport::contains;
using testsupport::ecpd_binary;
using testsupport::read_file;
using testsupport::run_command;

namespace {

std::string ten_sigma_csv() {
  ecpd::Sampler rng(4711);
  std::ostringstream out;
  out << std::setprecision(17);
  for (int i = 0; i < 30; ++i) out << rng.normal() << '\n';
  for (int i = 0; i < 30; ++i) out << rng.normal() + 10.0 << '\n';
  return out.str();
}

std::string constant_csv(int rows) {
  std::ostringstream out;
  for (int i = 0; i < rows; ++i) out << "2.5\n";
  return out.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  std::string bin = ecpd_binary();
  CHECK(run_command(bin).exit_code == 2);
  CHECK(run_command(bin + " detect").exit_code == 2);  // --input is required
  CHECK(run_command(bin + " simulate --scenario tri-modal --T 30").exit_code == 2);
  CHECK(run_command(bin + " detect --input x.csv --method sideways").exit_code == 2);
  CHECK(run_command(bin + " --help").exit_code == 0);
}

TEST_CASE("domain errors exit with code 1") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto nan_file = dir.write_file("bad.csv", "1\n2\nNaN\n4\n");
  CommandResult r = run_command(bin + " detect --input " + nan_file.string());
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "line 3, column 1"));

  CommandResult missing = run_command(bin + " detect --input " + (dir.path() / "nope.csv").string());
  CHECK(missing.exit_code == 1);
  CHECK(contains(missing.output, "cannot open"));

  // tau lists need a length.
  CHECK(run_command(bin + " eval --truth 2 --estimate 1").exit_code == 1);
}

TEST_CASE("detect finds the ten-sigma step and writes a canonical document") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("step.csv", ten_sigma_csv());
  auto output = dir.path() / "result.json";

  CommandResult r = run_command(bin + " detect --input " + input.string() +
                                " --min-size 10 --perms 199 --seed 9 --output " +
                                output.string());
  REQUIRE(r.exit_code == 0);

  ecpd::ResultDocument doc = ecpd::parse_document(read_file(output));
  CHECK(doc.method == "divisive");
  CHECK(doc.length == 60);
  CHECK(doc.dimension == 1);
  REQUIRE(doc.change_points.size() == 1);
  CHECK(std::abs(doc.change_points[0] - 30) <= 2);
  REQUIRE(!doc.estimates.empty());
  CHECK(doc.estimates[0].significant);
  CHECK(doc.estimates[0].pvalue < 0.05);
  CHECK(doc.min_size.value() == 10);
  CHECK(doc.permutations.value() == 199);
  CHECK(doc.seed.value() == 9);
  CHECK(doc.duration_seconds >= 0.0);
}

TEST_CASE("detect is byte-stable across thread counts once duration is cleared") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("step.csv", ten_sigma_csv());
  auto out1 = dir.path() / "one.json";
  auto out4 = dir.path() / "four.json";

  std::string base = " detect --input " + input.string() +
                     " --min-size 10 --perms 99 --seed 7 --output ";
  REQUIRE(run_command(bin + " --threads 1" + base + out1.string()).exit_code == 0);
  REQUIRE(run_command(bin + " --threads 4" + base + out4.string()).exit_code == 0);

  ecpd::ResultDocument a = ecpd::parse_document(read_file(out1));
  ecpd::ResultDocument b = ecpd::parse_document(read_file(out4));
  a.duration_seconds = 0.0;
  b.duration_seconds = 0.0;
  CHECK(ecpd::to_json(a) == ecpd::to_json(b));
}

TEST_CASE("agglomerative detection reports nothing on constant data") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("flat.csv", constant_csv(60));
  auto output = dir.path() / "result.json";

  CommandResult r = run_command(bin + " detect --method agglo --init-width 10 --input " +
                                input.string() + " --output " + output.string());
  REQUIRE(r.exit_code == 0);
  ecpd::ResultDocument doc = ecpd::parse_document(read_file(output));
  CHECK(doc.method == "agglo");
  CHECK(doc.change_points.empty());
  CHECK(doc.init_width.value() == 10);
  CHECK(doc.best_k.value() == 6);  // ties keep the initial clustering
  for (double g : doc.gof) CHECK(g == 0.0);
}

TEST_CASE("agglomerative detection finds the ten-sigma step") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("step.csv", ten_sigma_csv());
  auto output = dir.path() / "result.json";

  CommandResult r = run_command(bin + " detect --method agglo --init-width 10 --input " +
                                input.string() + " --output " + output.string());
  REQUIRE(r.exit_code == 0);
  ecpd::ResultDocument doc = ecpd::parse_document(read_file(output));
  REQUIRE(!doc.change_points.empty());
  bool near = false;
  for (int tau : doc.change_points) near = near || std::abs(tau - 30) <= 2;
  CHECK(near);
}

TEST_CASE("csv flags reach the parser") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("table.csv", "t;a;b\n1;2.5;na\n2;2.5;7\n3;2.5;8\n4;2.5;9\n"
                                           "5;2.5;10\n6;2.5;11\n7;2.5;12\n8;2.5;13\n"
                                           "9;2.5;14\n10;2.5;15\n");
  auto output = dir.path() / "result.json";

  // Column 3 holds a missing cell; selecting column 2 avoids it.
  CommandResult ok = run_command(bin + " detect --header --delimiter ';' --columns 2" +
                                 " --min-size 5 --input " + input.string() + " --output " +
                                 output.string());
  REQUIRE(ok.exit_code == 0);
  ecpd::ResultDocument doc = ecpd::parse_document(read_file(output));
  CHECK(doc.length == 10);
  CHECK(doc.dimension == 1);
  CHECK(doc.change_points.empty());

  CommandResult bad = run_command(bin + " detect --header --delimiter ';' --columns 3" +
                                  " --min-size 5 --input " + input.string());
  CHECK(bad.exit_code == 1);
  CHECK(contains(bad.output, "line 2, column 3"));

  CommandResult imputed = run_command(bin + " detect --header --delimiter ';' --columns 3" +
                                      " --impute --min-size 5 --input " + input.string() +
                                      " --output " + output.string());
  CHECK(imputed.exit_code == 0);
}

TEST_CASE("plot data emits one row per segment and dimension") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("step.csv", ten_sigma_csv());
  auto plots = dir.path() / "plots";

  CommandResult r = run_command(bin + " detect --input " + input.string() +
                                " --min-size 10 --perms 99 --seed 2 --output " +
                                (dir.path() / "r.json").string() + " --emit-plot-data " +
                                plots.string());
  REQUIRE(r.exit_code == 0);
  std::string table = read_file(plots / "segments.csv");
  std::istringstream lines(table);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "segment,start,end,dim,mean,variance");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].substr(0, 4) == "1,1,");
  // The post-change segment mean sits near ten.
  auto last_comma = rows[1].rfind(',');
  auto mean_start = rows[1].rfind(',', last_comma - 1) + 1;
  double mean = std::stod(rows[1].substr(mean_start, last_comma - mean_start));
  CHECK(std::fabs(mean - 10.0) < 1.0);
}

TEST_CASE("eval prints both indices") {
  std::string bin = ecpd_binary();
  CommandResult r = run_command(ecpd_binary() + " eval --truth 2 --estimate 1 --T 4");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "rand 0.5\n"));
  CHECK(contains(r.output, "adjusted_rand 0\n"));

  CommandResult same = run_command(bin + " eval --truth 100,200 --estimate 100,200 --T 300");
  CHECK(same.exit_code == 0);
  CHECK(contains(same.output, "rand 1\n"));
  CHECK(contains(same.output, "adjusted_rand 1\n"));
}

TEST_CASE("eval accepts result documents in place of tau lists") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto input = dir.write_file("step.csv", ten_sigma_csv());
  auto output = dir.path() / "result.json";
  REQUIRE(run_command(bin + " detect --input " + input.string() +
                      " --min-size 10 --perms 99 --seed 3 --output " + output.string())
              .exit_code == 0);

  ecpd::ResultDocument doc = ecpd::parse_document(read_file(output));
  REQUIRE(!doc.change_points.empty());
  std::string taus;
  for (std::size_t i = 0; i < doc.change_points.size(); ++i) {
    if (i > 0) taus += ',';
    taus += std::to_string(doc.change_points[i]);
  }
  CommandResult r = run_command(bin + " eval --truth " + taus + " --estimate " + output.string() + " --T 60");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "rand 1\n"));

  CommandResult clash = run_command(bin + " eval --truth 30 --estimate " + output.string() + " --T 90");
  CHECK(clash.exit_code == 1);
  CHECK(contains(clash.output, "disagrees"));
}

TEST_CASE("simulate emits a csv study row and optional json") {
  std::string bin = ecpd_binary();
  TempDir dir;
  auto json_path = dir.path() / "study.json";
  CommandResult r = run_command(bin + " simulate --scenario uni-mean --param 4 --T 90" +
                                " --reps 2 --seed 5 --min-size 10 --perms 49 --output-json " +
                                json_path.string());
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK(header.substr(0, 9) == "scenario,");
  CHECK(row.substr(0, 11) == "uni-mean,4,");

  nlohmann::json j = nlohmann::json::parse(read_file(json_path));
  CHECK(j.at("scenario").get<std::string>() == "uni-mean");
  CHECK(j.at("replications").get<int>() == 2);
  double mean = j.at("mean_rand").get<double>();
  CHECK(mean >= 0.0);
  CHECK(mean <= 1.0);
}
