#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "ecpd/agglo.hpp"
#include "ecpd/csv.hpp"
#include "ecpd/divisive.hpp"
#include "ecpd/eval.hpp"
#include "ecpd/num_format.hpp"
#include "ecpd/result_io.hpp"
#include "ecpd/simlab.hpp"

namespace {

// --threads beats ECPD_THREADS beats the OpenMP default.
void configure_threads(int flag_value) {
#ifdef _OPENMP
  int n = 0;
  if (flag_value > 0) {
    n = flag_value;
  } else if (const char* env = std::getenv("ECPD_THREADS")) {
    n = std::atoi(env);
  }
  if (n > 0) omp_set_num_threads(n);
#else
  (void)flag_value;
#endif
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << text;
}

void emit_plot_data(const ecpd::TimeSeries& series, const std::vector<int>& change_points,
                    const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / "segments.csv", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write plot data in: " + dir);
  out << "segment,start,end,dim,mean,variance\n";
  ecpd::Partition partition(series.rows(), change_points);
  for (int i = 0; i < partition.cluster_count(); ++i) {
    ecpd::Segment seg = partition.cluster(i);
    for (int d = 0; d < series.cols(); ++d) {
      double sum = 0.0;
      for (int t = seg.start; t <= seg.end; ++t) sum += series.row(t)[d];
      double mean = sum / seg.length();
      double ss = 0.0;
      for (int t = seg.start; t <= seg.end; ++t) {
        double diff = series.row(t)[d] - mean;
        ss += diff * diff;
      }
      double variance = seg.length() > 1 ? ss / (seg.length() - 1) : 0.0;
      out << i + 1 << ',' << seg.start << ',' << seg.end << ',' << d + 1 << ','
          << ecpd::format_double(mean) << ',' << ecpd::format_double(variance) << '\n';
    }
  }
}

// Change points given as either a comma-separated tau list or a path to a
// previously written result document. length 0 = not specified.
ecpd::Partition parse_partition_arg(const std::string& text, int length) {
  namespace fs = std::filesystem;
  if (fs::exists(fs::path(text))) {
    std::ifstream in(text, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    ecpd::ResultDocument doc = ecpd::parse_document(buf.str());
    if (length > 0 && length != doc.length) {
      throw std::runtime_error("document length disagrees with --T");
    }
    return ecpd::Partition(doc.length, doc.change_points);
  }
  if (length <= 0) throw std::runtime_error("--T is required with tau-list arguments");
  std::vector<int> taus;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    int tau = std::stoi(token, &used);
    if (used != token.size()) throw std::runtime_error("bad change-point list: " + text);
    taus.push_back(tau);
  }
  return ecpd::Partition(length, taus);
}

int run(int argc, char** argv) {
  CLI::App app{"Energy-statistic change point detection"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = default)");

  // detect
  auto* detect = app.add_subcommand("detect", "Detect change points in a CSV series");
  std::string input, method = "divisive", output, plot_dir;
  double alpha = 1.0, significance = 0.05;
  int min_size = 30, permutations = 499, init_width = 30, max_cp = -1;
  std::uint64_t seed = 0;
  bool header = false, impute = false;
  std::string delimiter = ",";
  std::vector<int> columns;
  detect->add_option("--input", input, "Input CSV path")->required();
  detect->add_option("--method", method, "divisive or agglo")
      ->check(CLI::IsMember({"divisive", "agglo"}));
  detect->add_option("--alpha", alpha, "Distance exponent in (0,2)");
  detect->add_option("--min-size", min_size, "Minimum cluster size (divisive)");
  detect->add_option("--perms", permutations, "Permutation replicates R");
  detect->add_option("--sig", significance, "Significance level p0");
  detect->add_option("--seed", seed, "Permutation seed");
  detect->add_option("--init-width", init_width, "Initial cluster width (agglo)");
  detect->add_option("--max-cp", max_cp, "Stop after this many change points");
  detect->add_option("--output", output, "Write the result document here instead of stdout");
  detect->add_option("--emit-plot-data", plot_dir, "Write per-segment summary tables to DIR");
  detect->add_flag("--header", header, "First CSV record is a header");
  detect->add_option("--delimiter", delimiter, "Field delimiter (one character)");
  detect->add_option("--columns", columns, "1-based column subset")->delimiter(',');
  detect->add_flag("--impute", impute, "Impute missing cells from column neighbors");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo study");
  std::string scenario_name;
  double param = 0.0;
  int dim = 2, length = 300, reps = 100;
  bool noise = false, param_given = false;
  int sim_min_size = 30, sim_perms = 199;
  double sim_alpha = 1.0, sim_sig = 0.05;
  std::uint64_t sim_seed = 0;
  std::string json_path;
  simulate->add_option("--scenario", scenario_name,
                       "uni-mean, uni-variance, uni-tail, bi-mean, bi-correlation, dim-correlation")
      ->required()
      ->check(CLI::IsMember({"uni-mean", "uni-variance", "uni-tail", "bi-mean",
                             "bi-correlation", "dim-correlation"}));
  simulate->add_option("--param", param, "Scenario parameter (mu, sigma^2, nu or rho)");
  simulate->add_option("--dim", dim, "Dimension (dim-correlation)");
  simulate->add_flag("--noise", noise, "Correlate only the first two coordinates");
  simulate->add_option("--T", length, "Series length (multiple of 3)");
  simulate->add_option("--reps", reps, "Replications");
  simulate->add_option("--seed", sim_seed, "Master seed");
  simulate->add_option("--alpha", sim_alpha, "Distance exponent");
  simulate->add_option("--min-size", sim_min_size, "Minimum cluster size");
  simulate->add_option("--perms", sim_perms, "Permutation replicates R");
  simulate->add_option("--sig", sim_sig, "Significance level p0");
  simulate->add_option("--output-json", json_path, "Also write the report as JSON here");

  // eval
  auto* eval = app.add_subcommand("eval", "Compare two partitions");
  std::string truth_arg, estimate_arg;
  int eval_length = 0;
  bool eval_length_given = false;
  eval->add_option("--truth", truth_arg, "tau list (e.g. 100,200) or result JSON path")
      ->required();
  eval->add_option("--estimate", estimate_arg, "tau list or result JSON path")->required();
  eval->add_option("--T", eval_length, "Series length (required with tau lists)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }
  configure_threads(threads);
  eval_length_given = eval->count("--T") > 0;
  param_given = simulate->count("--param") > 0;

  if (*detect) {
    if (delimiter.size() != 1) throw std::runtime_error("--delimiter must be one character");
    ecpd::CsvOptions options{header, delimiter[0], columns, impute};
    ecpd::TimeSeries series = ecpd::ingest_csv(input, options);
    ecpd::ResultDocument doc;
    auto start = std::chrono::steady_clock::now();
    if (method == "divisive") {
      ecpd::DivisiveConfig cfg{ecpd::Alpha(alpha), min_size, permutations, significance,
                               max_cp >= 0 ? std::optional<int>(max_cp) : std::nullopt, seed};
      ecpd::DivisiveResult result = ecpd::e_divisive(series, cfg);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      doc = ecpd::make_document(result, series.cols(), secs);
    } else {
      ecpd::InitialClustering init = ecpd::InitialClustering::equal_width(series.rows(), init_width);
      ecpd::MergeTrace trace = ecpd::e_agglo(series, init, ecpd::Alpha(alpha));
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      doc = ecpd::make_document(trace, series.rows(), series.cols(), alpha, init_width, secs);
    }
    write_output(ecpd::to_json(doc), output);
    if (!plot_dir.empty()) emit_plot_data(series, doc.change_points, plot_dir);
    return 0;
  }

  if (*simulate) {
    ecpd::Scenario scn;
    scn.kind = ecpd::scenario_kind_from_string(scenario_name);
    scn.param = param_given ? param
                            : (scn.kind == ecpd::ScenarioKind::DimCorrelation ? 0.9 : 0.0);
    scn.dimension = dim;
    scn.noise = noise;
    scn.length = length;
    scn.seed = sim_seed;
    ecpd::DivisiveConfig cfg{ecpd::Alpha(sim_alpha), sim_min_size, sim_perms, sim_sig,
                             std::nullopt, 0};
    ecpd::StudyReport report = ecpd::run_study(scn, reps, cfg);
    std::cout << ecpd::study_csv_header() << '\n' << ecpd::study_csv_row(report) << '\n';
    if (!json_path.empty()) write_output(ecpd::study_json(report) + "\n", json_path);
    return 0;
  }

  if (*eval) {
    int given = eval_length_given ? eval_length : 0;
    ecpd::Partition truth = parse_partition_arg(truth_arg, given);
    ecpd::Partition estimate = parse_partition_arg(estimate_arg, given);
    std::cout << "rand " << ecpd::format_double(ecpd::rand_index(truth, estimate)) << '\n';
    std::cout << "adjusted_rand " << ecpd::format_double(ecpd::adjusted_rand(truth, estimate))
              << '\n';
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
