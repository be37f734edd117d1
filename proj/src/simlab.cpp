#include "ecpd/simlab.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ecpd/eval.hpp"
#include "ecpd/num_format.hpp"
#include "ecpd/rng.hpp"

namespace ecpd {
namespace {

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
std::vector<double> cholesky_lower(const std::vector<double>& sigma, int d) {
  std::vector<double> l(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = sigma[static_cast<std::size_t>(i) * d + j];
      for (int k = 0; k < j; ++k) {
        acc -= l[static_cast<std::size_t>(i) * d + k] * l[static_cast<std::size_t>(j) * d + k];
      }
      if (i == j) {
        if (acc <= 0.0) throw std::invalid_argument("covariance is not positive definite");
        l[static_cast<std::size_t>(i) * d + i] = std::sqrt(acc);
      } else {
        l[static_cast<std::size_t>(i) * d + j] = acc / l[static_cast<std::size_t>(j) * d + j];
      }
    }
  }
  return l;
}

std::vector<double> middle_factor(const Scenario& scn, int d) {
  std::vector<double> sigma(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) sigma[static_cast<std::size_t>(i) * d + i] = 1.0;
  switch (scn.kind) {
    case ScenarioKind::BiCorrelation:
      sigma[1] = sigma[2] = scn.param;
      break;
    case ScenarioKind::DimCorrelation:
      if (scn.noise) {
        // Change confined to the first two coordinates; the rest stay noise.
        sigma[1] = sigma[static_cast<std::size_t>(d)] = scn.param;
      } else {
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            if (i != j) sigma[static_cast<std::size_t>(i) * d + j] = scn.param;
      }
      break;
    default:
      break;
  }
  return cholesky_lower(sigma, d);
}

}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::UniMean: return "uni-mean";
    case ScenarioKind::UniVariance: return "uni-variance";
    case ScenarioKind::UniTail: return "uni-tail";
    case ScenarioKind::BiMean: return "bi-mean";
    case ScenarioKind::BiCorrelation: return "bi-correlation";
    case ScenarioKind::DimCorrelation: return "dim-correlation";
  }
  throw std::invalid_argument("unknown scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "uni-mean") return ScenarioKind::UniMean;
  if (name == "uni-variance") return ScenarioKind::UniVariance;
  if (name == "uni-tail") return ScenarioKind::UniTail;
  if (name == "bi-mean") return ScenarioKind::BiMean;
  if (name == "bi-correlation") return ScenarioKind::BiCorrelation;
  if (name == "dim-correlation") return ScenarioKind::DimCorrelation;
  throw std::invalid_argument("unknown scenario: " + name);
}

int Scenario::effective_dimension() const {
  switch (kind) {
    case ScenarioKind::UniMean:
    case ScenarioKind::UniVariance:
    case ScenarioKind::UniTail:
      return 1;
    case ScenarioKind::BiMean:
    case ScenarioKind::BiCorrelation:
      return 2;
    case ScenarioKind::DimCorrelation:
      return dimension;
  }
  throw std::invalid_argument("unknown scenario kind");
}

void Scenario::validate() const {
  if (length < 3 || length % 3 != 0) {
    throw std::invalid_argument("scenario length must be a positive multiple of 3");
  }
  switch (kind) {
    case ScenarioKind::UniMean:
    case ScenarioKind::BiMean:
      break;
    case ScenarioKind::UniVariance:
      if (!(param > 0.0)) throw std::invalid_argument("variance must be positive");
      break;
    case ScenarioKind::UniTail:
      if (!(param > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
      break;
    case ScenarioKind::BiCorrelation:
      if (!(std::fabs(param) < 1.0)) throw std::invalid_argument("|rho| must be below 1");
      break;
    case ScenarioKind::DimCorrelation:
      if (!(std::fabs(param) < 1.0)) throw std::invalid_argument("|rho| must be below 1");
      if (dimension < 2) throw std::invalid_argument("dim-correlation needs dimension >= 2");
      break;
  }
}

GeneratedSeries generate(const Scenario& scn) {
  scn.validate();
  const int t = scn.length;
  const int third = t / 3;
  const int d = scn.effective_dimension();
  Sampler rng(scn.seed);

  std::vector<double> factor;
  if (scn.kind == ScenarioKind::BiCorrelation || scn.kind == ScenarioKind::DimCorrelation) {
    factor = middle_factor(scn, d);
  }

  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(t) * d);
  std::vector<double> z(d);
  for (int row = 1; row <= t; ++row) {
    const bool middle = row > third && row <= 2 * third;
    switch (scn.kind) {
      case ScenarioKind::UniMean:
        data.push_back(rng.normal() + (middle ? scn.param : 0.0));
        break;
      case ScenarioKind::UniVariance:
        data.push_back(middle ? rng.normal() * std::sqrt(scn.param) : rng.normal());
        break;
      case ScenarioKind::UniTail:
        data.push_back(middle ? rng.student_t(scn.param) : rng.normal());
        break;
      case ScenarioKind::BiMean:
        data.push_back(rng.normal() + (middle ? scn.param : 0.0));
        data.push_back(rng.normal() + (middle ? scn.param : 0.0));
        break;
      case ScenarioKind::BiCorrelation:
      case ScenarioKind::DimCorrelation:
        for (int k = 0; k < d; ++k) z[k] = rng.normal();
        if (middle) {
          for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int k = 0; k <= i; ++k) acc += factor[static_cast<std::size_t>(i) * d + k] * z[k];
            data.push_back(acc);
          }
        } else {
          for (int k = 0; k < d; ++k) data.push_back(z[k]);
        }
        break;
    }
  }

  return {TimeSeries(std::move(data), t, d), Partition(t, {third, 2 * third})};
}

StudyReport run_study(const Scenario& scn, int replications, const DivisiveConfig& detector) {
  scn.validate();
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");

  std::vector<double> rand_values(replications, 0.0);
  std::vector<double> runtimes(replications, 0.0);

  // Per-slot results keep the aggregate independent of scheduling.
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < replications; ++i) {
    Scenario rep = scn;
    rep.seed = substream(scn.seed, 1, static_cast<std::uint64_t>(i));
    DivisiveConfig cfg = detector;
    cfg.seed = substream(scn.seed, 2, static_cast<std::uint64_t>(i));
    GeneratedSeries gen = generate(rep);
    auto start = std::chrono::steady_clock::now();
    DivisiveResult result = e_divisive(gen.series, cfg);
    auto stop = std::chrono::steady_clock::now();
    runtimes[i] = std::chrono::duration<double>(stop - start).count();
    rand_values[i] = rand_index(gen.truth, result.final_partition);
  }

  StudyReport report;
  report.scenario = scn;
  report.replications = replications;
  report.detector = detector;
  report.generator = kGeneratorId;
  double sum = 0.0;
  for (double v : rand_values) sum += v;
  report.mean_rand = sum / replications;
  if (replications > 1) {
    double ss = 0.0;
    for (double v : rand_values) ss += (v - report.mean_rand) * (v - report.mean_rand);
    report.rand_se = std::sqrt(ss / (replications - 1)) / std::sqrt(static_cast<double>(replications));
  }
  double rt = 0.0;
  for (double v : runtimes) rt += v;
  report.mean_runtime_seconds = rt / replications;
  return report;
}

std::string study_csv_header() {
  return "scenario,param,dimension,noise,length,seed,replications,alpha,min_size,"
         "permutations,significance,mean_rand,rand_se,mean_runtime_seconds,generator";
}

std::string study_csv_row(const StudyReport& r) {
  std::ostringstream out;
  out << to_string(r.scenario.kind) << ',' << format_double(r.scenario.param) << ','
      << r.scenario.effective_dimension() << ',' << (r.scenario.noise ? 1 : 0) << ','
      << r.scenario.length << ',' << r.scenario.seed << ',' << r.replications << ','
      << format_double(r.detector.alpha.value()) << ',' << r.detector.min_size << ','
      << r.detector.num_permutations << ',' << format_double(r.detector.significance) << ','
      << format_double(r.mean_rand) << ',' << format_double(r.rand_se) << ','
      << format_double(r.mean_runtime_seconds) << ',' << r.generator;
  return out.str();
}

std::string study_json(const StudyReport& r) {
  std::ostringstream out;
  out << "{\n"
      << "  \"scenario\": \"" << to_string(r.scenario.kind) << "\",\n"
      << "  \"param\": " << format_double(r.scenario.param) << ",\n"
      << "  \"dimension\": " << r.scenario.effective_dimension() << ",\n"
      << "  \"noise\": " << (r.scenario.noise ? "true" : "false") << ",\n"
      << "  \"length\": " << r.scenario.length << ",\n"
      << "  \"seed\": " << r.scenario.seed << ",\n"
      << "  \"replications\": " << r.replications << ",\n"
      << "  \"alpha\": " << format_double(r.detector.alpha.value()) << ",\n"
      << "  \"min_size\": " << r.detector.min_size << ",\n"
      << "  \"permutations\": " << r.detector.num_permutations << ",\n"
      << "  \"significance\": " << format_double(r.detector.significance) << ",\n"
      << "  \"mean_rand\": " << format_double(r.mean_rand) << ",\n"
      << "  \"rand_se\": " << format_double(r.rand_se) << ",\n"
      << "  \"mean_runtime_seconds\": " << format_double(r.mean_runtime_seconds) << ",\n"
      << "  \"generator\": \"" << r.generator << "\"\n"
      << "}";
  return out.str();
}

}  // namespace ecpd
