#pragma once

#include <cstdint>
#include <string>

#include "ecpd/divisive.hpp"
#include "ecpd/types.hpp"

namespace ecpd {

// Three equal-length clusters; the middle third switches distribution.
enum class ScenarioKind {
  UniMean,         // N(0,1) -> N(mu,1)
  UniVariance,     // N(0,1) -> N(0,sigma^2), param = sigma^2
  UniTail,         // N(0,1) -> t_nu, param = nu
  BiMean,          // N2(0,I) -> N2((mu,mu),I)
  BiCorrelation,   // N2(0,I) -> N2(0, [[1,rho],[rho,1]])
  DimCorrelation,  // Nd(0,I) -> Nd(0,Sigma); see noise flag
};

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

struct Scenario {
  ScenarioKind kind = ScenarioKind::UniMean;
  double param = 0.0;  // mu / sigma^2 / nu / mu / rho / rho by kind
  int dimension = 2;   // DimCorrelation only; others imply their own
  bool noise = false;  // DimCorrelation: true = only coordinates 1,2 correlate
  int length = 300;    // divisible by 3
  std::uint64_t seed = 0;

  void validate() const;
  int effective_dimension() const;
};

struct GeneratedSeries {
  TimeSeries series;
  Partition truth;  // boundaries at T/3 and 2T/3
};

// Deterministic in (kind, param, dimension, noise, length, seed): identical
// scenarios yield bit-identical data.
GeneratedSeries generate(const Scenario& scn);

struct StudyReport {
  Scenario scenario;
  int replications = 0;
  DivisiveConfig detector;
  double mean_rand = 0.0;
  double rand_se = 0.0;  // sample sd of per-replicate rand / sqrt(reps)
  double mean_runtime_seconds = 0.0;
  std::string generator;  // sampling scheme identity, for reproducibility
};

// Replicate i generates from substream (seed, 1, i) and detects with seed
// substream (seed, 2, i); replicates may run concurrently without changing
// the aggregate.
StudyReport run_study(const Scenario& scn, int replications, const DivisiveConfig& detector);

std::string study_csv_header();
std::string study_csv_row(const StudyReport& report);
std::string study_json(const StudyReport& report);

}  // namespace ecpd
