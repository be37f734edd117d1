#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ecpd/energy.hpp"
#include "ecpd/types.hpp"

namespace ecpd {

struct DivisiveConfig {
  Alpha alpha{1.0};
  int min_size = 30;
  int num_permutations = 499;  // R
  double significance = 0.05;  // p0
  std::optional<int> max_change_points;  // nullopt = unlimited
  std::uint64_t seed = 0;
};

// One estimation round: the k-th proposed split, its statistic and test.
struct DivisiveStep {
  int order = 0;  // k = 1, 2, ...
  int tau_hat = 0;
  int kappa_hat = 0;
  double qhat = 0.0;
  double pvalue = 0.0;
  bool significant = false;
  bool operator==(const DivisiveStep&) const = default;
};

struct Proposal {
  int cluster_index = 0;  // 1-based position among current clusters
  SplitCandidate candidate;
  bool operator==(const Proposal&) const = default;
};

struct DivisiveResult {
  std::vector<DivisiveStep> estimates;
  Partition final_partition{1};  // boundaries = tau_hat of significant steps
  DivisiveConfig config;
  long long total_permutations = 0;
};

// Best admissible split across all current clusters: runs the split scan in
// each cluster and keeps the overall q-hat maximum (ties: earliest cluster,
// then smallest tau, kappa). none when no cluster is at least 2*min_size long.
std::optional<Proposal> propose_next(const TimeSeries& series, const Partition& partition,
                                     const DivisiveConfig& cfg);

// Within-cluster permutation test of observed_q (the q-hat from propose_next
// on this same partition). Each replicate r shuffles every cluster's points
// in place, re-runs the full split maximization, and counts q^(r) >= observed_q;
// returns exceedances/(R+1). Replicate r draws from an independent substream
// keyed by (seed, cluster count, r), so the result does not depend on how
// replicates are scheduled.
double permutation_pvalue(const TimeSeries& series, const Partition& partition,
                          double observed_q, const DivisiveConfig& cfg);

// Full divisive estimation: propose, test, accept while p < significance.
// The last recorded step is the terminating one and may be non-significant.
DivisiveResult e_divisive(const TimeSeries& series, const DivisiveConfig& cfg);

}  // namespace ecpd
