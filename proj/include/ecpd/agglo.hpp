#pragma once

#include <vector>

#include "ecpd/types.hpp"

namespace ecpd {

// Starting clustering for the agglomerative procedure: at least two
// contiguous clusters, each with at least two observations (the divergence's
// within-sample terms need one pair per cluster).
class InitialClustering {
public:
  explicit InitialClustering(Partition partition);

  // Clusters of `width` points each; a remainder shorter than 2 is absorbed
  // into the final cluster. width >= 2 and at least two clusters required.
  static InitialClustering equal_width(int length, int width);

  const Partition& partition() const { return partition_; }

private:
  Partition partition_;
};

struct MergeStep {
  int left_index = 0;      // 1-based position of the merged pair's left cluster
  double gof_after = 0.0;  // goodness of fit after this merge (0 for the last)
  bool operator==(const MergeStep&) const = default;
};

struct MergeTrace {
  std::vector<MergeStep> steps;  // n-1 merges, down to a single cluster
  std::vector<double> gof;       // goodness of fit at n, n-1, ..., 2 clusters
  int best_k = 0;                // cluster count maximizing gof (ties: larger k)
  Partition best_partition{1};
};

// Sum of scaled divergences over adjacent cluster pairs in time order.
// Every cluster needs >= 2 points and the partition >= 2 clusters.
double goodness_of_fit(const TimeSeries& series, const Partition& partition, Alpha alpha);

// Greedy adjacent merging: each step merges the pair whose merge yields the
// largest goodness of fit (ties: smallest left index), recording the whole
// trajectory. best_partition is the clustering at the gof maximum over all
// visited levels. Pairwise between-cluster distance sums are maintained so a
// merge updates candidate statistics in O(1) each.
MergeTrace e_agglo(const TimeSeries& series, const InitialClustering& init, Alpha alpha);

// Change points the trace actually supports: best_partition's boundaries, or
// none when the gof maximum is not positive (no adjacent pair ever looked
// more different than alike, e.g. constant data).
std::vector<int> selected_change_points(const MergeTrace& trace);

}  // namespace ecpd
