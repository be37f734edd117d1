#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ecpd/types.hpp"

namespace ecpd {

// Candidate q-hat values within this absolute gap are treated as tied; ties
// resolve to the smallest tau, then the smallest kappa.
inline constexpr double kTieTolerance = 1e-12;

// |a - b|_2 ^ alpha. Dimensions must match.
double alpha_distance(std::span<const double> a, std::span<const double> b, Alpha alpha);

// Divergence assembled from precomputed distance sums: the between-sample sum,
// the two within-sample sums, and the sample sizes. Single point of truth for
// the combination expression; every evaluator funnels through it so equal sums
// give bitwise-equal statistics.
inline double divergence_from_sums(double between, double within_x, double within_y,
                                   double nd, double md) {
  return 2.0 * (between / (nd * md)) - within_x / (nd * (nd - 1.0) / 2.0) -
         within_y / (md * (md - 1.0) / 2.0);
}

inline double scaled_from_sums(double between, double within_x, double within_y,
                               double nd, double md) {
  return (nd * md / (nd + md)) *
         divergence_from_sums(between, within_x, within_y, nd, md);
}

// Sample divergence of two samples (rows of x vs rows of y). Requires at
// least two rows on each side. Canonical term order: between-sample sum, then
// within-x, then within-y, each accumulated row-major.
double empirical_divergence(const TimeSeries& x, const TimeSeries& y, Alpha alpha);

// empirical_divergence scaled by m*n/(m+n); the split statistic q-hat.
double scaled_divergence(const TimeSeries& x, const TimeSeries& y, Alpha alpha);

// Dense symmetric matrix of pairwise alpha-distances between rows.
class DistanceMatrix {
public:
  DistanceMatrix(const TimeSeries& series, Alpha alpha);

  int size() const { return n_; }

  // 1-based row indices.
  double at(int i, int j) const {
    return d_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)];
  }

private:
  int n_ = 0;
  std::vector<double> d_;
};

struct SplitCandidate {
  int tau = 0;    // last index of the left sample, 1-based
  int kappa = 0;  // last index of the right sample
  double qhat = 0.0;
  bool operator==(const SplitCandidate&) const = default;
};

// order[pos-1] = source row for logical position pos; identity when unpermuted.
std::vector<int> identity_order(int length);

// Maximizes q-hat over tau, kappa inside seg (logical positions mapped through
// order) subject to both samples having at least min_size points. The scan
// maintains between/within sums incrementally in O(L^2); the winner's q-hat is
// then recomputed in the canonical term order so the reported value does not
// depend on scan internals. Returns nullopt when seg is shorter than
// 2 * min_size.
std::optional<SplitCandidate> split_scan(const DistanceMatrix& dist,
                                         std::span<const int> order, Segment seg,
                                         int min_size);

// Same maximization, but returns only the incrementally accumulated peak
// value (no canonical recompute). Permutation replicates use this cheaper
// path; argmax decisions are identical to split_scan.
std::optional<double> split_scan_value(const DistanceMatrix& dist,
                                       std::span<const int> order, Segment seg,
                                       int min_size);

// Builds the distance matrix for seg's rows and scans it. min_size >= 2.
std::optional<SplitCandidate> best_split(const TimeSeries& series, Segment seg,
                                         Alpha alpha, int min_size);

}  // namespace ecpd
