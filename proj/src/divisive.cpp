#include "ecpd/divisive.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ecpd/rng.hpp"

namespace ecpd {
namespace {

void validate(const DivisiveConfig& cfg) {
  if (cfg.min_size < 2) throw std::invalid_argument("min_size must be at least 2");
  if (cfg.num_permutations < 1) throw std::invalid_argument("num_permutations must be at least 1");
  if (!(cfg.significance > 0.0 && cfg.significance < 1.0)) {
    throw std::invalid_argument("significance must lie in (0, 1)");
  }
  if (cfg.max_change_points && *cfg.max_change_points < 0) {
    throw std::invalid_argument("max_change_points must be nonnegative");
  }
}

std::optional<Proposal> propose_on(const DistanceMatrix& dist, std::span<const int> order,
                                   const Partition& partition, int min_size) {
  std::optional<Proposal> best;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < partition.cluster_count(); ++i) {
    auto hit = split_scan(dist, order, partition.cluster(i), min_size);
    if (!hit) continue;
    if (hit->qhat > best_q + kTieTolerance) {
      best_q = hit->qhat;
      best = Proposal{i + 1, *hit};
    }
  }
  return best;
}

// Maximal replicate statistic over all clusters; -inf when nothing admits a
// split. Uses the scan's incremental peak (no canonical recompute): only the
// comparison against the observed value matters here.
double replicate_max(const DistanceMatrix& dist, std::span<const int> order,
                     const Partition& partition, int min_size) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < partition.cluster_count(); ++i) {
    auto v = split_scan_value(dist, order, partition.cluster(i), min_size);
    if (v) best = std::max(best, *v);
  }
  return best;
}

double pvalue_on(const DistanceMatrix& dist, const Partition& partition,
                 double observed_q, const DivisiveConfig& cfg) {
  const int r_total = cfg.num_permutations;
  const int k = partition.cluster_count();
  const int t = partition.length();
  int exceed = 0;
  // Distances are permutation-invariant, so replicates reuse the matrix and
  // only remap indices. Integer reduction keeps the count schedule-independent.
#pragma omp parallel for reduction(+ : exceed) schedule(dynamic)
  for (int r = 1; r <= r_total; ++r) {
    Sampler rng(substream(cfg.seed, static_cast<std::uint64_t>(k),
                          static_cast<std::uint64_t>(r)));
    std::vector<int> order = identity_order(t);
    for (int i = 0; i < k; ++i) {
      Segment c = partition.cluster(i);
      shuffle_span(order, c.start - 1, c.end - 1, rng);
    }
    double peak = replicate_max(dist, order, partition, cfg.min_size);
    if (peak >= observed_q) ++exceed;
  }
  return static_cast<double>(exceed) / (r_total + 1.0);
}

}  // namespace

std::optional<Proposal> propose_next(const TimeSeries& series, const Partition& partition,
                                     const DivisiveConfig& cfg) {
  validate(cfg);
  if (partition.length() != series.rows()) {
    throw std::invalid_argument("partition length must match series length");
  }
  DistanceMatrix dist(series, cfg.alpha);
  auto order = identity_order(series.rows());
  return propose_on(dist, order, partition, cfg.min_size);
}

double permutation_pvalue(const TimeSeries& series, const Partition& partition,
                          double observed_q, const DivisiveConfig& cfg) {
  validate(cfg);
  if (partition.length() != series.rows()) {
    throw std::invalid_argument("partition length must match series length");
  }
  DistanceMatrix dist(series, cfg.alpha);
  return pvalue_on(dist, partition, observed_q, cfg);
}

DivisiveResult e_divisive(const TimeSeries& series, const DivisiveConfig& cfg) {
  validate(cfg);
  DivisiveResult result;
  result.config = cfg;
  result.final_partition = Partition(series.rows());
  if (series.rows() < 2 * cfg.min_size) return result;

  DistanceMatrix dist(series, cfg.alpha);
  auto order = identity_order(series.rows());
  Partition partition(series.rows());
  int accepted = 0;

  for (;;) {
    if (cfg.max_change_points && accepted >= *cfg.max_change_points) break;
    auto proposal = propose_on(dist, order, partition, cfg.min_size);
    if (!proposal) break;
    double p = pvalue_on(dist, partition, proposal->candidate.qhat, cfg);
    result.total_permutations += cfg.num_permutations;
    bool significant = p < cfg.significance;
    result.estimates.push_back({static_cast<int>(result.estimates.size()) + 1,
                                proposal->candidate.tau, proposal->candidate.kappa,
                                proposal->candidate.qhat, p, significant});
    if (!significant) break;
    partition = partition.with_boundary(proposal->candidate.tau);
    ++accepted;
  }

  result.final_partition = partition;
  return result;
}

}  // namespace ecpd
