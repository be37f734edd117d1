#pragma once

// Slow, obviously-correct counterparts of the library kernels, kept for
// tests and benchmarks only. Algorithms here are written from the defining
// formulas: divergences by direct triple loops, splits by exhaustive search
// over all (tau, kappa), rand indices by pair enumeration, coarsenings by
// trying every subset of boundaries. Term order and the final combination
// expression match the library's canonical order so results compare exactly,
// but no scan state, reciprocal tables, or incremental updates are shared.

#include <optional>
#include <span>
#include <vector>

#include "ecpd/energy.hpp"
#include "ecpd/types.hpp"

namespace ecpd::reference {

double alpha_dist(std::span<const double> a, std::span<const double> b, double alpha);

// Divergence of rows x vs rows y straight from the definition.
double divergence_direct(const TimeSeries& x, const TimeSeries& y, double alpha);
double qhat_direct(const TimeSeries& x, const TimeSeries& y, double alpha);

// q-hat of splitting series[s..kappa] at tau, computed from scratch.
double qhat_at(const TimeSeries& series, int s, int tau, int kappa, double alpha);

// Exhaustive argmax over all admissible (tau, kappa) in seg, smallest tau
// then kappa among values tied within 1e-12.
std::optional<SplitCandidate> best_split_exhaustive(const TimeSeries& series,
                                                    Segment seg, double alpha,
                                                    int min_size);

// Rand index by enumerating all T*(T-1)/2 element pairs.
double rand_index_pairs(const Partition& u, const Partition& v);

// Adjusted rand from per-element labels via the chance-corrected formula.
double adjusted_rand_labels(const std::vector<int>& u, const std::vector<int>& v);

// Goodness of fit of a partition: sum of q-hat over adjacent cluster pairs.
double gof_direct(const TimeSeries& series, const Partition& p, double alpha);

// Best coarsening of init by exhaustive search over boundary subsets; ties
// within 1e-12 go to the candidate with more clusters.
Partition best_coarsening_exhaustive(const TimeSeries& series, const Partition& init,
                                     double alpha);

}  // namespace ecpd::reference
