#pragma once

#include "ecpd/types.hpp"

namespace ecpd {

// Fraction of element pairs on which the two partitions agree (same cluster
// in both, or different in both). Both arguments must cover the same length.
// A single point has no pairs; that degenerate case evaluates to 1.
double rand_index(const Partition& u, const Partition& v);

// Rand index corrected for chance agreement. Identical partitions give 1;
// a zero denominator (both sides all-singletons or single-cluster) gives 1.
double adjusted_rand(const Partition& u, const Partition& v);

}  // namespace ecpd
