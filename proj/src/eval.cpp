#include "ecpd/eval.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace ecpd {
namespace {

std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

struct PairCounts {
  std::int64_t total = 0;      // C(T,2)
  std::int64_t same_u = 0;     // pairs together in u
  std::int64_t same_v = 0;     // pairs together in v
  std::int64_t same_both = 0;  // pairs together in both
};

// Clusters are contiguous runs, so the contingency table entries are just the
// overlap lengths of segment intersections; no per-element pass is needed.
PairCounts count_pairs(const Partition& u, const Partition& v) {
  if (u.length() != v.length()) {
    throw std::invalid_argument("partitions must cover the same length");
  }
  PairCounts c;
  c.total = choose2(u.length());
  for (int i = 0; i < u.cluster_count(); ++i) {
    c.same_u += choose2(u.cluster(i).length());
  }
  for (int j = 0; j < v.cluster_count(); ++j) {
    c.same_v += choose2(v.cluster(j).length());
  }
  for (int i = 0; i < u.cluster_count(); ++i) {
    Segment a = u.cluster(i);
    for (int j = 0; j < v.cluster_count(); ++j) {
      Segment b = v.cluster(j);
      if (b.start > a.end) break;
      int lo = std::max(a.start, b.start);
      int hi = std::min(a.end, b.end);
      if (lo <= hi) c.same_both += choose2(hi - lo + 1);
    }
  }
  return c;
}

}  // namespace

double rand_index(const Partition& u, const Partition& v) {
  PairCounts c = count_pairs(u, v);
  if (c.total == 0) return 1.0;
  // Disagreements are pairs joined in exactly one of the two partitions.
  std::int64_t disagree = c.same_u + c.same_v - 2 * c.same_both;
  return static_cast<double>(c.total - disagree) / static_cast<double>(c.total);
}

double adjusted_rand(const Partition& u, const Partition& v) {
  PairCounts c = count_pairs(u, v);
  if (c.total == 0) return 1.0;
  // (index - expected) / (max - expected) with both sides multiplied by
  // 2 * C(T,2) to stay in exact integers; __int128 holds the products.
  __int128 num = 2 * (static_cast<__int128>(c.same_both) * c.total -
                      static_cast<__int128>(c.same_u) * c.same_v);
  __int128 den = static_cast<__int128>(c.same_u + c.same_v) * c.total -
                 2 * static_cast<__int128>(c.same_u) * c.same_v;
  if (den == 0) return 1.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace ecpd
