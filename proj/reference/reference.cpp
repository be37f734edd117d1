#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecpd::reference {
namespace {

double combine(double between, double wx, double wy, double nd, double md) {
  return 2.0 * (between / (nd * md)) - wx / (nd * (nd - 1.0) / 2.0) -
         wy / (md * (md - 1.0) / 2.0);
}

}  // namespace

double alpha_dist(std::span<const double> a, std::span<const double> b, double alpha) {
  double norm;
  if (a.size() == 1) {
    norm = std::fabs(a[0] - b[0]);
  } else {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      double diff = a[k] - b[k];
      acc += diff * diff;
    }
    norm = std::sqrt(acc);
  }
  return alpha == 1.0 ? norm : std::pow(norm, alpha);
}

double divergence_direct(const TimeSeries& x, const TimeSeries& y, double alpha) {
  const int n = x.rows();
  const int m = y.rows();
  double between = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= m; ++j) between += alpha_dist(x.row(i), y.row(j), alpha);
  double wx = 0.0;
  for (int i = 1; i < n; ++i)
    for (int k = i + 1; k <= n; ++k) wx += alpha_dist(x.row(i), x.row(k), alpha);
  double wy = 0.0;
  for (int j = 1; j < m; ++j)
    for (int k = j + 1; k <= m; ++k) wy += alpha_dist(y.row(j), y.row(k), alpha);
  return combine(between, wx, wy, n, m);
}

double qhat_direct(const TimeSeries& x, const TimeSeries& y, double alpha) {
  const double nd = x.rows();
  const double md = y.rows();
  return (nd * md / (nd + md)) * divergence_direct(x, y, alpha);
}

double qhat_at(const TimeSeries& series, int s, int tau, int kappa, double alpha) {
  double between = 0.0;
  for (int i = s; i <= tau; ++i)
    for (int j = tau + 1; j <= kappa; ++j)
      between += alpha_dist(series.row(i), series.row(j), alpha);
  double wx = 0.0;
  for (int i = s; i < tau; ++i)
    for (int k = i + 1; k <= tau; ++k)
      wx += alpha_dist(series.row(i), series.row(k), alpha);
  double wy = 0.0;
  for (int j = tau + 1; j < kappa; ++j)
    for (int k = j + 1; k <= kappa; ++k)
      wy += alpha_dist(series.row(j), series.row(k), alpha);
  double nd = tau - s + 1;
  double md = kappa - tau;
  return (nd * md / (nd + md)) * combine(between, wx, wy, nd, md);
}

std::optional<SplitCandidate> best_split_exhaustive(const TimeSeries& series,
                                                    Segment seg, double alpha,
                                                    int min_size) {
  if (seg.length() < 2 * min_size) return std::nullopt;
  double best_q = -std::numeric_limits<double>::infinity();
  int best_tau = 0, best_kappa = 0;
  for (int tau = seg.start + min_size - 1; tau <= seg.end - min_size; ++tau) {
    for (int kappa = tau + min_size; kappa <= seg.end; ++kappa) {
      double q = qhat_at(series, seg.start, tau, kappa, alpha);
      if (q > best_q + 1e-12) {
        best_q = q;
        best_tau = tau;
        best_kappa = kappa;
      }
    }
  }
  return SplitCandidate{best_tau, best_kappa, best_q};
}

double rand_index_pairs(const Partition& u, const Partition& v) {
  if (u.length() != v.length()) {
    throw std::invalid_argument("partitions must cover the same length");
  }
  const int t = u.length();
  auto label = [](const Partition& p, int idx) {
    int c = 0;
    for (int tau : p.boundaries()) {
      if (idx > tau) ++c;
    }
    return c;
  };
  long long agree = 0, total = 0;
  for (int i = 1; i < t; ++i) {
    for (int j = i + 1; j <= t; ++j) {
      bool same_u = label(u, i) == label(u, j);
      bool same_v = label(v, i) == label(v, j);
      if (same_u == same_v) ++agree;
      ++total;
    }
  }
  if (total == 0) return 1.0;
  return static_cast<double>(agree) / static_cast<double>(total);
}

double adjusted_rand_labels(const std::vector<int>& u, const std::vector<int>& v) {
  const int t = static_cast<int>(u.size());
  int ku = 0, kv = 0;
  for (int x : u) ku = std::max(ku, x + 1);
  for (int x : v) kv = std::max(kv, x + 1);
  std::vector<long long> table(static_cast<std::size_t>(ku) * kv, 0);
  std::vector<long long> row(ku, 0), col(kv, 0);
  for (int i = 0; i < t; ++i) {
    table[static_cast<std::size_t>(u[i]) * kv + v[i]]++;
    row[u[i]]++;
    col[v[i]]++;
  }
  auto choose2 = [](long long x) { return x * (x - 1) / 2; };
  double sum_cells = 0.0, sum_row = 0.0, sum_col = 0.0;
  for (long long c : table) sum_cells += static_cast<double>(choose2(c));
  for (long long r : row) sum_row += static_cast<double>(choose2(r));
  for (long long c : col) sum_col += static_cast<double>(choose2(c));
  double pairs = static_cast<double>(choose2(t));
  double expected = sum_row * sum_col / pairs;
  double max_index = 0.5 * (sum_row + sum_col);
  if (max_index == expected) return 1.0;
  return (sum_cells - expected) / (max_index - expected);
}

double gof_direct(const TimeSeries& series, const Partition& p, double alpha) {
  double total = 0.0;
  for (int i = 0; i + 1 < p.cluster_count(); ++i) {
    Segment a = p.cluster(i);
    Segment b = p.cluster(i + 1);
    double between = 0.0;
    for (int x = a.start; x <= a.end; ++x)
      for (int y = b.start; y <= b.end; ++y)
        between += alpha_dist(series.row(x), series.row(y), alpha);
    double wx = 0.0;
    for (int x = a.start; x < a.end; ++x)
      for (int k = x + 1; k <= a.end; ++k)
        wx += alpha_dist(series.row(x), series.row(k), alpha);
    double wy = 0.0;
    for (int y = b.start; y < b.end; ++y)
      for (int k = y + 1; k <= b.end; ++k)
        wy += alpha_dist(series.row(y), series.row(k), alpha);
    double nd = a.length();
    double md = b.length();
    total += (nd * md / (nd + md)) * combine(between, wx, wy, nd, md);
  }
  return total;
}

Partition best_coarsening_exhaustive(const TimeSeries& series, const Partition& init,
                                     double alpha) {
  const auto& taus = init.boundaries();
  const int nb = static_cast<int>(taus.size());
  if (nb > 20) throw std::invalid_argument("too many boundaries for exhaustive search");
  double best_s = -std::numeric_limits<double>::infinity();
  int best_k = -1;
  std::vector<int> best_sel;
  for (unsigned mask = 0; mask < (1u << nb); ++mask) {
    std::vector<int> sel;
    for (int i = 0; i < nb; ++i) {
      if (mask & (1u << i)) sel.push_back(taus[i]);
    }
    Partition cand(init.length(), sel);
    double s = gof_direct(series, cand, alpha);
    int k = cand.cluster_count();
    // Strictly better wins; within 1e-12, more clusters wins.
    if (s > best_s + 1e-12 || (s > best_s - 1e-12 && k > best_k)) {
      best_s = std::max(s, best_s);
      best_k = k;
      best_sel = sel;
    }
  }
  return Partition(init.length(), best_sel);
}

}  // namespace ecpd::reference
