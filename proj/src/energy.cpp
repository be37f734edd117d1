#include "ecpd/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecpd {
namespace {

// From-scratch q-hat for the split (tau, kappa) of the segment starting at s,
// indices mapped through order. Row-major term order throughout.
double canonical_q(const DistanceMatrix& dist, std::span<const int> order, int s,
                   int tau, int kappa) {
  auto at = [&](int p, int q) { return dist.at(order[p - 1], order[q - 1]); };
  double between = 0.0;
  for (int i = s; i <= tau; ++i)
    for (int j = tau + 1; j <= kappa; ++j) between += at(i, j);
  double wx = 0.0;
  for (int i = s; i < tau; ++i)
    for (int k = i + 1; k <= tau; ++k) wx += at(i, k);
  double wy = 0.0;
  for (int j = tau + 1; j < kappa; ++j)
    for (int k = j + 1; k <= kappa; ++k) wy += at(j, k);
  double nd = tau - s + 1;
  double md = kappa - tau;
  return scaled_from_sums(between, wx, wy, nd, md);
}

bool scan_core(const DistanceMatrix& dist, std::span<const int> order, Segment seg,
               int min_size, SplitCandidate& best) {
  if (min_size < 2) throw std::invalid_argument("min_size must be at least 2");
  const int s = seg.start;
  const int e = seg.end;
  const int len = seg.length();
  if (s < 1 || e > static_cast<int>(order.size()) || len < 1) {
    throw std::invalid_argument("segment out of range");
  }
  if (len < 2 * min_size) return false;

  auto at = [&](int p, int q) { return dist.at(order[p - 1], order[q - 1]); };

  // Per-kappa tables: 1/(n+m) depends only on kappa, 1/C(m,2) only on m.
  std::vector<double> inv_total(len + 1), inv_pairs(len + 1);
  for (int t = 2; t <= len; ++t) {
    inv_total[t] = 1.0 / static_cast<double>(t);
    inv_pairs[t] = 2.0 / (static_cast<double>(t) * (t - 1.0));
  }

  // State at left boundary tau: b[kappa] = sum of cross distances between
  // [s..tau] and (tau..kappa]; wy[kappa] = within sum of (tau..kappa];
  // wx = within sum of [s..tau]. Indexed by kappa - s.
  std::vector<double> b(len, 0.0), wy(len, 0.0);

  double rs = 0.0;
  for (int kappa = s + 1; kappa <= e; ++kappa) {
    rs += at(s, kappa);
    b[kappa - s] = rs;
  }
  for (int kappa = s + 2; kappa <= e; ++kappa) {
    double col = 0.0;
    for (int j = s + 1; j < kappa; ++j) col += at(j, kappa);
    wy[kappa - s] = wy[kappa - s - 1] + col;
  }

  double wx = 0.0;
  double best_q = -std::numeric_limits<double>::infinity();
  int best_tau = 0, best_kappa = 0;

  for (int tau = s + 1; tau <= e - min_size; ++tau) {
    double col_b = 0.0;
    for (int i = s; i < tau; ++i) col_b += at(i, tau);
    wx += col_b;

    const int n = tau - s + 1;
    const double nd = n;
    const bool left_ok = n >= min_size;
    const double wx_term = left_ok ? wx / (nd * (nd - 1.0) / 2.0) : 0.0;

    rs = 0.0;
    for (int kappa = tau + 1; kappa <= e; ++kappa) {
      rs += at(tau, kappa);
      const int k = kappa - s;
      b[k] += rs - col_b;
      wy[k] -= rs;
      const int m = kappa - tau;
      if (left_ok && m >= min_size) {
        // q = (nm/(n+m)) * (2 b/(nm) - wx/C(n,2) - wy/C(m,2)), divisions
        // replaced by the precomputed reciprocal tables.
        double q = (2.0 * b[k] - nd * static_cast<double>(m) * (wx_term + wy[k] * inv_pairs[m])) *
                   inv_total[kappa - s + 1];
        if (q > best_q + kTieTolerance) {
          best_q = q;
          best_tau = tau;
          best_kappa = kappa;
        }
      }
    }
  }

  best = {best_tau, best_kappa, best_q};
  return true;
}

}  // namespace

double alpha_distance(std::span<const double> a, std::span<const double> b,
                      Alpha alpha) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("alpha_distance requires equal dimensions");
  }
  if (a.empty()) throw std::invalid_argument("alpha_distance requires dimension >= 1");
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
  if (alpha.value() == 1.0) return norm;
  return std::pow(norm, alpha.value());
}

double empirical_divergence(const TimeSeries& x, const TimeSeries& y, Alpha alpha) {
  if (x.cols() != y.cols()) {
    throw std::invalid_argument("samples must share the same dimension");
  }
  const int n = x.rows();
  const int m = y.rows();
  if (n < 2 || m < 2) {
    throw std::invalid_argument("empirical_divergence requires at least two rows per sample");
  }
  double between = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= m; ++j) between += alpha_distance(x.row(i), y.row(j), alpha);
  double wx = 0.0;
  for (int i = 1; i < n; ++i)
    for (int k = i + 1; k <= n; ++k) wx += alpha_distance(x.row(i), x.row(k), alpha);
  double wy = 0.0;
  for (int j = 1; j < m; ++j)
    for (int k = j + 1; k <= m; ++k) wy += alpha_distance(y.row(j), y.row(k), alpha);
  return divergence_from_sums(between, wx, wy, n, m);
}

double scaled_divergence(const TimeSeries& x, const TimeSeries& y, Alpha alpha) {
  const double nd = x.rows();
  const double md = y.rows();
  return (nd * md / (nd + md)) * empirical_divergence(x, y, alpha);
}

DistanceMatrix::DistanceMatrix(const TimeSeries& series, Alpha alpha)
    : n_(series.rows()), d_(static_cast<std::size_t>(series.rows()) * series.rows(), 0.0) {
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      double v = alpha_distance(series.row(i + 1), series.row(j + 1), alpha);
      d_[static_cast<std::size_t>(i) * n_ + j] = v;
      d_[static_cast<std::size_t>(j) * n_ + i] = v;
    }
  }
}

std::vector<int> identity_order(int length) {
  std::vector<int> order(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) order[i] = i + 1;
  return order;
}

std::optional<SplitCandidate> split_scan(const DistanceMatrix& dist,
                                         std::span<const int> order, Segment seg,
                                         int min_size) {
  SplitCandidate best;
  if (!scan_core(dist, order, seg, min_size, best)) return std::nullopt;
  best.qhat = canonical_q(dist, order, seg.start, best.tau, best.kappa);
  return best;
}

std::optional<double> split_scan_value(const DistanceMatrix& dist,
                                       std::span<const int> order, Segment seg,
                                       int min_size) {
  SplitCandidate best;
  if (!scan_core(dist, order, seg, min_size, best)) return std::nullopt;
  return best.qhat;
}

std::optional<SplitCandidate> best_split(const TimeSeries& series, Segment seg,
                                         Alpha alpha, int min_size) {
  if (seg.start < 1 || seg.end > series.rows() || seg.length() < 1) {
    throw std::invalid_argument("segment out of range");
  }
  if (seg.length() < 2 * min_size) return std::nullopt;
  // The matrix covers only the segment's rows; positions map 1..L -> rows.
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(seg.length()) * series.cols());
  for (int t = seg.start; t <= seg.end; ++t) {
    auto r = series.row(t);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  TimeSeries window(std::move(rows), seg.length(), series.cols());
  DistanceMatrix dist(window, alpha);
  auto order = identity_order(seg.length());
  auto hit = split_scan(dist, order, {1, seg.length()}, min_size);
  if (!hit) return std::nullopt;
  hit->tau += seg.start - 1;
  hit->kappa += seg.start - 1;
  return hit;
}

}  // namespace ecpd
