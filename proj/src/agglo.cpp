#include "ecpd/agglo.hpp"

#include <limits>
#include <stdexcept>

#include "ecpd/energy.hpp"

namespace ecpd {
namespace {

constexpr double kTie = kTieTolerance;

void check_clusters(const Partition& p) {
  if (p.cluster_count() < 2) {
    throw std::invalid_argument("need at least two clusters");
  }
  for (int i = 0; i < p.cluster_count(); ++i) {
    if (p.cluster(i).length() < 2) {
      throw std::invalid_argument("every cluster needs at least two observations");
    }
  }
}

double pair_distance_sum(const TimeSeries& series, Alpha alpha, Segment a, Segment b) {
  double sum = 0.0;
  for (int i = a.start; i <= a.end; ++i)
    for (int j = b.start; j <= b.end; ++j)
      sum += alpha_distance(series.row(i), series.row(j), alpha);
  return sum;
}

double within_distance_sum(const TimeSeries& series, Alpha alpha, Segment a) {
  double sum = 0.0;
  for (int i = a.start; i < a.end; ++i)
    for (int k = i + 1; k <= a.end; ++k)
      sum += alpha_distance(series.row(i), series.row(k), alpha);
  return sum;
}

// Maintained per-cluster state over original cluster ids; merged clusters
// keep the left id. Between-sums are held for ALL pairs, not just adjacent
// ones: a merge makes previously non-adjacent pairs adjacent.
struct AggloState {
  std::vector<int> active;  // original ids in time order
  std::vector<double> size, within;
  std::vector<int> start, end;
  std::vector<double> between;  // n x n, by original id
  int n = 0;

  double b(int a, int c) const { return between[static_cast<std::size_t>(a) * n + c]; }
  double& b(int a, int c) { return between[static_cast<std::size_t>(a) * n + c]; }

  double pair_q(int a, int c) const {
    return scaled_from_sums(b(a, c), within[a], within[c], size[a], size[c]);
  }

  // q-hat between active position p's cluster and the hypothetical merge of
  // positions p2, p2+1.
  double q_against_merged(int p, int p2) const {
    int a = active[p], l = active[p2], r = active[p2 + 1];
    double bx = b(a, l) + b(a, r);
    double wm = within[l] + within[r] + b(l, r);
    return scaled_from_sums(bx, within[a], wm, size[a], size[l] + size[r]);
  }

  double gof_now() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < active.size(); ++i) {
      s += pair_q(active[i], active[i + 1]);
    }
    return s;
  }

  std::vector<int> boundaries_now() const {
    std::vector<int> taus;
    for (std::size_t i = 0; i + 1 < active.size(); ++i) taus.push_back(end[active[i]]);
    return taus;
  }
};

AggloState init_state(const TimeSeries& series, const Partition& p, Alpha alpha) {
  AggloState st;
  st.n = p.cluster_count();
  st.active.resize(st.n);
  st.size.resize(st.n);
  st.within.resize(st.n);
  st.start.resize(st.n);
  st.end.resize(st.n);
  st.between.assign(static_cast<std::size_t>(st.n) * st.n, 0.0);
  for (int i = 0; i < st.n; ++i) {
    Segment c = p.cluster(i);
    st.active[i] = i;
    st.size[i] = c.length();
    st.start[i] = c.start;
    st.end[i] = c.end;
  }
  // All-pairs distance sums; O(T^2) time but only O(n^2) memory, so long
  // series with coarse initial clusters never materialize a T x T matrix.
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < st.n; ++i) {
    Segment a = p.cluster(i);
    st.within[i] = within_distance_sum(series, alpha, a);
    for (int j = i + 1; j < st.n; ++j) {
      double s = pair_distance_sum(series, alpha, a, p.cluster(j));
      st.b(i, j) = s;
      st.b(j, i) = s;
    }
  }
  return st;
}

}  // namespace

InitialClustering::InitialClustering(Partition partition) : partition_(std::move(partition)) {
  check_clusters(partition_);
}

InitialClustering InitialClustering::equal_width(int length, int width) {
  if (width < 2) throw std::invalid_argument("cluster width must be at least 2");
  std::vector<int> taus;
  for (int tau = width; tau < length; tau += width) taus.push_back(tau);
  // A trailing remainder of one point cannot stand alone.
  if (!taus.empty() && length - taus.back() < 2) taus.pop_back();
  if (taus.empty()) {
    throw std::invalid_argument("series too short for two clusters of this width");
  }
  return InitialClustering(Partition(length, std::move(taus)));
}

double goodness_of_fit(const TimeSeries& series, const Partition& partition, Alpha alpha) {
  if (partition.length() != series.rows()) {
    throw std::invalid_argument("partition length must match series length");
  }
  check_clusters(partition);
  double total = 0.0;
  for (int i = 0; i + 1 < partition.cluster_count(); ++i) {
    Segment a = partition.cluster(i);
    Segment b = partition.cluster(i + 1);
    total += scaled_from_sums(pair_distance_sum(series, alpha, a, b),
                              within_distance_sum(series, alpha, a),
                              within_distance_sum(series, alpha, b), a.length(),
                              b.length());
  }
  return total;
}

MergeTrace e_agglo(const TimeSeries& series, const InitialClustering& init, Alpha alpha) {
  const Partition& p0 = init.partition();
  if (p0.length() != series.rows()) {
    throw std::invalid_argument("initial clustering must cover the whole series");
  }
  AggloState st = init_state(series, p0, alpha);

  MergeTrace trace;
  double best = -std::numeric_limits<double>::infinity();

  double current = st.gof_now();
  trace.gof.push_back(current);
  best = current;
  trace.best_k = static_cast<int>(st.active.size());
  std::vector<int> best_taus = st.boundaries_now();

  while (st.active.size() > 1) {
    const int count = static_cast<int>(st.active.size());
    // Post-merge gof for merging positions (p, p+1): swap the three adjacent
    // statistics touching the pair for the two against the merged cluster.
    int pick = -1;
    double pick_gof = -std::numeric_limits<double>::infinity();
    for (int p = 0; p + 1 < count; ++p) {
      double g = current - st.pair_q(st.active[p], st.active[p + 1]);
      if (p > 0) {
        g -= st.pair_q(st.active[p - 1], st.active[p]);
        g += st.q_against_merged(p - 1, p);
      }
      if (p + 2 < count) {
        g -= st.pair_q(st.active[p + 1], st.active[p + 2]);
        g += st.q_against_merged(p + 2, p);
      }
      if (g > pick_gof + kTie) {
        pick_gof = g;
        pick = p;
      }
    }

    // Merge: left id absorbs the right cluster's sums.
    int l = st.active[pick], r = st.active[pick + 1];
    st.within[l] = st.within[l] + st.within[r] + st.b(l, r);
    st.size[l] += st.size[r];
    st.end[l] = st.end[r];
    for (int id : st.active) {
      if (id == l || id == r) continue;
      st.b(l, id) += st.b(r, id);
      st.b(id, l) = st.b(l, id);
    }
    st.active.erase(st.active.begin() + pick + 1);

    // Fresh sum over maintained adjacent statistics, so the trajectory does
    // not accumulate increment/decrement drift.
    current = st.active.size() > 1 ? st.gof_now() : 0.0;
    trace.steps.push_back({pick + 1, current});
    if (st.active.size() > 1) {
      trace.gof.push_back(current);
      if (current > best + kTie) {
        best = current;
        trace.best_k = static_cast<int>(st.active.size());
        best_taus = st.boundaries_now();
      }
    }
  }

  trace.best_partition = Partition(p0.length(), std::move(best_taus));
  return trace;
}

std::vector<int> selected_change_points(const MergeTrace& trace) {
  // gof[j] is the value at (n - j) clusters, so best_k sits at index
  // gof.size() + 1 - best_k.
  int n = static_cast<int>(trace.gof.size()) + 1;
  double best_value = trace.gof[static_cast<std::size_t>(n - trace.best_k)];
  if (!(best_value > 0.0)) return {};
  return trace.best_partition.boundaries();
}

}  // namespace ecpd
