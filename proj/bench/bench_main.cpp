// Timing comparison of the optimized kernels against the serial reference
// implementation, plus OpenMP scaling of the parallel kernels at one thread
// versus all available threads. Times are medians over repeated runs.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ecpd/agglo.hpp"
#include "ecpd/divisive.hpp"
#include "ecpd/energy.hpp"
#include "ecpd/rng.hpp"
#include "ecpd/types.hpp"
#include "reference.hpp"

using namespace ecpd;
using Clock = std::chrono::steady_clock;

namespace {

volatile double g_sink = 0.0;  // defeats dead code elimination

template <typename F>
double median_ms(int reps, F&& body) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    body();
    times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

TimeSeries gaussian_series(std::uint64_t seed, int rows, int cols, double step_at_half) {
  Sampler rng(seed);
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    double shift = (i >= rows / 2) ? step_at_half : 0.0;
    for (int k = 0; k < cols; ++k) data.push_back(rng.normal() + shift);
  }
  return TimeSeries(std::move(data), rows, cols);
}

void print_row(const char* name, const char* setup, const char* left_label, double left_ms,
               const char* right_label, double right_ms, const char* note) {
  std::printf("  %-26s %-22s %s %9.2f ms   %s %9.2f ms   %5.1fx  %s\n", name, setup, left_label,
              left_ms, right_label, right_ms, left_ms / right_ms, note);
}

void bench_reference_vs_kernel() {
  std::printf("serial reference vs optimized kernel\n");

  {
    TimeSeries s = gaussian_series(11, 120, 2, 2.0);
    Segment seg{1, 120};
    auto fast = best_split(s, seg, Alpha(1.0), 5);
    auto slow = reference::best_split_exhaustive(s, seg, 1.0, 5);
    bool same = fast && slow && fast->tau == slow->tau && fast->kappa == slow->kappa &&
                fast->qhat == slow->qhat;
    double t_slow = median_ms(3, [&] {
      auto r = reference::best_split_exhaustive(s, seg, 1.0, 5);
      g_sink = g_sink + r->qhat;
    });
    double t_fast = median_ms(20, [&] {
      auto r = best_split(s, seg, Alpha(1.0), 5);
      g_sink = g_sink + r->qhat;
    });
    print_row("split maximization", "T=120 d=2 min=5", "exhaustive", t_slow, "scan", t_fast,
              same ? "identical argmax and value" : "RESULTS DIFFER");
  }

  {
    // Same merge sequence both ways: the trace maintains the fit incrementally,
    // the reference recomputes it from scratch after every merge.
    TimeSeries s = gaussian_series(12, 600, 1, 3.0);
    InitialClustering init = InitialClustering::equal_width(600, 4);
    Partition start(600, init.partition().boundaries());
    MergeTrace trace = e_agglo(s, init, Alpha(1.0));
    double t_fast = median_ms(5, [&] {
      MergeTrace t = e_agglo(s, init, Alpha(1.0));
      g_sink = g_sink + t.gof[0];
    });
    double t_slow = median_ms(3, [&] {
      std::vector<int> live = start.boundaries();
      double acc = reference::gof_direct(s, Partition(600, live), 1.0);
      for (const MergeStep& step : trace.steps) {
        live.erase(live.begin() + (step.left_index - 1));
        if (!live.empty()) acc += reference::gof_direct(s, Partition(600, live), 1.0);
      }
      g_sink = g_sink + acc;
    });
    print_row("merge fit maintenance", "T=600 width=4", "recompute", t_slow, "trace", t_fast,
              "full merge sequence");
  }
}

void bench_openmp_scaling() {
  int threads = max_threads();
  std::printf("openmp scaling, 1 thread vs %d\n", threads);

  {
    TimeSeries s = gaussian_series(21, 1500, 3, 0.0);
    set_threads(1);
    double t1 = median_ms(5, [&] {
      DistanceMatrix d(s, Alpha(1.0));
      g_sink = g_sink + d.at(1, d.size());
    });
    set_threads(threads);
    double tn = median_ms(5, [&] {
      DistanceMatrix d(s, Alpha(1.0));
      g_sink = g_sink + d.at(1, d.size());
    });
    print_row("distance matrix build", "T=1500 d=3", "1 thread", t1, "max", tn, "");
  }

  {
    TimeSeries s = gaussian_series(22, 600, 1, 2.0);
    DivisiveConfig cfg;
    cfg.min_size = 30;
    cfg.num_permutations = 499;
    cfg.seed = 7;
    Partition whole(600);
    auto proposal = propose_next(s, whole, cfg);
    set_threads(1);
    double p1 = 0.0;
    double t1 = median_ms(3, [&] {
      p1 = permutation_pvalue(s, whole, proposal->candidate.qhat, cfg);
      g_sink = g_sink + p1;
    });
    set_threads(threads);
    double pn = 0.0;
    double tn = median_ms(3, [&] {
      pn = permutation_pvalue(s, whole, proposal->candidate.qhat, cfg);
      g_sink = g_sink + pn;
    });
    print_row("permutation test", "T=600 R=499", "1 thread", t1, "max", tn,
              p1 == pn ? "p-values equal" : "P-VALUES DIFFER");
  }

  {
    TimeSeries s = gaussian_series(23, 600, 2, 2.0);
    DivisiveConfig cfg;
    cfg.min_size = 30;
    cfg.num_permutations = 199;
    cfg.seed = 9;
    set_threads(1);
    double t1 = median_ms(3, [&] {
      DivisiveResult r = e_divisive(s, cfg);
      g_sink = g_sink + static_cast<double>(r.total_permutations);
    });
    set_threads(threads);
    double tn = median_ms(3, [&] {
      DivisiveResult r = e_divisive(s, cfg);
      g_sink = g_sink + static_cast<double>(r.total_permutations);
    });
    print_row("full divisive estimation", "T=600 d=2 R=199", "1 thread", t1, "max", tn, "");
  }

  set_threads(threads);
}

}  // namespace

int main() {
  std::printf("ecpd benchmarks, %d thread(s) available\n\n", max_threads());
  bench_reference_vs_kernel();
  std::printf("\n");
  bench_openmp_scaling();
  return 0;
}
