#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecpd {

// Exponent of the alpha-distance |x - y|^alpha. Only values in the open
// interval (0,2) give a valid divergence, so anything else is rejected here.
class Alpha {
public:
  explicit Alpha(double value) : value_(value) {
    if (!(value > 0.0 && value < 2.0)) {
      throw std::invalid_argument("alpha must lie in (0, 2), got " +
                                  std::to_string(value));
    }
  }
  double value() const { return value_; }

private:
  double value_;
};

// Closed 1-based time range [start, end].
struct Segment {
  int start = 1;
  int end = 1;
  int length() const { return end - start + 1; }
  bool operator==(const Segment&) const = default;
};

// T x d matrix of finite reals, row t = observation at time t (1-based).
class TimeSeries {
public:
  TimeSeries(std::vector<double> data, int rows, int cols);

  static TimeSeries univariate(std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // t is 1-based.
  std::span<const double> row(int t) const {
    return {data_.data() + static_cast<std::size_t>(t - 1) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  const std::vector<double>& data() const { return data_; }

private:
  std::vector<double> data_;
  int rows_ = 0;
  int cols_ = 0;
};

// Contiguous segmentation of 1..T. Boundaries are change points tau: each tau
// is the last index of its left cluster, so boundaries {t1 < t2 < ...} define
// clusters [1..t1], [t1+1..t2], ..., [tk+1..T]. No boundaries = one cluster.
class Partition {
public:
  explicit Partition(int length, std::vector<int> boundaries = {});

  int length() const { return length_; }
  int cluster_count() const { return static_cast<int>(boundaries_.size()) + 1; }
  const std::vector<int>& boundaries() const { return boundaries_; }

  // i in [0, cluster_count()).
  Segment cluster(int i) const;

  // Copy with one more change point inserted.
  Partition with_boundary(int tau) const;

  bool operator==(const Partition&) const = default;

private:
  int length_ = 0;
  std::vector<int> boundaries_;
};

}  // namespace ecpd
