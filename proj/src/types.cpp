#include "ecpd/types.hpp"

#include <algorithm>

namespace ecpd {

TimeSeries::TimeSeries(std::vector<double> data, int rows, int cols)
    : data_(std::move(data)), rows_(rows), cols_(cols) {
  if (rows_ < 1 || cols_ < 1) {
    throw std::invalid_argument("time series needs at least one row and one column");
  }
  if (data_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw std::invalid_argument("time series data size does not match rows * cols");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw std::invalid_argument("time series contains a non-finite value at flat index " +
                                  std::to_string(i));
    }
  }
}

TimeSeries TimeSeries::univariate(std::vector<double> values) {
  int n = static_cast<int>(values.size());
  return TimeSeries(std::move(values), n, 1);
}

Partition::Partition(int length, std::vector<int> boundaries)
    : length_(length), boundaries_(std::move(boundaries)) {
  if (length_ < 1) {
    throw std::invalid_argument("partition length must be positive");
  }
  int prev = 0;
  for (int tau : boundaries_) {
    if (tau <= prev || tau >= length_) {
      throw std::invalid_argument("partition boundaries must be strictly increasing within [1, length)");
    }
    prev = tau;
  }
}

Segment Partition::cluster(int i) const {
  int k = cluster_count();
  if (i < 0 || i >= k) {
    throw std::invalid_argument("cluster index out of range");
  }
  int start = (i == 0) ? 1 : boundaries_[i - 1] + 1;
  int end = (i == k - 1) ? length_ : boundaries_[i];
  return {start, end};
}

Partition Partition::with_boundary(int tau) const {
  std::vector<int> next = boundaries_;
  auto it = std::lower_bound(next.begin(), next.end(), tau);
  if (it != next.end() && *it == tau) {
    throw std::invalid_argument("boundary already present");
  }
  next.insert(it, tau);
  return Partition(length_, std::move(next));
}

}  // namespace ecpd
