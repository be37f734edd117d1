#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecpd/agglo.hpp"
#include "ecpd/divisive.hpp"
#include "ecpd/types.hpp"

namespace ecpd {

// Detection output in serializable form. Field presence depends on method:
// divisive documents carry estimates and test configuration, agglomerative
// documents carry the gof trajectory and initialization width.
struct ResultDocument {
  std::string method;  // "divisive" | "agglo"
  int length = 0;
  int dimension = 0;
  double alpha = 1.0;
  std::vector<int> change_points;  // strictly increasing, inside (0, length)

  // divisive
  std::optional<int> min_size;
  std::optional<int> permutations;
  std::optional<double> significance;
  std::optional<int> max_change_points;  // nullopt = unlimited (JSON null)
  std::optional<std::uint64_t> seed;
  std::vector<DivisiveStep> estimates;
  std::optional<long long> total_permutations;

  // agglo
  std::optional<int> init_width;
  std::vector<double> gof;
  std::optional<int> best_k;

  double duration_seconds = 0.0;
};

ResultDocument make_document(const DivisiveResult& result, int dimension,
                             double duration_seconds);
ResultDocument make_document(const MergeTrace& trace, int length, int dimension,
                             double alpha, int init_width, double duration_seconds);

// Canonical serialization: fixed field order, two-space indent, all floats at
// 12 significant digits. parse followed by to_json is byte-identical.
std::string to_json(const ResultDocument& doc);
ResultDocument parse_document(const std::string& json);

}  // namespace ecpd
