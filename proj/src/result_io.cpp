#include "ecpd/result_io.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ecpd/num_format.hpp"

namespace ecpd {
namespace {

void check_change_points(const std::vector<int>& taus, int length) {
  int prev = 0;
  for (int tau : taus) {
    if (tau <= prev || tau >= length) {
      throw std::invalid_argument("change points must be strictly increasing inside (0, length)");
    }
    prev = tau;
  }
}

template <typename T>
std::string int_array(const std::vector<T>& values) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ", ";
    out << values[i];
  }
  out << ']';
  return out.str();
}

std::string double_array(const std::vector<double>& values) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ", ";
    out << format_double(values[i]);
  }
  out << ']';
  return out.str();
}

}  // namespace

ResultDocument make_document(const DivisiveResult& result, int dimension,
                             double duration_seconds) {
  ResultDocument doc;
  doc.method = "divisive";
  doc.length = result.final_partition.length();
  doc.dimension = dimension;
  doc.alpha = result.config.alpha.value();
  doc.change_points = result.final_partition.boundaries();
  doc.min_size = result.config.min_size;
  doc.permutations = result.config.num_permutations;
  doc.significance = result.config.significance;
  doc.max_change_points = result.config.max_change_points;
  doc.seed = result.config.seed;
  doc.estimates = result.estimates;
  doc.total_permutations = result.total_permutations;
  doc.duration_seconds = duration_seconds;
  return doc;
}

ResultDocument make_document(const MergeTrace& trace, int length, int dimension,
                             double alpha, int init_width, double duration_seconds) {
  ResultDocument doc;
  doc.method = "agglo";
  doc.length = length;
  doc.dimension = dimension;
  doc.alpha = alpha;
  doc.change_points = selected_change_points(trace);
  doc.init_width = init_width;
  doc.gof = trace.gof;
  doc.best_k = trace.best_k;
  doc.duration_seconds = duration_seconds;
  return doc;
}

std::string to_json(const ResultDocument& doc) {
  if (doc.method != "divisive" && doc.method != "agglo") {
    throw std::invalid_argument("unknown method: " + doc.method);
  }
  check_change_points(doc.change_points, doc.length);
  std::ostringstream out;
  out << "{\n";
  out << "  \"method\": \"" << doc.method << "\",\n";
  out << "  \"length\": " << doc.length << ",\n";
  out << "  \"dimension\": " << doc.dimension << ",\n";
  out << "  \"alpha\": " << format_double(doc.alpha) << ",\n";
  if (doc.method == "divisive") {
    out << "  \"min_size\": " << doc.min_size.value() << ",\n";
    out << "  \"permutations\": " << doc.permutations.value() << ",\n";
    out << "  \"significance\": " << format_double(doc.significance.value()) << ",\n";
    out << "  \"max_change_points\": ";
    if (doc.max_change_points) {
      out << *doc.max_change_points;
    } else {
      out << "null";
    }
    out << ",\n";
    out << "  \"seed\": " << doc.seed.value() << ",\n";
    out << "  \"change_points\": " << int_array(doc.change_points) << ",\n";
    out << "  \"estimates\": [";
    for (std::size_t i = 0; i < doc.estimates.size(); ++i) {
      const DivisiveStep& s = doc.estimates[i];
      out << (i ? "," : "") << "\n    {\"order\": " << s.order << ", \"tau\": " << s.tau_hat
          << ", \"kappa\": " << s.kappa_hat << ", \"qhat\": " << format_double(s.qhat)
          << ", \"pvalue\": " << format_double(s.pvalue)
          << ", \"significant\": " << (s.significant ? "true" : "false") << "}";
    }
    out << (doc.estimates.empty() ? "]" : "\n  ]") << ",\n";
    out << "  \"total_permutations\": " << doc.total_permutations.value() << ",\n";
  } else {
    out << "  \"init_width\": " << doc.init_width.value() << ",\n";
    out << "  \"change_points\": " << int_array(doc.change_points) << ",\n";
    out << "  \"gof\": " << double_array(doc.gof) << ",\n";
    out << "  \"best_k\": " << doc.best_k.value() << ",\n";
  }
  out << "  \"duration_seconds\": " << format_double(doc.duration_seconds) << "\n";
  out << "}\n";
  return out.str();
}

ResultDocument parse_document(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  ResultDocument doc;
  doc.method = j.at("method").get<std::string>();
  if (doc.method != "divisive" && doc.method != "agglo") {
    throw std::invalid_argument("unknown method: " + doc.method);
  }
  doc.length = j.at("length").get<int>();
  doc.dimension = j.at("dimension").get<int>();
  doc.alpha = j.at("alpha").get<double>();
  doc.change_points = j.at("change_points").get<std::vector<int>>();
  check_change_points(doc.change_points, doc.length);
  if (doc.method == "divisive") {
    doc.min_size = j.at("min_size").get<int>();
    doc.permutations = j.at("permutations").get<int>();
    doc.significance = j.at("significance").get<double>();
    if (!j.at("max_change_points").is_null()) {
      doc.max_change_points = j.at("max_change_points").get<int>();
    }
    doc.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("estimates")) {
      doc.estimates.push_back({e.at("order").get<int>(), e.at("tau").get<int>(),
                               e.at("kappa").get<int>(), e.at("qhat").get<double>(),
                               e.at("pvalue").get<double>(), e.at("significant").get<bool>()});
    }
    doc.total_permutations = j.at("total_permutations").get<long long>();
  } else {
    doc.init_width = j.at("init_width").get<int>();
    doc.gof = j.at("gof").get<std::vector<double>>();
    doc.best_k = j.at("best_k").get<int>();
  }
  doc.duration_seconds = j.at("duration_seconds").get<double>();
  return doc;
}

}  // namespace ecpd
