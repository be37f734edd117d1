#include "ecpd/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace ecpd {
namespace {

struct RawCell {
  std::string text;
  int line = 0;  // 1-based source line of the record start
};

// Splits file content into records of fields, honoring quotes. Blank records
// are skipped.
std::vector<std::vector<RawCell>> split_records(const std::string& content, char delimiter) {
  std::vector<std::vector<RawCell>> records;
  std::vector<RawCell> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  int line = 1;
  int record_line = 1;

  auto push_field = [&] {
    record.push_back({field, record_line});
    field.clear();
    any = false;
  };
  auto push_record = [&] {
    if (any || !field.empty() || !record.empty()) {
      push_field();
      records.push_back(std::move(record));
      record.clear();
    }
    record_line = line;
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == delimiter) {
      push_field();
      any = true;  // a delimiter implies another (possibly empty) field
    } else if (c == '\n') {
      push_record();
      ++line;
      record_line = line;
    } else if (c == '\r') {
      // swallow; \r\n handled by the \n branch
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field at end of file");
  push_record();
  return records;
}

bool is_missing_token(std::string token) {
  for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return token.empty() || token == "na" || token == "nan" || token == "null" || token == "none";
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// nan when the cell counts as missing; throws when it is garbage.
double parse_cell(const RawCell& cell, int column, bool impute) {
  std::string text = trimmed(cell.text);
  auto missing_or_throw = [&](const std::string& what) -> double {
    if (impute) return std::numeric_limits<double>::quiet_NaN();
    std::ostringstream msg;
    msg << what << " at line " << cell.line << ", column " << column;
    throw CsvError(msg.str());
  };
  if (is_missing_token(text)) return missing_or_throw("missing value");
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    std::ostringstream msg;
    msg << "cannot parse '" << text << "' as a number at line " << cell.line << ", column "
        << column;
    throw CsvError(msg.str());
  }
  if (!std::isfinite(value)) return missing_or_throw("non-finite value");
  return value;
}

}  // namespace

TimeSeries ingest_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto records = split_records(buffer.str(), options.delimiter);

  std::size_t first = 0;
  if (options.header) {
    if (records.empty()) throw CsvError("file has a header but no data rows: " + path);
    first = 1;
  }
  if (records.size() <= first) throw CsvError("no data rows in file: " + path);

  const int width = static_cast<int>(records[first].size());
  std::vector<int> columns = options.columns;
  if (columns.empty()) {
    for (int c = 1; c <= width; ++c) columns.push_back(c);
  }
  for (int c : columns) {
    if (c < 1 || c > width) {
      throw CsvError("column " + std::to_string(c) + " out of range; file has " +
                     std::to_string(width) + " columns");
    }
  }

  const int rows = static_cast<int>(records.size() - first);
  const int dims = static_cast<int>(columns.size());
  std::vector<double> data(static_cast<std::size_t>(rows) * dims, 0.0);
  bool has_missing = false;
  for (int r = 0; r < rows; ++r) {
    const auto& record = records[first + r];
    if (static_cast<int>(record.size()) != width) {
      throw CsvError("line " + std::to_string(record.empty() ? 0 : record[0].line) + " has " +
                     std::to_string(record.size()) + " fields, expected " +
                     std::to_string(width));
    }
    for (int c = 0; c < dims; ++c) {
      double v = parse_cell(record[columns[c] - 1], columns[c], options.impute);
      if (std::isnan(v)) has_missing = true;
      data[static_cast<std::size_t>(r) * dims + c] = v;
    }
  }

  if (has_missing) {
    // Mean of the nearest observed values above and below in the column;
    // one-sided at the edges. Values are computed against the original
    // observations and applied afterwards, so runs of missing cells all
    // borrow the same observed neighbors.
    for (int c = 0; c < dims; ++c) {
      std::vector<std::pair<int, double>> pending;
      for (int r = 0; r < rows; ++r) {
        if (!std::isnan(data[static_cast<std::size_t>(r) * dims + c])) continue;
        int up = r - 1;
        while (up >= 0 && std::isnan(data[static_cast<std::size_t>(up) * dims + c])) --up;
        int down = r + 1;
        while (down < rows && std::isnan(data[static_cast<std::size_t>(down) * dims + c])) ++down;
        double sum = 0.0;
        int count = 0;
        if (up >= 0) {
          sum += data[static_cast<std::size_t>(up) * dims + c];
          ++count;
        }
        if (down < rows) {
          sum += data[static_cast<std::size_t>(down) * dims + c];
          ++count;
        }
        if (count == 0) {
          throw CsvError("column " + std::to_string(columns[c]) +
                         " has no observed values to impute from");
        }
        pending.emplace_back(r, sum / count);
      }
      for (auto [r, v] : pending) data[static_cast<std::size_t>(r) * dims + c] = v;
    }
  }

  return TimeSeries(std::move(data), rows, dims);
}

}  // namespace ecpd
