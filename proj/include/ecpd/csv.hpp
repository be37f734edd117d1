#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ecpd/types.hpp"

namespace ecpd {

class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
  std::vector<int> columns;  // 1-based subset in the given order; empty = all
  bool impute = false;       // replace missing cells by the mean of the
                             // nearest finite values above and below in the
                             // same column (one-sided at the edges)
};

// RFC-4180-style parser: quoted fields, doubled-quote escapes, CR/LF line
// ends. Cells must be finite numbers; empty, NA, NaN-like or non-finite cells
// are errors naming their line and column unless options.impute is set.
TimeSeries ingest_csv(const std::string& path, const CsvOptions& options = {});

}  // namespace ecpd
