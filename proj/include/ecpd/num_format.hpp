#pragma once

#include <cstdio>
#include <string>

namespace ecpd {

// Canonical float rendering for all emitted documents: 12 significant digits,
// shortest %g form. 12 digits survive a parse/re-render cycle unchanged, which
// keeps serialized output stable under round-trips.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace ecpd
