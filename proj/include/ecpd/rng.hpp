#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ecpd {

// Name recorded in study reports so results can be tied to the draw scheme.
inline constexpr const char* kGeneratorId = "mt19937_64/polar";

// splitmix64 finalizer. Used to derive independent substream seeds; the C++
// engine is seeded with the result, never with raw arithmetic on user seeds.
std::uint64_t mix64(std::uint64_t x);

// Substream seed for a (seed, a, b) triple, e.g. (run seed, step, replicate).
std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// mt19937_64 plus fixed sampling recipes. The standard pins the engine's
// output sequence, and the recipes below avoid std::*_distribution, so a
// given seed yields identical draws on every platform.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), rejection method, n >= 1.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Marsaglia's polar method; spare value is cached.
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang, with the boost for shape < 1.
  double gamma(double shape);

  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

  // Student's t with dof degrees of freedom.
  double student_t(double dof);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates shuffle of values[first..last] (inclusive, 0-based positions).
void shuffle_span(std::vector<int>& values, int first, int last, Sampler& rng);

}  // namespace ecpd
