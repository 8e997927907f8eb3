#pragma once

#include <cstdint>
#include <random>

namespace cgsc {

/// Seeded generator used everywhere randomness is needed.
///
/// Engine: std::mt19937_64 seeded directly with the 64-bit seed. The
/// transforms below are written out instead of using <random> distributions
/// so the produced streams do not depend on the standard library vendor:
///   uniform()   = (engine() >> 11) * 2^-53, in [0, 1)
///   normal()    = Box-Muller on two uniforms, cosine branch only
///   below(n)    = rejection sampling on engine() for an unbiased index
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cgsc
