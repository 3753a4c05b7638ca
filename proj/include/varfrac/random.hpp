#pragma once

#include <cstdint>
#include <random>

#include "varfrac/operator_core.hpp"

namespace varfrac {

// mt19937_64 is fully specified by the standard; the distributions are not,
// so uniforms are formed from the raw bits to stay identical across libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  std::mt19937_64 eng_;
};

// Step function on `cells` equal cells of [0,1] with values drawn from [lo, hi).
inline GridFunction random_step(Rng& rng, int cells, double lo, double hi) {
  GridFunction g;
  g.interp = Interpretation::PiecewiseConstantLeft;
  for (int j = 0; j <= cells; ++j) {
    g.nodes.push_back(j == cells ? 1.0 : static_cast<double>(j) / cells);
    g.values.push_back(j == cells ? 0.0 : rng.uniform(lo, hi));
  }
  g.values.back() = g.values[cells - 1];
  return g;
}

}  // namespace varfrac
