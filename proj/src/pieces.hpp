#pragma once

// Internal: piecewise-linear views used for exact norms and differences.

#include <vector>

#include "varfrac/operator_core.hpp"

namespace varfrac::detail {

struct Lin {
  double x0, x1;  // x0 < x1
  double v0, v1;  // values at the ends (one-sided limits from inside)
};

// Cell index j with nodes[j] <= x < nodes[j+1], clamped to the valid range.
std::size_t cell_of(const GridFunction& f, double x);

// Values at u and w of the affine piece of f (in the cell containing the
// midpoint), f evaluated at x + shift.
void affine_ends(const GridFunction& f, double shift, double u, double w, double& fu, double& fw);

// Pieces of f(x + sf) - g(x + sg) (g may be null) on [lo, hi], split at every
// node of either function.
std::vector<Lin> difference_pieces(const GridFunction& f, double sf, const GridFunction* g,
                                   double sg, double lo, double hi);

// Integral of |v|^p over the pieces (p finite) or max |v| (p infinite).
double lp_power_sum(const std::vector<Lin>& pieces, double p);
double lp_of_pieces(const std::vector<Lin>& pieces, double p);

// 8-point Gauss-Legendre rule on [-1, 1].
extern const double kGaussX[8];
extern const double kGaussW[8];

template <class F>
double gauss8(F&& fn, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
  for (int i = 0; i < 8; ++i) s += kGaussW[i] * fn(c + h * kGaussX[i]);
  return s * h;
}

}  // namespace varfrac::detail
