#pragma once

#include <functional>
#include <vector>

#include "varfrac/order_function.hpp"

namespace varfrac {

enum class Interpretation { PiecewiseLinear, PiecewiseConstantLeft };

struct GridFunction {
  std::vector<double> nodes;
  std::vector<double> values;
  Interpretation interp = Interpretation::PiecewiseLinear;

  double front() const { return nodes.front(); }
  double back() const { return nodes.back(); }
  std::size_t size() const { return nodes.size(); }

  // Throws std::invalid_argument unless nodes are strictly increasing,
  // values finite and sizes match.
  void validate() const;
  // Value of the interpolant; for the step interpretation the left node's
  // value is used on each half-open cell [x_j, x_{j+1}).
  double operator()(double x) const;

  static GridFunction sample(const std::function<double(double)>& f,
                             const std::vector<double>& nodes,
                             Interpretation interp = Interpretation::PiecewiseLinear);
  static GridFunction uniform(const std::function<double(double)>& f, double a, double b,
                              std::size_t cells,
                              Interpretation interp = Interpretation::PiecewiseLinear);
};

struct QuadratureConfig {
  int n_cells = 256;
  double grading = 2.0;
  double abs_tol = 1e-10;
  void validate() const;
};

std::vector<double> linspace(double a, double b, std::size_t cells);

// Gamma function and its minimum over (0, inf).
double gamma(double x);
double gamma_min();     // K0 ~ 0.8856031944
double gamma_argmin();  // ~ 1.4616321449683623

// Exact integral of (t-s)^(a-1) s^k over [u,v], k in {0,1}.
double kernel_moment(double t, double a, double u, double v, int k);

// Product-integration weights for a linear function on the distance cell
// [y, x] (0 <= y < x) against the kernel d^(a-1): integral of d^(a-1) g(d)
// equals w_near*g(y) + w_far*g(x) for every linear g.
struct HatWeights {
  double w_near;
  double w_far;
};
HatWeights hat_weights(double a, double y, double x);
// Integral of d^(a-1) over [y, x].
double power_moment(double a, double y, double x);

// (R^alpha f)(t) = 1/Gamma(alpha(t)) * int_{a}^{t} (t-s)^{alpha(t)-1} f(s) ds, where
// a is the left end of f's grid. Exact for the interpolant of f.
GridFunction rl_apply(const OrderFunction& alpha, const GridFunction& f,
                      const std::vector<double>& targets, const QuadratureConfig& cfg);
// Right-sided companion over [t, b], b the right end of f's grid.
GridFunction q_apply(const OrderFunction& alpha, const GridFunction& f,
                     const std::vector<double>& targets, const QuadratureConfig& cfg);

// Same operators for a callable f on [a, b]; f is sampled on a mesh graded
// toward s = t with cfg.n_cells cells and exponent cfg.grading.
GridFunction rl_apply(const OrderFunction& alpha, const std::function<double(double)>& f,
                      double a, const std::vector<double>& targets, const QuadratureConfig& cfg);
GridFunction q_apply(const OrderFunction& alpha, const std::function<double(double)>& f,
                     double b, const std::vector<double>& targets, const QuadratureConfig& cfg);

double lp_norm(const GridFunction& f, double p);
// ||f - g||_p over the common domain, exact for both interpolants.
double lp_distance(const GridFunction& f, const GridFunction& g, double p);

// Hardy-Littlewood maximal function with f extended by zero outside its grid.
GridFunction maximal_function(const GridFunction& f, const std::vector<double>& targets);

// ||f||_p + max over h in h_grid of h^-alpha ||f(.+h) - f||_p on [a, b-h].
double besov_norm(const GridFunction& f, double p, double alpha,
                  const std::vector<double>& h_grid);

// Cell means on n equal cells (piecewise-constant result).
GridFunction project_average(const GridFunction& f, int n);

}  // namespace varfrac
