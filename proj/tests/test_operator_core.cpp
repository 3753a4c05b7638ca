#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "varfrac/errors.hpp"
#include "varfrac/operator_core.hpp"

using namespace varfrac;
using doctest::Approx;

namespace {

QuadratureConfig cfg_cells(int n) {
  QuadratureConfig c;
  c.n_cells = n;
  return c;
}

GridFunction random_steps(oracle::Gen& g, int cells, double lo, double hi) {
  GridFunction f;
  f.interp = Interpretation::PiecewiseConstantLeft;
  for (int j = 0; j <= cells; ++j) {
    f.nodes.push_back(static_cast<double>(j) / cells);
    f.values.push_back(g.uniform(lo, hi));
  }
  f.nodes.back() = 1.0;
  return f;
}

GridFunction random_linear(oracle::Gen& g, int cells) {
  std::vector<double> x{0.0};
  for (int j = 1; j < cells; ++j) x.push_back(g.uniform());
  x.push_back(1.0);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  GridFunction f;
  f.nodes = x;
  for (std::size_t j = 0; j < x.size(); ++j) f.values.push_back(g.uniform(-1.0, 1.0));
  return f;
}

}  // namespace

TEST_CASE("gamma against the Stirling oracle") {
  for (double x : {0.05, 0.3, 0.5, 1.0, 1.4616, 2.5, 7.25, 30.0})
    CHECK(varfrac::gamma(x) == Approx(oracle::gamma(x)).epsilon(1e-13));
  CHECK(varfrac::gamma(0.3) == Approx(2.9915689876875906).epsilon(1e-14));
  CHECK(gamma_min() == Approx(0.8856031944108887).epsilon(1e-14));
  CHECK(gamma_argmin() == Approx(1.4616321449683623).epsilon(1e-8));
  CHECK_THROWS_AS(varfrac::gamma(0.0), std::invalid_argument);
}

TEST_CASE("kernel moments and hat weights") {
  // int_0^1 (1-s)^(-1/2) ds = 2, int_0^1 (1-s)^(-1/2) s ds = 4/3.
  CHECK(kernel_moment(1.0, 0.5, 0.0, 1.0, 0) == Approx(2.0).epsilon(1e-14));
  CHECK(kernel_moment(1.0, 0.5, 0.0, 1.0, 1) == Approx(4.0 / 3.0).epsilon(1e-14));
  oracle::Gen g(3);
  for (int trial = 0; trial < 200; ++trial) {
    double a = g.uniform(0.05, 3.0), x = g.uniform(1e-6, 1.0), y = g.uniform(0.0, x * 0.999999);
    auto w = hat_weights(a, y, x);
    // Linear g(d) = 1 and g(d) = d reproduce the 0th and 1st moments.
    double m0 = (std::pow(x, a) - std::pow(y, a)) / a;
    double m1 = (std::pow(x, a + 1) - std::pow(y, a + 1)) / (a + 1);
    CHECK(w.w_near + w.w_far == Approx(m0).epsilon(1e-11));
    CHECK(w.w_near * y + w.w_far * x == Approx(m1).epsilon(1e-11));
    CHECK(power_moment(a, y, x) == Approx(m0).epsilon(1e-11));
  }
  // Narrow cells use the series branch; compare with long double.
  double a = 0.37, x = 0.5, y = 0.5 - 1e-9;
  auto w = hat_weights(a, y, x);
  long double X = x, Y = y, A = a;
  long double m1 = (powl(X, A + 1) - powl(Y, A + 1)) / (A + 1);
  CHECK(w.w_near * y + w.w_far * x == Approx(static_cast<double>(m1)).epsilon(1e-6));
}

TEST_CASE("constant order on f = 1 is t^a / Gamma(a+1)") {
  auto one = GridFunction::uniform([](double) { return 1.0; }, 0.0, 1.0, 64);
  std::vector<double> t = linspace(0.0, 1.0, 32);
  for (double a : {0.2, 0.5, 1.0, 1.5, 2.5}) {
    auto out = rl_apply(OrderFunction::constant(a), one, t, cfg_cells(64));
    for (std::size_t k = 0; k < t.size(); ++k)
      CHECK(out.values[k] == Approx(std::pow(t[k], a) / std::tgamma(a + 1)).epsilon(1e-13));
    auto qo = q_apply(OrderFunction::constant(a), one, t, cfg_cells(64));
    for (std::size_t k = 0; k < t.size(); ++k)
      CHECK(qo.values[k] == Approx(std::pow(1 - t[k], a) / std::tgamma(a + 1)).epsilon(1e-13));
  }
}

TEST_CASE("variable order against the substitution oracle") {
  auto alpha = OrderFunction::power_offset(0.5, 1.0, 2.0);
  auto f = [](double s) { return std::cos(3.0 * s); };
  std::vector<double> t{0.1, 0.35, 0.7, 1.0};
  auto out = rl_apply(alpha, f, 0.0, t, cfg_cells(2048));
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(out.values[k] == Approx(oracle::rl(alpha(t[k]), f, t[k], 200000)).epsilon(2e-6));
  // Frozen: 0.99-order integral of cos 3s at t = 0.7.
  CHECK(out.values[2] == Approx(0.28692954747869128).epsilon(2e-6));
  auto q = q_apply(alpha, f, 1.0, t, cfg_cells(2048));
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(q.values[k] == Approx(oracle::q(alpha(t[k]), f, t[k], 200000)).epsilon(2e-6));
  auto c = rl_apply(OrderFunction::constant(0.5), f, 0.0, {1.0}, cfg_cells(2048));
  CHECK(c.values[0] == Approx(-0.37148383371173171).epsilon(2e-6));
  // Second-order convergence of the graded-mesh discretisation.
  double exact = oracle::rl(alpha(1.0), f, 1.0, 200000);
  double e1 = std::abs(rl_apply(alpha, f, 0.0, {1.0}, cfg_cells(1024)).values[0] - exact);
  double e2 = std::abs(rl_apply(alpha, f, 0.0, {1.0}, cfg_cells(2048)).values[0] - exact);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("grid functions are integrated exactly for their interpolant") {
  // A hat on two cells against a = 1 integrates to an exact piecewise quadratic.
  GridFunction hat{{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}};
  auto out = rl_apply(OrderFunction::constant(1.0), hat, {0.25, 0.5, 0.75, 1.0}, cfg_cells(2));
  CHECK(out.values[0] == Approx(0.0625).epsilon(1e-15));
  CHECK(out.values[1] == Approx(0.25).epsilon(1e-15));
  CHECK(out.values[2] == Approx(0.4375).epsilon(1e-15));
  CHECK(out.values[3] == Approx(0.5).epsilon(1e-15));
  GridFunction step{{0.0, 0.5, 1.0}, {1.0, 3.0, 3.0}, Interpretation::PiecewiseConstantLeft};
  auto so = rl_apply(OrderFunction::constant(1.0), step, {1.0}, cfg_cells(2));
  CHECK(so.values[0] == Approx(2.0));
}

TEST_CASE("errors") {
  auto one = GridFunction::uniform([](double) { return 1.0; }, 0.0, 1.0, 8);
  CHECK_THROWS_AS(rl_apply(OrderFunction::constant(0.5), one, {1.5}, cfg_cells(8)), std::exception);
  auto zero_target = rl_apply(OrderFunction::reciprocal_log(), one, {0.0}, cfg_cells(8));
  CHECK(zero_target.values[0] == 0.0);
  GridFunction bad{{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  QuadratureConfig c;
  c.n_cells = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  auto neg = OrderFunction::constant(0.5).plus(-1.0);
  CHECK_THROWS_AS(rl_apply(neg, one, {0.5}, cfg_cells(8)), NumericalError);
}

TEST_CASE("norms, maximal function, Besov norm and projection") {
  GridFunction ramp{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(lp_norm(ramp, 1.0) == Approx(0.5).epsilon(1e-15));
  CHECK(lp_norm(ramp, 2.0) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(lp_norm(ramp, 3.0) == Approx(std::pow(0.25, 1.0 / 3.0)).epsilon(1e-14));
  CHECK(lp_norm(ramp, INFINITY) == 1.0);
  GridFunction sw{{0.0, 1.0}, {-1.0, 1.0}};
  CHECK(lp_norm(sw, 1.5) == Approx(std::pow(1.0 / 2.5, 1.0 / 1.5)).epsilon(1e-14));
  CHECK(besov_norm(ramp, INFINITY, 0.5, {0.25, 1.0}) == Approx(2.0));
  auto mf = maximal_function(GridFunction{{0.0, 1.0}, {1.0, 1.0}, Interpretation::PiecewiseConstantLeft},
                             {0.0, 0.5, 1.0});
  // f is extended by zero, so the endpoints see half of it.
  CHECK(mf.values[0] == Approx(0.5));
  CHECK(mf.values[1] == Approx(1.0));
  CHECK(mf.values[2] == Approx(0.5));
  auto p = project_average(ramp, 4);
  CHECK(p.interp == Interpretation::PiecewiseConstantLeft);
  CHECK(p.values[0] == Approx(0.125));
  CHECK(p.values[3] == Approx(0.875));
  CHECK(lp_distance(ramp, p, 2.0) == Approx(std::sqrt(4 * std::pow(0.25, 3) / 12.0)).epsilon(1e-13));
}

TEST_CASE("property: linearity and positivity of rl_apply") {
  oracle::Gen g(21);
  auto alpha = OrderFunction::exp_offset(0.3, 1.0, 1.0);
  std::vector<double> t = linspace(0.0, 1.0, 40);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = random_linear(g, g.integer(2, 40));
    GridFunction h = f;
    double c = g.uniform(-2.0, 2.0);
    for (double& v : h.values) v *= c;
    auto rf = rl_apply(alpha, f, t, cfg_cells(64)), rh = rl_apply(alpha, h, t, cfg_cells(64));
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(rh.values[k] == Approx(c * rf.values[k]).scale(1.0));
    auto pos = random_steps(g, g.integer(1, 30), 0.0, 1.0);
    auto rp = rl_apply(alpha, pos, t, cfg_cells(64));
    for (double v : rp.values) CHECK(v >= 0.0);
  }
}

TEST_CASE("property: maximal function dominates the brute-force window search") {
  oracle::Gen g(22);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_steps(g, g.integer(2, 12), -1.0, 1.0);
    std::vector<double> t;
    for (int k = 0; k < 8; ++k) t.push_back(g.uniform());
    auto mf = maximal_function(f, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
      double brute = oracle::maximal_step(f.nodes, f.values, t[k]);
      CHECK(mf.values[k] >= brute - 1e-11);
      CHECK(mf.values[k] <= brute * 1.001 + 1e-12);
    }
  }
}

TEST_CASE("property: norm axioms and idempotent projection") {
  oracle::Gen g(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_linear(g, g.integer(2, 20)), h = random_linear(g, g.integer(2, 20));
    double p = g.uniform(1.0, 6.0);
    CHECK(lp_distance(f, h, p) == Approx(lp_distance(h, f, p)).epsilon(1e-12));
    CHECK(lp_distance(f, h, p) <= lp_norm(f, p) + lp_norm(h, p) + 1e-12);
    CHECK(lp_norm(f, p) <= lp_norm(f, INFINITY) + 1e-12);
    int n = g.integer(1, 16);
    auto p1 = project_average(f, n);
    auto p2 = project_average(p1, n);
    for (std::size_t j = 0; j < p1.size(); ++j) CHECK(p2.values[j] == Approx(p1.values[j]).scale(1.0));
  }
}
