#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "varfrac/spectral.hpp"

using namespace varfrac;
using doctest::Approx;

namespace {

// scale * int_{I_i} [(t-x_j)^a - (t-x_{j+1})_+^a] / (a Gamma(a)) dt, with the
// outer integral by Simpson.
double oracle_entry(const OrderFunction& alpha, int n, double r, double p, double q, int i, int j) {
  double h = r / n, scale = std::pow(n / r, 1.0 / p - 1.0 / q + 1.0);
  double xj = j * h, xj1 = (j + 1) * h;
  auto inner = [&](double t) {
    double a = alpha(t);
    double hi = t > xj ? std::pow(t - xj, a) : 0.0;
    double lo = t > xj1 ? std::pow(t - xj1, a) : 0.0;
    return (hi - lo) / (a * oracle::gamma(a));
  };
  return scale * oracle::simpson(inner, i * h, (i + 1) * h, 20000);
}

}  // namespace

TEST_CASE("two-cell Volterra matrix is exact") {
  auto m = assemble_matrix(OrderFunction::constant(1.0), 2, 1.0, 2.0, 2.0, {});
  CHECK(m(0, 0) == Approx(0.25).epsilon(1e-14));
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 0) == Approx(0.5).epsilon(1e-14));
  CHECK(m(1, 1) == Approx(0.25).epsilon(1e-14));
  CHECK(m.basis_tag == "normalized-indicator");
}

TEST_CASE("assembled entries against direct quadrature") {
  auto alpha = OrderFunction::power_offset(0.5, 1.0, 2.0);
  int n = 6;
  auto m = assemble_matrix(alpha, n, 0.8, 2.0, 3.0, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      CHECK(m(i, j) == Approx(oracle_entry(alpha, n, 0.8, 2.0, 3.0, i, j)).epsilon(1e-7));
  auto rl = OrderFunction::reciprocal_log();
  auto mr = assemble_matrix(rl, 5, 1.0, 2.0, 2.0, {});
  for (int i = 1; i < 5; ++i)
    for (int j = 0; j <= i; ++j) CHECK(mr(i, j) == Approx(oracle_entry(rl, 5, 1.0, 2.0, 2.0, i, j)).epsilon(1e-6));
}

TEST_CASE("Volterra singular values") {
  auto sv = singular_values(assemble_matrix(OrderFunction::constant(1.0), 256, 1.0, 2.0, 2.0, {}));
  for (int k = 1; k <= 20; ++k) CHECK(sv[k - 1] == Approx(2.0 / ((2.0 * k - 1.0) * M_PI)).epsilon(0.01));
  // The Galerkin matrix is h (L + I/2), L strictly lower ones; its singular
  // values are (h/2) cot((2k-1) pi / (4n)).
  for (int k = 1; k <= 256; ++k)
    CHECK(sv[k - 1] == Approx(0.5 / 256 / std::tan((2.0 * k - 1.0) * M_PI / 1024.0)).epsilon(1e-11));
}

TEST_CASE("singular values of diagonal and triangular matrices") {
  auto d = singular_values(OperatorMatrix::diagonal({0.2, 3.0, 1.0, 0.5}));
  REQUIRE(d.size() == 4);
  CHECK(d[0] == Approx(3.0));
  CHECK(d[1] == Approx(1.0));
  CHECK(d[2] == Approx(0.5));
  CHECK(d[3] == Approx(0.2));
  OperatorMatrix bad = OperatorMatrix::diagonal({1.0, NAN});
  CHECK_THROWS_AS(singular_values(bad), std::invalid_argument);
}

TEST_CASE("approximation numbers") {
  CHECK_THROWS_AS(approximation_numbers(OrderFunction::constant(1.0), 16, 64, {}), std::invalid_argument);
  auto an = approximation_numbers(OrderFunction::constant(1.0), 8, 128, {});
  CHECK(an.converged);
  REQUIRE(an.values.size() == 8);
  CHECK(an.values[0] == Approx(2.0 / M_PI).epsilon(1e-3));
}

TEST_CASE("Carl conversion and ball volumes") {
  CHECK(carl_constant(1.0) == Approx(12288.0));
  std::vector<double> a{1.0, 0.5, 1.0 / 3.0, 0.25};
  auto e = carl_entropy_upper(a, 1.0);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(e[k] == Approx(12288.0 / (k + 1.0)));
  CHECK_THROWS_AS(carl_entropy_upper({0.5, 1.0}, 1.0), std::invalid_argument);
  CHECK(ball_volume_root(3, 1.0) == Approx(1.1006424162982089).epsilon(1e-14));
  CHECK(ball_volume_root(5, 2.0) == Approx(1.3939901167380682).epsilon(1e-14));
  CHECK(ball_volume_root(4, INFINITY) == 2.0);
  CHECK(ball_volume_root(1, 3.7) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("volumetric lower bound") {
  for (double d : {0.37, 1.0, 2.5e-3}) {
    auto v = volumetric_entropy_lower(OperatorMatrix::diagonal(std::vector<double>(9, d), 2.0, 2.0));
    CHECK(v.bound == d / 2.0);
  }
  auto m = assemble_matrix(OrderFunction::constant(1.0), 2, 1.0, 2.0, 2.0, {});
  CHECK(volumetric_entropy_lower(m).bound == Approx(0.125).epsilon(1e-9));
  // p = 1, q = 2, n = 2: (vol B_1^2 / vol B_2^2)^(1/2) = (2/pi)^(1/2).
  auto v = volumetric_entropy_lower(OperatorMatrix::diagonal({1.0, 1.0}, 1.0, 2.0));
  CHECK(v.volume_ratio_root == Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
  CHECK(ordering_violations({1.0, 2.0, 3.0}, {1.0, 1.0, 3.5}) == 1);
}

TEST_CASE("property: singular values of random lower-triangular matrices") {
  oracle::Gen g(41);
  for (int trial = 0; trial < 40; ++trial) {
    int n = g.integer(1, 90);
    OperatorMatrix m;
    m.n = n;
    m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    double frob = 0.0, logdet = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = j == i ? g.uniform(0.5, 2.0) : g.uniform(-1.0, 1.0);
        m.at(i, j) = v;
        frob += v * v;
        if (i == j) logdet += std::log(v);
      }
    auto s = singular_values(m);
    double ss = 0.0, ls = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k) CHECK(s[k] <= s[k - 1]);
      CHECK(s[k] >= 0.0);
      ss += s[k] * s[k];
      ls += std::log(s[k]);
    }
    CHECK(ss == Approx(frob).epsilon(1e-10));
    CHECK(ls == Approx(logdet).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("property: constant-order matrices scale as r^a on [0, r]") {
  oracle::Gen g(42);
  for (int trial = 0; trial < 20; ++trial) {
    double a = g.uniform(0.2, 2.0), r = g.uniform(0.05, 1.0);
    int n = g.integer(2, 24);
    auto m1 = assemble_matrix(OrderFunction::constant(a), n, 1.0, 2.0, 2.0, {});
    auto mr = assemble_matrix(OrderFunction::constant(a), n, r, 2.0, 2.0, {});
    double f = std::pow(r, a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) CHECK(mr(i, j) == Approx(f * m1(i, j)).epsilon(1e-10));
  }
}
