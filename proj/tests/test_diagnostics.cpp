#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracle.hpp"
#include "varfrac/diagnostics.hpp"

using namespace varfrac;
using doctest::Approx;

namespace {

QuadratureConfig cells(int n) {
  QuadratureConfig c;
  c.n_cells = n;
  return c;
}

GridFunction cos3_grid() {
  return GridFunction::uniform([](double s) { return std::cos(3.0 * s); }, 0.0, 1.0, 4096);
}

}  // namespace

TEST_CASE("L1 operator norm") {
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    auto r = l1_operator_norm(OrderFunction::constant(a), {0.0, 0.3, 0.6}, cells(256));
    CHECK_FALSE(r.divergent);
    CHECK(r.value == Approx(1.0 / oracle::gamma(a + 1.0)).epsilon(1e-6));
  }
  CHECK(l1_inner_integral(OrderFunction::constant(0.5), 0.36) ==
        Approx(0.8 / oracle::gamma(1.5)).epsilon(1e-10));
  auto rl = l1_operator_norm(OrderFunction::reciprocal_log(), {0.0, 0.5}, cells(256));
  CHECK(rl.divergent);
  CHECK(std::isinf(rl.value));
  CHECK(rl.evidence.size() >= 4);
}

TEST_CASE("L1 criterion integral") {
  for (double a : {0.1, 0.25, 1.0, 2.0, 3.5}) {
    auto r = l1_criterion_integral(OrderFunction::constant(a), cells(256));
    CHECK(r.value == Approx(1.0).epsilon(1e-8));
  }
  CHECK(l1_criterion_truncated(OrderFunction::constant(0.5), 0.01) == Approx(0.9).epsilon(1e-12));
  // Frozen against arbitrary-precision quadrature.
  CHECK(l1_criterion_integral(OrderFunction::power_offset(0.5, 1.0, 2.0), cells(256)).value ==
        Approx(1.2792923968886984).epsilon(1e-9));
  // u = -ln t turns the singular part into 2 int_1^inf e^-v dv.
  CHECK(l1_criterion_integral(OrderFunction::log_power(0.5), cells(256)).value ==
        Approx(1.0 + std::exp(-1.0)).epsilon(1e-9));
  CHECK(l1_criterion_integral(OrderFunction::exp_offset(0.5, 1.0, 1.0), cells(256)).value ==
        Approx(1.1339735687043240).epsilon(1e-9));
  auto rl = l1_criterion_integral(OrderFunction::reciprocal_log(), cells(256));
  CHECK(rl.divergent);
  // ln ln growth: constant increments along the doubling schedule.
  REQUIRE(rl.evidence.size() >= 4);
  auto n = rl.evidence.size();
  double d1 = rl.evidence[n - 1].value - rl.evidence[n - 2].value;
  double d2 = rl.evidence[n - 2].value - rl.evidence[n - 3].value;
  CHECK(d1 == Approx(std::exp(-1.0) * std::log(2.0)).epsilon(1e-6));
  CHECK(d2 == Approx(d1).epsilon(1e-6));
}

TEST_CASE("divergence rule") {
  std::vector<EvidencePoint> grow{{1, 1.0}, {2, 2.0}, {3, 3.0}, {4, 4.0}, {5, 5.0}};
  std::vector<EvidencePoint> settle{{1, 1.0}, {2, 1.5}, {3, 1.75}, {4, 1.875}, {5, 1.9375}};
  CHECK(is_divergent(grow));
  CHECK_FALSE(is_divergent(settle));
  CHECK_FALSE(is_divergent({{1, 1.0}, {2, 2.0}}));
}

TEST_CASE("Lp to Linf norm") {
  auto one = lp_to_linf_norm(OrderFunction::constant(1.0), 2.0);
  CHECK(one.value == Approx(1.0).epsilon(1e-12));
  CHECK(lp_to_linf_norm(OrderFunction::constant(0.75), 2.0).value ==
        Approx(std::sqrt(2.0) / oracle::gamma(0.75)).epsilon(1e-12));
  CHECK(lp_to_linf_norm(OrderFunction::constant(0.4), 2.0).divergent);
  auto po = lp_to_linf_norm(OrderFunction::power_offset(0.6, 1.0, 1.0), 2.0);
  CHECK_FALSE(po.divergent);
  // Dense-grid oracle of sup_t (t^(2a-1)/(2a-1))^(1/2) / Gamma(a).
  double best = 0.0;
  for (int k = 1; k <= 100000; ++k) {
    double t = k / 100000.0, a = 0.6 + t;
    best = std::max(best, std::sqrt(std::pow(t, 2 * a - 1) / (2 * a - 1)) / oracle::gamma(a));
  }
  CHECK(po.value >= best * (1 - 1e-12));
  CHECK(po.value == Approx(best).epsilon(1e-6));
}

TEST_CASE("compactness classifier") {
  auto rl = classify_compactness(OrderFunction::reciprocal_log(), Endpoint::Zero);
  CHECK(rl.verdict == Verdict::NonCompact);
  for (const auto& e : rl.limit_evidence)
    if (e.parameter >= 2) CHECK(std::abs(e.value - std::exp(-1.0)) <= 1e-12);
  CHECK(classify_compactness(OrderFunction::log_power(0.5), Endpoint::Zero).verdict == Verdict::Compact);
  CHECK(classify_compactness(OrderFunction::power_offset(0.5, 1.0, 2.0), Endpoint::Zero).verdict ==
        Verdict::Compact);
  CHECK(classify_compactness(OrderFunction::reciprocal_log().reflected(1.0), Endpoint::One).verdict ==
        Verdict::NonCompact);
  CHECK(classify_compactness(OrderFunction::constant(0.3), Endpoint::One).verdict == Verdict::Compact);
  auto v = classify_compactness(OrderFunction::constant(0.3), Endpoint::Zero);
  CHECK(v.options.compact_tol == 1e-6);
  CHECK(v.options.noncompact_floor == 0.01);
}

TEST_CASE("witness sequences") {
  auto c1 = witness_separation(OrderFunction::constant(1.0), 2.0, 8, cells(256));
  // ||2^((n+1)/2) (t - 2^-(n+1))||_{L2(I_n)} = 2^-(n+1)/sqrt(3).
  for (int n = 1; n <= 8; ++n) CHECK(c1[n - 1] == Approx(std::ldexp(1.0, -(n + 1)) / std::sqrt(3.0)).epsilon(1e-9));
  auto rl = witness_separation(OrderFunction::reciprocal_log(), 2.0, 20, cells(256));
  double mn = *std::min_element(rl.begin() + 10, rl.end());
  double mx = *std::max_element(rl.begin() + 10, rl.end());
  CHECK(mn / mx >= 0.5);
  auto po = witness_separation(OrderFunction::power_offset(0.5, 1.0, 1.0), 2.0, 20, cells(256));
  CHECK(po.back() < 0.1 * po.front());
  auto right = witness_separation(OrderFunction::reciprocal_log().reflected(1.0), 2.0, 12, cells(256), Endpoint::One);
  CHECK(right.back() > 0.3);
}

TEST_CASE("semigroup and scaling identities") {
  auto one = GridFunction::uniform([](double) { return 1.0; }, 0.0, 1.0, 64);
  CHECK(verify_semigroup(OrderFunction::constant(1.0), 1.0, one, cells(256)) <= 1e-10);
  // R^1/2 1 is not piecewise linear, so this case converges at second order.
  double s1 = verify_semigroup(OrderFunction::constant(0.5), 0.5, one, cells(2048));
  CHECK(s1 == Approx(3.96e-8).epsilon(0.02));
  CHECK(verify_semigroup(OrderFunction::constant(0.5), 0.5, one, cells(8192)) <= 1e-8);
  CHECK(verify_scaling(OrderFunction::constant(0.5), 1.0, 2.0, 2.0, one, cells(256)) <= 1e-14);
  CHECK(verify_scaling(OrderFunction::constant(1.0), 0.5, 2.0, 2.0, one, cells(256)) <= 1e-10);
  GridFunction ramp{{0.0, 1.0}, {0.0, 1.0}};
  CHECK(verify_scaling(OrderFunction::power_offset(0.5, 1.0, 1.0), 0.5, 2.0, 2.0, ramp, cells(256)) <= 1e-10);
}

TEST_CASE("property: discrepancies decrease as the grid doubles") {
  auto f = cos3_grid();
  for (const auto& a : {OrderFunction::power_offset(0.5, 1.0, 2.0), OrderFunction::exp_offset(0.4, 1.0, 1.0),
                        OrderFunction::constant(0.7)}) {
    double prev_s = INFINITY, prev_c = INFINITY;
    for (int n : {256, 512, 1024, 2048}) {
      double s = verify_semigroup(a, 0.5, f, cells(n));
      double c = verify_scaling(a, 0.5, 2.0, 2.0, f, cells(n));
      CHECK(s <= 1.1 * prev_s);
      CHECK(c <= 1.1 * prev_c);
      prev_s = s;
      prev_c = c;
    }
  }
}

TEST_CASE("property: verdicts agree with witness sequences") {
  oracle::Gen g(31);
  for (int trial = 0; trial < 6; ++trial) {
    double a0 = g.uniform(0.55, 1.5);
    auto a = OrderFunction::power_offset(a0, g.uniform(0.1, 2.0), g.uniform(0.5, 2.0));
    CHECK(classify_compactness(a, Endpoint::Zero).verdict == Verdict::Compact);
    auto w = witness_separation(a, 2.0, 16, cells(128));
    CHECK(w.back() < 0.1 * w.front());
  }
}

TEST_CASE("local norm bounds") {
  CHECK(local_norm_bound(OrderFunction::constant(0.5), Endpoint::Zero, 0.25, 2.0) ==
        Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(local_norm_bound(OrderFunction::constant(1.0), Endpoint::One, 0.25, 2.0) ==
        Approx(std::sqrt(0.5)).epsilon(1e-12));
  double s = sup_two_t_power(OrderFunction::reciprocal_log(), std::exp(-1.0));
  CHECK(s >= std::exp(-1.0));
}

TEST_CASE("property: divergence flags are stable under probe refinement") {
  QuadratureConfig c = cells(128);
  for (int n : {4, 16, 64}) {
    std::vector<double> s;
    for (int k = 0; k < n; ++k) s.push_back(static_cast<double>(k) / n);
    CHECK(l1_operator_norm(OrderFunction::reciprocal_log(), s, c).divergent);
    CHECK_FALSE(l1_operator_norm(OrderFunction::log_power(0.5), s, c).divergent);
  }
}
