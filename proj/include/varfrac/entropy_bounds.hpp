#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varfrac/order_function.hpp"

namespace varfrac {

// All bounds below are shapes: the unknown multiplicative constants of the
// underlying estimates are set to 1.

struct PartitionPlan {
  std::vector<double> cut_points;  // 0 = r_0 < r_1 < ... < r_m = 1
  std::vector<double> budgets;     // integer-valued n_1..n_m >= 1
  bool clamped = false;            // some budget was raised to 1

  int m() const { return static_cast<int>(budgets.size()); }
  double total() const;
  void validate() const;
};

struct IteratedBound {
  double value = 0.0;
  double index = 0.0;  // N - m + 1
  std::vector<double> terms;
};

// r^(alpha(0)+1/q-1/p) n1^-alpha(0) + n2^-alpha(r), a bound on e_{n1+n2-1}.
double two_block_upper(const OrderFunction& alpha, double r, double n1, double n2, double p, double q);

// sum_j r_j^(alpha(r_{j-1})+1/q-1/p) n_j^-alpha(r_{j-1}), a bound on e_{N-m+1}.
IteratedBound iterated_upper(const OrderFunction& alpha, const PartitionPlan& plan, double p, double q);

// m = 1 + [ln n], r_j = (j / ln n)^(1/gamma), r_m = 1, n_j = max(1, [n / j^2]).
PartitionPlan example1_partition(double n, double alpha0, double lambda, double gamma);

// n^-a1 r^(a1+1/q-1/p), a1 = sup of alpha over [0, r].
double formula_lower(const OrderFunction& alpha, double r, double n, double p, double q);

// sup_{0<t<=r} (2t)^alpha(t) + n^-alpha(r), a bound on e_n.
double single_cut_upper(const OrderFunction& alpha, double r, double n);

enum class ExampleFamily { Example1, Example2, Example3, Example4 };
enum class BoundSide { Upper, Lower };

struct ExampleParams {
  double alpha0 = 0.5;
  double lambda = 1.0;
  double gamma = 1.0;
};

// The order profile each example is built on.
OrderFunction example_profile(ExampleFamily fam, const ExampleParams& prm);

struct RatePrediction {
  double upper = 0.0;
  double lower = 0.0;
  double upper_exp_const = 0.0;  // Example 2 only: constants in front of (lambda ln n)^(1/(1+gamma))
  double lower_exp_const = 0.0;
};

RatePrediction predict_rate(ExampleFamily fam, const ExampleParams& prm, double n, double p, double q);

double choose_r(ExampleFamily fam, const ExampleParams& prm, double n, BoundSide side);

enum class RateModel { Power, PowerLog, PowerLogLog };

struct RateFit {
  RateModel model = RateModel::Power;
  double intercept = 0.0;
  double power_exponent = 0.0;
  double log_exponent = 0.0;  // coefficient of ln ln n or ln ln ln n
  double max_residual = 0.0;
  bool ill_conditioned = false;
};

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& values, RateModel model);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct EntropyEstimate {
  std::vector<double> n_values;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> predicted;
  std::optional<RateFit> fit;
};

// Bracket for one of the examples on an index grid, each bound evaluated with
// the radius (or partition) prescribed for it and aligned at the index the
// upper bound refers to.
EntropyEstimate estimate_example(ExampleFamily fam, const ExampleParams& prm,
                                 const std::vector<double>& n_grid, double p, double q);

std::string to_string(ExampleFamily f);
std::string to_string(RateModel m);
RateModel parse_rate_model(const std::string& s);

}  // namespace varfrac
