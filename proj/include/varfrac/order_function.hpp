#pragma once

#include <string>
#include <vector>

namespace varfrac {

enum class Family {
  Constant,
  PowerOffset,     // a0 + lambda * t^gamma
  LogPowerOffset,  // a0 + lambda * |ln t|^(-gamma)
  ExpOffset,       // a0 + exp(-lambda * t^(-gamma))
  ReciprocalLog,   // 1/|ln t| on (0, 1/e], 1 above
  LogPower,        // |ln t|^(-gamma) on (0, 1/e], 1 above
  Tabulated
};

enum class TableInterp { Step, Linear };

// Exponent profile alpha(t). Immutable; every derived profile (rescaled,
// reflected, shifted by a constant) is an affine reparametrisation of one
// base family:  alpha(t) = base(shift + scale * t) + add.
class OrderFunction {
 public:
  static OrderFunction constant(double a);
  static OrderFunction power_offset(double a0, double lambda, double gamma);
  static OrderFunction log_power_offset(double a0, double lambda, double gamma);
  static OrderFunction exp_offset(double a0, double lambda, double gamma);
  static OrderFunction reciprocal_log();
  static OrderFunction log_power(double gamma);
  static OrderFunction tabulated(std::vector<double> nodes, std::vector<double> values,
                                 TableInterp interp = TableInterp::Linear);

  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  // alpha(hi - d), evaluated without forming hi - d when the profile is a
  // reflection (keeps resolution for d far below machine epsilon).
  double eval_from_right(double d) const;

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Points of the domain where alpha may have a kink or jump.
  std::vector<double> breakpoints() const;
  // Structural monotonicity: true for every parametric family that has not
  // been reflected, and for tables with non-decreasing values.
  bool non_decreasing() const;
  bool is_plain() const { return shift_ == 0.0 && scale_ == 1.0 && add_ == 0.0; }

  OrderFunction rescaled(double r) const;     // t -> alpha(r t), domain [0,1]
  OrderFunction reflected(double r) const;    // t -> alpha(r - t), domain [0,r]
  OrderFunction plus(double beta) const;      // t -> alpha(t) + beta

  std::string describe() const;

 private:
  OrderFunction() = default;
  double base(double x) const;
  double to_base(double t) const { return shift_ + scale_ * t; }

  Family family_ = Family::Constant;
  std::vector<double> params_;
  std::vector<double> nodes_, values_;
  TableInterp interp_ = TableInterp::Linear;
  double shift_ = 0.0, scale_ = 1.0, add_ = 0.0;
  double lo_ = 0.0, hi_ = 1.0;
};

double infimum(const OrderFunction& a, double lo, double hi);
double supremum(const OrderFunction& a, double lo, double hi);

// a_n = inf over I_n = [2^-(n+1), 2^-n], n = 0..n_max.
std::vector<double> dyadic_infima(const OrderFunction& a, int n_max);

// alpha(t) * |ln t|.
double phi(const OrderFunction& a, double t);

struct RegularityResult {
  bool holds = true;
  double worst_s = 0.0;
  double worst_t = 0.0;
  double worst_ratio = 1.0;  // alpha(t)/alpha(s) at the worst pair
};

// Checks c1 alpha(s) <= alpha(t) <= c2 alpha(s) for probe pairs s <= t <= min(2s, 1).
RegularityResult check_regularity(const OrderFunction& a, double c1, double c2,
                                  const std::vector<double>& probes);

OrderFunction rescale(const OrderFunction& a, double r);

}  // namespace varfrac
