#include "varfrac/order_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace varfrac {

namespace {

constexpr double kInvE = 0.36787944117144233;  // e^{-1}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

double domain_slack(double hi) { return 1e-14 * std::max(1.0, std::abs(hi)); }

}  // namespace

OrderFunction OrderFunction::constant(double a) {
  require_positive(a, "constant order");
  OrderFunction f;
  f.family_ = Family::Constant;
  f.params_ = {a};
  return f;
}

OrderFunction OrderFunction::power_offset(double a0, double lambda, double gamma) {
  require_positive(a0, "alpha0");
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  OrderFunction f;
  f.family_ = Family::PowerOffset;
  f.params_ = {a0, lambda, gamma};
  return f;
}

OrderFunction OrderFunction::log_power_offset(double a0, double lambda, double gamma) {
  require_positive(a0, "alpha0");
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  OrderFunction f;
  f.family_ = Family::LogPowerOffset;
  f.params_ = {a0, lambda, gamma};
  return f;
}

OrderFunction OrderFunction::exp_offset(double a0, double lambda, double gamma) {
  require_positive(a0, "alpha0");
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  OrderFunction f;
  f.family_ = Family::ExpOffset;
  f.params_ = {a0, lambda, gamma};
  return f;
}

OrderFunction OrderFunction::reciprocal_log() {
  OrderFunction f;
  f.family_ = Family::ReciprocalLog;
  return f;
}

OrderFunction OrderFunction::log_power(double gamma) {
  require_positive(gamma, "gamma");
  OrderFunction f;
  f.family_ = Family::LogPower;
  f.params_ = {gamma};
  return f;
}

OrderFunction OrderFunction::tabulated(std::vector<double> nodes, std::vector<double> values,
                                       TableInterp interp) {
  if (nodes.size() != values.size()) throw std::invalid_argument("table: size mismatch");
  if (nodes.empty()) throw std::invalid_argument("table: no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] >= 0.0 && nodes[i] <= 1.0))
      throw std::invalid_argument("table: node outside [0,1]");
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("table: nodes must be strictly increasing");
    require_positive(values[i], "table value");
  }
  OrderFunction f;
  f.family_ = Family::Tabulated;
  f.lo_ = nodes.front();
  f.hi_ = nodes.back();
  f.nodes_ = std::move(nodes);
  f.values_ = std::move(values);
  f.interp_ = interp;
  return f;
}

double OrderFunction::base(double x) const {
  switch (family_) {
    case Family::Constant:
      return params_[0];
    case Family::PowerOffset:
      return params_[0] + params_[1] * std::pow(std::max(x, 0.0), params_[2]);
    case Family::LogPowerOffset: {
      if (x <= 0.0) return params_[0];
      double L = -std::log(x);
      if (L <= 0.0) return std::numeric_limits<double>::infinity();
      return params_[0] + params_[1] * std::pow(L, -params_[2]);
    }
    case Family::ExpOffset:
      if (x <= 0.0) return params_[0];
      return params_[0] + std::exp(-params_[1] * std::pow(x, -params_[2]));
    case Family::ReciprocalLog:
      if (x <= 0.0) return 0.0;
      if (x >= kInvE) return 1.0;
      return 1.0 / -std::log(x);
    case Family::LogPower:
      if (x <= 0.0) return 0.0;
      if (x >= kInvE) return 1.0;
      return std::pow(-std::log(x), -params_[0]);
    case Family::Tabulated: {
      if (x <= nodes_.front()) return values_.front();
      if (x >= nodes_.back()) return values_.back();
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
      std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
      if (interp_ == TableInterp::Step) return values_[j];
      double w = (x - nodes_[j]) / (nodes_[j + 1] - nodes_[j]);
      return values_[j] + w * (values_[j + 1] - values_[j]);
    }
  }
  return 0.0;
}

double OrderFunction::eval(double t) const {
  if (!std::isfinite(t)) throw std::invalid_argument("order function: non-finite argument");
  double s = domain_slack(hi_);
  if (t < lo_ - s || t > hi_ + s) {
    std::ostringstream os;
    os << "order function: t=" << t << " outside domain [" << lo_ << ", " << hi_ << "]";
    throw std::out_of_range(os.str());
  }
  t = std::clamp(t, lo_, hi_);
  return base(to_base(t)) + add_;
}

double OrderFunction::eval_from_right(double d) const {
  if (!(d >= 0.0) || d > hi_ - lo_ + domain_slack(hi_))
    throw std::out_of_range("order function: distance outside domain");
  return base((shift_ + scale_ * hi_) - scale_ * d) + add_;
}

std::vector<double> OrderFunction::breakpoints() const {
  std::vector<double> xs;
  if (family_ == Family::ReciprocalLog || family_ == Family::LogPower) xs.push_back(kInvE);
  if (family_ == Family::Tabulated && nodes_.size() > 2)
    xs.assign(nodes_.begin() + 1, nodes_.end() - 1);
  std::vector<double> ts;
  for (double x : xs) {
    double t = (x - shift_) / scale_;
    if (t > lo_ && t < hi_) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

bool OrderFunction::non_decreasing() const {
  if (family_ == Family::Constant) return true;
  bool base_up = true;
  if (family_ == Family::Tabulated)
    base_up = std::is_sorted(values_.begin(), values_.end());
  return scale_ > 0.0 ? base_up : false;
}

OrderFunction OrderFunction::rescaled(double r) const {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("rescale: r must lie in (0,1]");
  OrderFunction f = *this;
  f.scale_ = scale_ * r;
  f.lo_ = lo_ / r;
  f.hi_ = std::min(1.0, hi_ / r);
  if (f.lo_ > f.hi_) throw std::invalid_argument("rescale: empty domain");
  return f;
}

OrderFunction OrderFunction::reflected(double r) const {
  if (!(r > lo_ && r <= hi_ + domain_slack(hi_)))
    throw std::invalid_argument("reflect: r outside domain");
  OrderFunction f = *this;
  f.shift_ = shift_ + scale_ * r;
  f.scale_ = -scale_;
  f.lo_ = std::max(0.0, r - hi_);
  f.hi_ = r - lo_;
  return f;
}

OrderFunction OrderFunction::plus(double beta) const {
  if (!std::isfinite(beta)) throw std::invalid_argument("plus: non-finite shift");
  OrderFunction f = *this;
  f.add_ = add_ + beta;
  return f;
}

std::string OrderFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::Constant: os << "Constant(" << params_[0] << ")"; break;
    case Family::PowerOffset:
      os << "PowerOffset(" << params_[0] << "," << params_[1] << "," << params_[2] << ")";
      break;
    case Family::LogPowerOffset:
      os << "LogPowerOffset(" << params_[0] << "," << params_[1] << "," << params_[2] << ")";
      break;
    case Family::ExpOffset:
      os << "ExpOffset(" << params_[0] << "," << params_[1] << "," << params_[2] << ")";
      break;
    case Family::ReciprocalLog: os << "ReciprocalLog"; break;
    case Family::LogPower: os << "LogPower(" << params_[0] << ")"; break;
    case Family::Tabulated:
      os << "Tabulated(" << nodes_.size() << " nodes,"
         << (interp_ == TableInterp::Step ? "step" : "linear") << ")";
      break;
  }
  if (!is_plain()) os << "[x=" << shift_ << "+" << scale_ << "t,+" << add_ << "]";
  return os.str();
}

namespace {

// Extremes of alpha over [lo,hi]: every family is monotone between
// breakpoints, so endpoints plus interior breakpoints suffice.
template <class Pick>
double extreme(const OrderFunction& a, double lo, double hi, Pick pick) {
  if (!(lo < hi)) throw std::invalid_argument("extremum: empty interval");
  double v = pick(a.eval(lo), a.eval(hi));
  for (double b : a.breakpoints())
    if (b > lo && b < hi) v = pick(v, a.eval(b));
  return v;
}

}  // namespace

double infimum(const OrderFunction& a, double lo, double hi) {
  return extreme(a, lo, hi, [](double x, double y) { return std::min(x, y); });
}

double supremum(const OrderFunction& a, double lo, double hi) {
  return extreme(a, lo, hi, [](double x, double y) { return std::max(x, y); });
}

std::vector<double> dyadic_infima(const OrderFunction& a, int n_max) {
  if (n_max < 0) throw std::invalid_argument("dyadic_infima: n_max < 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    out.push_back(infimum(a, std::ldexp(1.0, -(n + 1)), std::ldexp(1.0, -n)));
  return out;
}

double phi(const OrderFunction& a, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("phi: t must lie in (0,1)");
  double L = -std::log(t);
  // 1/|ln t| times |ln t|, kept as a quotient so the identity is exact.
  if (a.family() == Family::ReciprocalLog && a.is_plain() && t < kInvE) return L / L;
  return a.eval(t) * L;
}

RegularityResult check_regularity(const OrderFunction& a, double c1, double c2,
                                  const std::vector<double>& probes) {
  if (probes.empty()) throw std::invalid_argument("check_regularity: empty probe grid");
  if (!(c1 > 0.0 && c1 <= 1.0 && c2 >= 1.0))
    throw std::invalid_argument("check_regularity: need 0 < c1 <= 1 <= c2");
  std::vector<double> p = probes;
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.front() <= 0.0 || p.back() > 1.0)
    throw std::invalid_argument("check_regularity: probes must lie in (0,1]");
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = a.eval(p[i]);

  RegularityResult res;
  double worst = 1.0;  // excess factor, > 1 means violation
  for (std::size_t i = 0; i < p.size(); ++i) {
    double lim = std::min(2.0 * p[i], 1.0);
    for (std::size_t j = i; j < p.size() && p[j] <= lim; ++j) {
      double ratio = v[j] / v[i];
      double excess = std::max(ratio / c2, c1 / ratio);
      if (excess > worst) {
        worst = excess;
        res.holds = false;
        res.worst_s = p[i];
        res.worst_t = p[j];
        res.worst_ratio = ratio;
      }
    }
  }
  return res;
}

OrderFunction rescale(const OrderFunction& a, double r) { return a.rescaled(r); }

}  // namespace varfrac
