#include "varfrac/entropy_bounds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varfrac/diagnostics.hpp"

namespace varfrac {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void check_pq(double p, double q) {
  if (!(p >= 1.0 && q >= 1.0)) throw std::invalid_argument("entropy bounds: p, q must be >= 1");
}

void check_hypotheses(const OrderFunction& alpha, double p, double q) {
  if (!alpha.non_decreasing()) throw std::invalid_argument("entropy bounds: alpha must be non-decreasing");
  double a0 = alpha.eval(0.0);
  if (!(a0 > std::max(0.0, inv(p) - inv(q))))
    throw std::invalid_argument("entropy bounds: need alpha(0) > (1/p - 1/q)_+");
}

void check_params(ExampleFamily fam, const ExampleParams& prm) {
  if (fam != ExampleFamily::Example4) {
    if (!(prm.alpha0 > 0.0 && prm.lambda > 0.0 && prm.gamma > 0.0))
      throw std::invalid_argument("example parameters must be positive");
  } else if (!(prm.gamma > 0.0 && prm.gamma < 1.0)) {
    throw std::invalid_argument("Example 4 needs 0 < gamma < 1");
  }
}

}  // namespace

double PartitionPlan::total() const {
  double s = 0.0;
  for (double b : budgets) s += b;
  return s;
}

void PartitionPlan::validate() const {
  if (budgets.empty()) throw std::invalid_argument("partition: need at least one block");
  if (cut_points.size() != budgets.size() + 1)
    throw std::invalid_argument("partition: need m+1 cut points for m budgets");
  if (cut_points.front() != 0.0 || cut_points.back() != 1.0)
    throw std::invalid_argument("partition: cut points must run from 0 to 1");
  for (std::size_t j = 1; j < cut_points.size(); ++j)
    if (!(cut_points[j] > cut_points[j - 1]))
      throw std::invalid_argument("partition: cut points must increase strictly");
  for (double b : budgets)
    if (!(b >= 1.0) || b != std::floor(b))
      throw std::invalid_argument("partition: budgets must be integers >= 1");
}

double two_block_upper(const OrderFunction& alpha, double r, double n1, double n2, double p, double q) {
  check_pq(p, q);
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("two_block_upper: r must lie in (0,1)");
  if (!(n1 >= 1.0 && n2 >= 1.0)) throw std::invalid_argument("two_block_upper: budgets must be >= 1");
  check_hypotheses(alpha, p, q);
  double a0 = alpha.eval(0.0), ar = alpha.eval(r);
  return std::exp((a0 + inv(q) - inv(p)) * std::log(r) - a0 * std::log(n1)) +
         std::exp(-ar * std::log(n2));
}

IteratedBound iterated_upper(const OrderFunction& alpha, const PartitionPlan& plan, double p, double q) {
  check_pq(p, q);
  plan.validate();
  check_hypotheses(alpha, p, q);
  IteratedBound b;
  double e = inv(q) - inv(p);
  for (int j = 1; j <= plan.m(); ++j) {
    double a = alpha.eval(plan.cut_points[j - 1]);
    double term = std::exp((a + e) * std::log(plan.cut_points[j]) - a * std::log(plan.budgets[j - 1]));
    b.terms.push_back(term);
    b.value += term;
  }
  b.index = plan.total() - plan.m() + 1;
  return b;
}

PartitionPlan example1_partition(double n, double alpha0, double lambda, double gamma) {
  if (!(n >= 3.0)) throw std::invalid_argument("example1_partition: n must be >= 3");
  if (!(alpha0 > 0.0 && lambda > 0.0 && gamma > 0.0))
    throw std::invalid_argument("example1_partition: parameters must be positive");
  double ln = std::log(n);
  int m = 1 + static_cast<int>(std::floor(ln));
  PartitionPlan plan;
  plan.cut_points.push_back(0.0);
  for (int j = 1; j <= m - 1; ++j) {
    double r = std::pow(j / ln, 1.0 / gamma);
    if (r >= 1.0) break;  // ln n rounded onto an integer
    plan.cut_points.push_back(r);
  }
  plan.cut_points.push_back(1.0);
  int blocks = static_cast<int>(plan.cut_points.size()) - 1;
  for (int j = 1; j <= blocks; ++j) {
    double b = std::floor(n / (static_cast<double>(j) * j));
    if (b < 1.0) {
      b = 1.0;
      plan.clamped = true;
    }
    plan.budgets.push_back(b);
  }
  return plan;
}

double formula_lower(const OrderFunction& alpha, double r, double n, double p, double q) {
  check_pq(p, q);
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("formula_lower: r must lie in (0,1]");
  if (!(n >= 1.0)) throw std::invalid_argument("formula_lower: n must be >= 1");
  double a1 = supremum(alpha, 0.0, r);
  return std::exp(-a1 * std::log(n) + (a1 + inv(q) - inv(p)) * std::log(r));
}

double single_cut_upper(const OrderFunction& alpha, double r, double n) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("single_cut_upper: r must lie in (0,1]");
  if (!(n >= 1.0)) throw std::invalid_argument("single_cut_upper: n must be >= 1");
  return sup_two_t_power(alpha, r) + std::exp(-alpha.eval(r) * std::log(n));
}

OrderFunction example_profile(ExampleFamily fam, const ExampleParams& prm) {
  check_params(fam, prm);
  switch (fam) {
    case ExampleFamily::Example1: return OrderFunction::power_offset(prm.alpha0, prm.lambda, prm.gamma);
    case ExampleFamily::Example2: return OrderFunction::log_power_offset(prm.alpha0, prm.lambda, prm.gamma);
    case ExampleFamily::Example3: return OrderFunction::exp_offset(prm.alpha0, prm.lambda, prm.gamma);
    case ExampleFamily::Example4: return OrderFunction::log_power(prm.gamma);
  }
  throw std::invalid_argument("unknown example family");
}

RatePrediction predict_rate(ExampleFamily fam, const ExampleParams& prm, double n, double p, double q) {
  check_params(fam, prm);
  check_pq(p, q);
  if (!(n >= 16.0)) throw std::invalid_argument("predict_rate: n must be >= 16");
  double ln = std::log(n), a0 = prm.alpha0, g = prm.gamma;
  RatePrediction out;
  switch (fam) {
    case ExampleFamily::Example1: {
      double e = (a0 + inv(q) - inv(p)) / g;
      out.upper = out.lower = std::exp(-a0 * ln - e * std::log(ln));
      break;
    }
    case ExampleFamily::Example2: {
      double k = std::pow(a0, g / (1.0 + g));
      double lam = std::pow(prm.lambda * ln, 1.0 / (1.0 + g));
      out.upper_exp_const = k;
      out.lower_exp_const = k * (g + 1.0) / std::pow(g, g / (1.0 + g));
      out.upper = std::exp(-a0 * ln - out.upper_exp_const * lam);
      out.lower = std::exp(-a0 * ln - out.lower_exp_const * lam);
      break;
    }
    case ExampleFamily::Example3:
      out.upper = out.lower = std::exp(-a0 * ln - (a0 / g) * std::log(std::log(ln)));
      break;
    case ExampleFamily::Example4:
      out.upper = out.lower = std::exp(-std::pow(ln, 1.0 - g));
      break;
  }
  return out;
}

double choose_r(ExampleFamily fam, const ExampleParams& prm, double n, BoundSide side) {
  check_params(fam, prm);
  if (!(n > 1.0)) throw std::invalid_argument("choose_r: n must exceed 1");
  double ln = std::log(n), a0 = prm.alpha0, lam = prm.lambda, g = prm.gamma;
  double r = 0.0;
  switch (fam) {
    case ExampleFamily::Example1:
      if (side == BoundSide::Upper)
        throw std::invalid_argument("choose_r: the Example 1 upper bound uses example1_partition");
      r = std::pow(ln, -1.0 / g);
      break;
    case ExampleFamily::Example2: {
      double c = side == BoundSide::Upper ? lam * ln / a0 : g * lam * ln / a0;
      r = std::exp(-std::pow(c, 1.0 / (1.0 + g)));
      break;
    }
    case ExampleFamily::Example3:
      if (side == BoundSide::Lower) {
        double lln = std::log(ln);
        if (!(lln > 0.0)) throw std::invalid_argument("choose_r: n too small");
        r = std::pow(lam, 1.0 / g) * std::pow(lln, -1.0 / g);
      } else {
        double llln = std::log(std::log(ln));
        if (!(llln > 0.0)) throw std::invalid_argument("choose_r: n too small");
        double inner = std::log(g * ln / (a0 * llln));
        if (!(inner > 0.0)) throw std::invalid_argument("choose_r: n too small");
        r = std::pow(lam, 1.0 / g) * std::pow(inner, -1.0 / g);
      }
      break;
    case ExampleFamily::Example4:
      r = 1.0 / n;
      break;
  }
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("choose_r: radius outside (0,1); n too small");
  return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  double n = static_cast<double>(x.size()), mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: constant regressor");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  return f;
}

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& values, RateModel model) {
  if (n.size() != values.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (n.size() < 6) throw std::invalid_argument("fit_rate: need at least 6 points");
  std::size_t rows = n.size();
  int cols = model == RateModel::Power ? 2 : 3;
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(values[i] > 0.0) || !(n[i] > 1.0)) throw std::invalid_argument("fit_rate: data must be positive, n > 1");
    double ln = std::log(n[i]);
    X(i, 0) = 1.0;
    X(i, 1) = ln;
    if (model == RateModel::PowerLog) {
      X(i, 2) = std::log(ln);
    } else if (model == RateModel::PowerLogLog) {
      double lln = std::log(ln);
      if (!(lln > 0.0)) throw std::invalid_argument("fit_rate: power_loglog needs n > e");
      X(i, 2) = std::log(lln);
    }
    y(i) = std::log(values[i]);
  }
  // Conditioning of the column-standardised design.
  Eigen::MatrixXd Z = X;
  for (int c = 1; c < cols; ++c) {
    double mean = Z.col(c).mean();
    Z.col(c).array() -= mean;
    double nrm = Z.col(c).norm();
    if (nrm > 0.0) Z.col(c) /= nrm;
  }
  Z.col(0) /= std::sqrt(static_cast<double>(rows));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z);
  auto sv = svd.singularValues();
  double smin = sv(sv.size() - 1), smax = sv(0);
  if (!(smin > 1e-12 * smax)) throw std::invalid_argument("fit_rate: degenerate (collinear) design");

  Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  RateFit f;
  f.model = model;
  f.ill_conditioned = smax / smin > 1e3;
  f.intercept = beta(0);
  f.power_exponent = beta(1);
  if (cols == 3) f.log_exponent = beta(2);
  f.max_residual = (X * beta - y).cwiseAbs().maxCoeff();
  return f;
}

EntropyEstimate estimate_example(ExampleFamily fam, const ExampleParams& prm,
                                 const std::vector<double>& n_grid, double p, double q) {
  check_pq(p, q);
  OrderFunction alpha = example_profile(fam, prm);
  EntropyEstimate est;
  for (double n : n_grid) {
    double idx, up, lo;
    switch (fam) {
      case ExampleFamily::Example1: {
        auto plan = example1_partition(n, prm.alpha0, prm.lambda, prm.gamma);
        auto it = iterated_upper(alpha, plan, p, q);
        idx = it.index;
        up = it.value;
        lo = formula_lower(alpha, choose_r(fam, prm, idx, BoundSide::Lower), idx, p, q);
        break;
      }
      case ExampleFamily::Example2:
      case ExampleFamily::Example3: {
        double r = choose_r(fam, prm, n, BoundSide::Upper);
        idx = 2.0 * n - 1.0;
        up = two_block_upper(alpha, r, n, n, p, q);
        lo = formula_lower(alpha, choose_r(fam, prm, idx, BoundSide::Lower), idx, p, q);
        break;
      }
      case ExampleFamily::Example4: {
        double r = choose_r(fam, prm, n, BoundSide::Upper);
        idx = n;
        up = single_cut_upper(alpha, r, n);
        lo = formula_lower(alpha, r, n, p, q);
        break;
      }
      default:
        throw std::invalid_argument("unknown example family");
    }
    est.n_values.push_back(idx);
    est.upper.push_back(up);
    est.lower.push_back(lo);
    est.predicted.push_back(predict_rate(fam, prm, idx, p, q).upper);
  }
  return est;
}

std::string to_string(ExampleFamily f) {
  switch (f) {
    case ExampleFamily::Example1: return "Example1";
    case ExampleFamily::Example2: return "Example2";
    case ExampleFamily::Example3: return "Example3";
    default: return "Example4";
  }
}

std::string to_string(RateModel m) {
  switch (m) {
    case RateModel::Power: return "power";
    case RateModel::PowerLog: return "power_log";
    default: return "power_loglog";
  }
}

RateModel parse_rate_model(const std::string& s) {
  if (s == "power") return RateModel::Power;
  if (s == "power_log") return RateModel::PowerLog;
  if (s == "power_loglog") return RateModel::PowerLogLog;
  throw std::invalid_argument("unknown rate model '" + s + "'");
}

}  // namespace varfrac
