#include "varfrac/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pieces.hpp"
#include "varfrac/errors.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

OperatorMatrix OperatorMatrix::diagonal(const std::vector<double>& d, double p, double q) {
  OperatorMatrix m;
  m.n = static_cast<int>(d.size());
  m.p = p;
  m.q = q;
  m.basis_tag = "diagonal";
  m.entries.assign(d.size() * d.size(), 0.0);
  for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
  return m;
}

namespace {

struct Node {
  double t, w;
};

// Gauss nodes on [a,b] split at the order's breakpoints.
void plain_nodes(const std::vector<double>& breaks, double a, double b, std::vector<Node>& out) {
  std::vector<double> cuts{a, b};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double c = 0.5 * (cuts[k] + cuts[k + 1]), h = 0.5 * (cuts[k + 1] - cuts[k]);
    for (int i = 0; i < 8; ++i) out.push_back({c + h * detail::kGaussX[i], h * detail::kGaussW[i]});
  }
}

// Gauss nodes on [a,b] on pieces shrinking geometrically toward a.
void graded_nodes(const std::vector<double>& breaks, double a, double b, std::vector<Node>& out) {
  double len = b - a;
  for (int k = 0; k < 48; ++k) {
    double hi = a + len * std::ldexp(1.0, -k), lo = a + len * std::ldexp(1.0, -(k + 1));
    if (!(lo > a) || !(hi > lo)) break;
    plain_nodes(breaks, lo, hi, out);
  }
}

double order_at(const OrderFunction& alpha, double t) {
  double a = alpha.eval(t);
  if (!(a > 0.0) || !std::isfinite(a)) throw NumericalError("assemble_matrix: nonpositive order");
  return a;
}

}  // namespace

OperatorMatrix assemble_matrix(const OrderFunction& alpha, int n, double r, double p, double q,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  if (n < 1) throw std::invalid_argument("assemble_matrix: n must be >= 1");
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("assemble_matrix: r must lie in (0,1]");
  if (!(p >= 1.0 && q >= 1.0)) throw std::invalid_argument("assemble_matrix: p, q must be >= 1");
  double ip = std::isinf(p) ? 0.0 : 1.0 / p, iq = std::isinf(q) ? 0.0 : 1.0 / q;
  OperatorMatrix m;
  m.n = n;
  m.r = r;
  m.p = p;
  m.q = q;
  m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
  double h = r / n;
  double scale = std::pow(n / r, ip - iq + 1.0);
  auto breaks = alpha.breakpoints();
  auto edge = [&](int j) { return j == n ? r : r * static_cast<double>(j) / n; };

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    int i = static_cast<int>(row);
    double a = edge(i), b = edge(i + 1);
    std::vector<double> acc(static_cast<std::size_t>(i) + 1, 0.0);

    // Far cells j <= i-2: the inner integral is smooth in t on I_i.
    if (i >= 2) {
      std::vector<Node> nodes;
      plain_nodes(breaks, a, b, nodes);
      for (const Node& nd : nodes) {
        double ord = order_at(alpha, nd.t);
        double g = nd.w / std::tgamma(ord);
        for (int j = 0; j < i - 1; ++j) {
          double x = nd.t - edge(j);
          double L = std::log1p(-h / x);  // ln(y/x), y = x - h
          acc[j] += g * std::exp(ord * std::log(x)) * -std::expm1(ord * L) / ord;
        }
      }
    }
    // Cells j = i-1 and j = i carry the singular behaviour at t = x_i.
    std::vector<Node> nodes;
    graded_nodes(breaks, a, b, nodes);
    for (const Node& nd : nodes) {
      double ord = order_at(alpha, nd.t);
      double g = nd.w / std::tgamma(ord);
      acc[i] += g * power_moment(ord, 0.0, nd.t - a);
      if (i >= 1) acc[i - 1] += g * power_moment(ord, nd.t - a, nd.t - edge(i - 1));
    }
    for (int j = 0; j <= i; ++j) m.at(i, j) = scale * acc[j];
  });
  return m;
}

std::vector<double> singular_values(const OperatorMatrix& m) {
  if (m.n < 1) throw std::invalid_argument("singular_values: empty matrix");
  if (m.entries.size() != static_cast<std::size_t>(m.n) * m.n)
    throw std::invalid_argument("singular_values: entry count does not match n");
  for (double v : m.entries)
    if (!std::isfinite(v)) throw std::invalid_argument("singular_values: non-finite entry");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
      m.entries.data(), m.n, m.n);
  Eigen::MatrixXd M = A;
  Eigen::VectorXd s;
  if (m.n <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    s = svd.singularValues();
  }
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

ApproximationNumbers approximation_numbers(const OrderFunction& alpha, int n_max, int n_disc,
                                           const QuadratureConfig& cfg) {
  if (n_max < 1) throw std::invalid_argument("approximation_numbers: n_max must be >= 1");
  if (n_disc < 8 * n_max)
    throw std::invalid_argument("approximation_numbers: need N_disc >= 8 n_max");
  ApproximationNumbers res;
  auto s1 = singular_values(assemble_matrix(alpha, n_disc, 1.0, 2.0, 2.0, cfg));
  auto s2 = singular_values(assemble_matrix(alpha, 2 * n_disc, 1.0, 2.0, 2.0, cfg));
  res.values.assign(s1.begin(), s1.begin() + n_max);
  for (int k = 0; k < n_max; ++k) {
    double rel = std::abs(s1[k] - s2[k]) / std::max(std::abs(s2[k]), 1e-300);
    res.max_rel_change = std::max(res.max_rel_change, rel);
  }
  res.converged = res.max_rel_change < 0.01;
  return res;
}

double carl_constant(double a) { return 128.0 * std::pow(32.0 * (2.0 + a), a); }

std::vector<double> carl_entropy_upper(const std::vector<double>& a_seq, double alpha_exp) {
  if (!(alpha_exp > 0.0)) throw std::invalid_argument("carl_entropy_upper: exponent must be positive");
  for (std::size_t k = 0; k < a_seq.size(); ++k) {
    if (!(a_seq[k] >= 0.0)) throw std::invalid_argument("carl_entropy_upper: negative entry");
    if (k > 0 && a_seq[k] > a_seq[k - 1] * (1.0 + 1e-12))
      throw std::invalid_argument("carl_entropy_upper: sequence must be non-increasing");
  }
  double C = carl_constant(alpha_exp), run = 0.0;
  std::vector<double> out(a_seq.size());
  for (std::size_t k = 0; k < a_seq.size(); ++k) {
    double n = static_cast<double>(k + 1);
    run = std::max(run, std::pow(n, alpha_exp) * a_seq[k]);
    out[k] = C * std::pow(n, -alpha_exp) * run;
  }
  return out;
}

double ball_volume_root(int n, double q) {
  if (n < 1) throw std::invalid_argument("ball_volume_root: n must be >= 1");
  if (std::isinf(q)) return 2.0;
  return 2.0 * std::tgamma(1.0 + 1.0 / q) / std::exp(std::lgamma(n / q + 1.0) / n);
}

VolumetricBound volumetric_entropy_lower(const OperatorMatrix& m) {
  if (m.n < 1) throw std::invalid_argument("volumetric_entropy_lower: empty matrix");
  double dmax = 0.0;
  for (int j = 0; j < m.n; ++j) {
    double d = m(j, j);
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("volumetric_entropy_lower: diagonal must be positive");
    dmax = std::max(dmax, d);
  }
  // Geometric mean relative to the largest entry, so equal diagonals give
  // their common value exactly.
  double logsum = 0.0;
  for (int j = 0; j < m.n; ++j) logsum += std::log(m(j, j) / dmax);
  VolumetricBound v;
  v.volume_ratio_root = ball_volume_root(m.n, m.p) / ball_volume_root(m.n, m.q);
  v.diagonal_geomean = dmax * std::exp(logsum / m.n);
  v.bound = v.volume_ratio_root * v.half * v.diagonal_geomean;
  return v;
}

int ordering_violations(const std::vector<double>& smaller, const std::vector<double>& larger,
                        double slack) {
  int c = 0;
  std::size_t n = std::min(smaller.size(), larger.size());
  for (std::size_t k = 0; k < n; ++k)
    if (smaller[k] > larger[k] * (1.0 + slack)) ++c;
  return c;
}

}  // namespace varfrac
