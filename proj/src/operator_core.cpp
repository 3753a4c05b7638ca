#include "varfrac/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pieces.hpp"
#include "varfrac/errors.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

using detail::Lin;

// ---------------------------------------------------------------- GridFunction

void GridFunction::validate() const {
  if (nodes.empty()) throw std::invalid_argument("grid function: no nodes");
  if (nodes.size() != values.size()) throw std::invalid_argument("grid function: size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("grid function: non-finite entry");
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("grid function: nodes must be strictly increasing");
  }
}

double GridFunction::operator()(double x) const {
  if (nodes.size() == 1 || x <= nodes.front()) return values.front();
  if (x >= nodes.back()) return values.back();
  std::size_t j = detail::cell_of(*this, x);
  if (interp == Interpretation::PiecewiseConstantLeft) return values[j];
  double w = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return values[j] + w * (values[j + 1] - values[j]);
}

GridFunction GridFunction::sample(const std::function<double(double)>& f,
                                  const std::vector<double>& nodes, Interpretation interp) {
  GridFunction g;
  g.nodes = nodes;
  g.values.reserve(nodes.size());
  for (double x : nodes) g.values.push_back(f(x));
  g.interp = interp;
  g.validate();
  return g;
}

GridFunction GridFunction::uniform(const std::function<double(double)>& f, double a, double b,
                                   std::size_t cells, Interpretation interp) {
  return sample(f, linspace(a, b, cells), interp);
}

std::vector<double> linspace(double a, double b, std::size_t cells) {
  if (cells < 1) throw std::invalid_argument("linspace: need at least one cell");
  std::vector<double> x(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  x.back() = b;
  return x;
}

void QuadratureConfig::validate() const {
  if (n_cells < 2) throw std::invalid_argument("quadrature: n_cells must be >= 2");
  if (!(grading >= 1.0)) throw std::invalid_argument("quadrature: grading must be >= 1");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature: abs_tol must be > 0");
}

// ---------------------------------------------------------------- gamma

double gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma: argument must be positive");
  return std::tgamma(x);
}

namespace {

struct GammaMin {
  double x, value;
};

const GammaMin& gamma_min_data() {
  static const GammaMin m = [] {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1.0, b = 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = std::lgamma(c), fd = std::lgamma(d);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - g * (b - a); fc = std::lgamma(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + g * (b - a); fd = std::lgamma(d);
      }
    }
    double x = 0.5 * (a + b);
    return GammaMin{x, std::tgamma(x)};
  }();
  return m;
}

}  // namespace

double gamma_min() { return gamma_min_data().value; }
double gamma_argmin() { return gamma_min_data().x; }

// ---------------------------------------------------------------- kernel moments

double power_moment(double a, double y, double x) {
  if (y <= 0.0) return std::pow(x, a) / a;
  double L = std::log(y / x);
  return std::pow(x, a) * -std::expm1(a * L) / a;
}

HatWeights hat_weights(double a, double y, double x) {
  double xa = std::pow(x, a);
  if (y <= 0.0) return {xa / (a * (a + 1.0)), xa / (a + 1.0)};
  double h = x - y;
  double L = std::log(y / x);
  double m0 = xa * -std::expm1(a * L) / a;
  double diff;  // g(a) - g(a+1), g(c) = -expm1(c L)/c
  if (std::abs(L) < 0.25) {
    // sum_{k>=2} L^k ((a+1)^{k-1} - a^{k-1}) / k!
    double lk = L, pa1 = 1.0, pa = 1.0, s = 0.0;
    for (int k = 2; k < 80; ++k) {
      lk *= L / k;
      pa1 *= a + 1.0;
      pa *= a;
      double term = lk * (pa1 - pa);
      s += term;
      if (std::abs(term) <= 1e-18 * std::abs(s)) break;
    }
    diff = s;
  } else {
    diff = -std::expm1(a * L) / a + std::expm1((a + 1.0) * L) / (a + 1.0);
  }
  double w_near = xa * x * diff / h;
  return {w_near, m0 - w_near};
}

double kernel_moment(double t, double a, double u, double v, int k) {
  if (!(a > 0.0)) throw std::invalid_argument("kernel_moment: exponent must be positive");
  if (!(u >= 0.0 && u < v && v <= t))
    throw std::invalid_argument("kernel_moment: need 0 <= u < v <= t");
  double x = t - u, y = t - v;
  if (k == 0) return power_moment(a, y, x);
  if (k == 1) {
    HatWeights w = hat_weights(a, y, x);
    return w.w_near * v + w.w_far * u;
  }
  throw std::invalid_argument("kernel_moment: degree must be 0 or 1");
}

// ---------------------------------------------------------------- operators

namespace {

double checked_order(const OrderFunction& alpha, double t) {
  double a = alpha.eval(t);
  if (!(a > 0.0) || !std::isfinite(a)) {
    std::ostringstream os;
    os << "order evaluates to " << a << " at t=" << t;
    throw NumericalError(os.str());
  }
  return a;
}

void check_targets(const std::vector<double>& targets, double lo, double hi) {
  if (targets.empty()) throw std::invalid_argument("operator: empty target list");
  for (double t : targets)
    if (!(t >= lo && t <= hi)) {
      std::ostringstream os;
      os << "operator: target " << t << " outside [" << lo << ", " << hi << "]";
      throw std::invalid_argument(os.str());
    }
}

GridFunction result_on(const std::vector<double>& targets, std::vector<double> values) {
  GridFunction g;
  g.nodes = targets;
  g.values = std::move(values);
  g.interp = Interpretation::PiecewiseLinear;
  return g;
}

// int_{front}^{t} (t-s)^{a-1} f(s) ds for the interpolant of f.
double left_integral(const GridFunction& f, double t, double a) {
  const auto& x = f.nodes;
  const auto& v = f.values;
  double s = 0.0;
  bool step = f.interp == Interpretation::PiecewiseConstantLeft;
  for (std::size_t j = 0; j + 1 < x.size() && x[j] < t; ++j) {
    double far = t - x[j];
    double right = std::min(x[j + 1], t);
    double near = t - right;
    if (step) {
      s += power_moment(a, near, far) * v[j];
    } else {
      double v_near = x[j + 1] <= t ? v[j + 1] : f(t);
      HatWeights w = hat_weights(a, near, far);
      s += w.w_near * v_near + w.w_far * v[j];
    }
  }
  return s;
}

// int_{t}^{back} (s-t)^{a-1} f(s) ds for the interpolant of f.
double right_integral(const GridFunction& f, double t, double a) {
  const auto& x = f.nodes;
  const auto& v = f.values;
  double s = 0.0;
  bool step = f.interp == Interpretation::PiecewiseConstantLeft;
  std::size_t j0 = detail::cell_of(f, t);
  for (std::size_t j = j0; j + 1 < x.size(); ++j) {
    if (x[j + 1] <= t) continue;
    double left = std::max(x[j], t);
    double near = left - t, far = x[j + 1] - t;
    if (step) {
      s += power_moment(a, near, far) * v[j];
    } else {
      double v_near = x[j] >= t ? v[j] : f(t);
      HatWeights w = hat_weights(a, near, far);
      s += w.w_near * v_near + w.w_far * v[j + 1];
    }
  }
  return s;
}

}  // namespace

GridFunction rl_apply(const OrderFunction& alpha, const GridFunction& f,
                      const std::vector<double>& targets, const QuadratureConfig& cfg) {
  cfg.validate();
  f.validate();
  check_targets(targets, f.front(), f.back());
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    double t = targets[i];
    if (t <= f.front()) {
      out[i] = 0.0;
      return;
    }
    double a = checked_order(alpha, t);
    out[i] = left_integral(f, t, a) / gamma(a);
  });
  return result_on(targets, std::move(out));
}

GridFunction q_apply(const OrderFunction& alpha, const GridFunction& f,
                     const std::vector<double>& targets, const QuadratureConfig& cfg) {
  cfg.validate();
  f.validate();
  check_targets(targets, f.front(), f.back());
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    double t = targets[i];
    if (t >= f.back()) {
      out[i] = 0.0;
      return;
    }
    double a = checked_order(alpha, t);
    out[i] = right_integral(f, t, a) / gamma(a);
  });
  return result_on(targets, std::move(out));
}

namespace {

// Product integration of d^(a-1) f(t -/+ d) over d in [0, len] on the graded
// distance mesh d_j = len (1 - j/n)^g.
double graded_integral(const std::function<double(double)>& f, double t, double len, double a,
                       int sign, const QuadratureConfig& cfg) {
  int n = cfg.n_cells;
  double prev_d = len;
  double prev_f = f(t + sign * len);
  double s = 0.0;
  for (int j = 1; j <= n; ++j) {
    double d = len * std::pow(1.0 - static_cast<double>(j) / n, cfg.grading);
    double fv = f(t + sign * d);
    HatWeights w = hat_weights(a, d, prev_d);
    s += w.w_near * fv + w.w_far * prev_f;
    prev_d = d;
    prev_f = fv;
  }
  return s;
}

}  // namespace

GridFunction rl_apply(const OrderFunction& alpha, const std::function<double(double)>& f,
                      double a, const std::vector<double>& targets, const QuadratureConfig& cfg) {
  cfg.validate();
  if (targets.empty()) throw std::invalid_argument("operator: empty target list");
  for (double t : targets)
    if (!(t >= a)) throw std::invalid_argument("operator: target left of the domain");
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    double t = targets[i];
    if (t <= a) {
      out[i] = 0.0;
      return;
    }
    double ord = checked_order(alpha, t);
    out[i] = graded_integral(f, t, t - a, ord, -1, cfg) / gamma(ord);
  });
  return result_on(targets, std::move(out));
}

GridFunction q_apply(const OrderFunction& alpha, const std::function<double(double)>& f,
                     double b, const std::vector<double>& targets, const QuadratureConfig& cfg) {
  cfg.validate();
  if (targets.empty()) throw std::invalid_argument("operator: empty target list");
  for (double t : targets)
    if (!(t <= b)) throw std::invalid_argument("operator: target right of the domain");
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    double t = targets[i];
    if (t >= b) {
      out[i] = 0.0;
      return;
    }
    double ord = checked_order(alpha, t);
    out[i] = graded_integral(f, t, b - t, ord, +1, cfg) / gamma(ord);
  });
  return result_on(targets, std::move(out));
}

// ---------------------------------------------------------------- norms

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  f.validate();
  if (f.size() == 1) return std::isinf(p) ? std::abs(f.values[0]) : 0.0;
  return detail::lp_of_pieces(detail::difference_pieces(f, 0.0, nullptr, 0.0, f.front(), f.back()),
                              p);
}

double lp_distance(const GridFunction& f, const GridFunction& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_distance: p must be >= 1");
  f.validate();
  g.validate();
  double lo = std::max(f.front(), g.front()), hi = std::min(f.back(), g.back());
  if (!(hi > lo)) throw std::invalid_argument("lp_distance: domains do not overlap");
  return detail::lp_of_pieces(detail::difference_pieces(f, 0.0, &g, 0.0, lo, hi), p);
}

// ---------------------------------------------------------------- maximal function

namespace {

// |f| as linear pieces split at zero crossings, with prefix integrals.
struct AbsProfile {
  std::vector<Lin> pieces;
  std::vector<double> prefix;  // integral of |f| up to pieces[k].x0

  explicit AbsProfile(const GridFunction& f) {
    auto raw = detail::difference_pieces(f, 0.0, nullptr, 0.0, f.front(), f.back());
    for (const auto& L : raw) {
      if (L.v0 * L.v1 < 0.0) {
        double xm = L.x0 + (L.x1 - L.x0) * (L.v0 / (L.v0 - L.v1));
        if (xm > L.x0 && xm < L.x1) {
          pieces.push_back({L.x0, xm, std::abs(L.v0), 0.0});
          pieces.push_back({xm, L.x1, 0.0, std::abs(L.v1)});
          continue;
        }
      }
      pieces.push_back({L.x0, L.x1, std::abs(L.v0), std::abs(L.v1)});
    }
    prefix.assign(pieces.size() + 1, 0.0);
    for (std::size_t k = 0; k < pieces.size(); ++k)
      prefix[k + 1] = prefix[k] + 0.5 * (pieces[k].x1 - pieces[k].x0) * (pieces[k].v0 + pieces[k].v1);
  }

  double lo() const { return pieces.front().x0; }
  double hi() const { return pieces.back().x1; }

  // Index of the piece with x0 <= x < x1, or npos outside.
  std::size_t find(double x) const {
    if (x < lo() || x >= hi()) return npos;
    std::size_t a = 0, b = pieces.size();
    while (b - a > 1) {
      std::size_t m = (a + b) / 2;
      if (pieces[m].x0 <= x) a = m; else b = m;
    }
    return a;
  }

  double value_in(std::size_t k, double x) const {
    const Lin& L = pieces[k];
    return L.v0 + (L.v1 - L.v0) * (x - L.x0) / (L.x1 - L.x0);
  }

  double slope_in(std::size_t k) const {
    const Lin& L = pieces[k];
    return (L.v1 - L.v0) / (L.x1 - L.x0);
  }

  double cumulative(double x) const {
    if (x <= lo()) return 0.0;
    if (x >= hi()) return prefix.back();
    std::size_t k = find(x);
    double vx = value_in(k, x);
    return prefix[k] + 0.5 * (x - pieces[k].x0) * (pieces[k].v0 + vx);
  }

  double right_limit(double t) const {
    std::size_t k = find(t);
    return k == npos ? 0.0 : value_in(k, t);
  }

  double left_limit(double t) const {
    if (t <= lo() || t > hi()) return 0.0;
    if (t == hi()) return pieces.back().v1;
    std::size_t k = find(t);
    if (pieces[k].x0 == t) return k == 0 ? 0.0 : pieces[k - 1].v1;
    return value_in(k, t);
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

double maximal_at(const AbsProfile& P, double t) {
  auto avg = [&](double r) { return (P.cumulative(t + r) - P.cumulative(t - r)) / (2.0 * r); };
  double best = 0.5 * (P.left_limit(t) + P.right_limit(t));

  std::vector<double> radii;
  radii.reserve(P.pieces.size() + 2);
  for (const auto& L : P.pieces) {
    if (L.x0 != t) radii.push_back(std::abs(t - L.x0));
  }
  if (P.hi() != t) radii.push_back(std::abs(t - P.hi()));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  double prev = 0.0;
  for (double r : radii) {
    best = std::max(best, avg(r));
    // Inside (prev, r) the window ends stay in fixed pieces, so the window
    // integral is a quadratic c0 + c1 r + c2 r^2; the average is stationary
    // at r* = sqrt(c0 / c2).
    double rm = 0.5 * (prev + r);
    std::size_t kr = P.find(t + rm), kl = P.find(t - rm);
    double a0 = 0.0, a1 = 0.0;
    if (kr != AbsProfile::npos) {
      a0 += P.value_in(kr, t);
      a1 += P.slope_in(kr);
    }
    if (kl != AbsProfile::npos) {
      a0 += P.value_in(kl, t);
      a1 -= P.slope_in(kl);
    }
    double c2 = 0.5 * a1;
    if (c2 != 0.0) {
      double c0 = (P.cumulative(t + rm) - P.cumulative(t - rm)) - a0 * rm - c2 * rm * rm;
      double q = c0 / c2;
      if (q > 0.0) {
        double rs = std::sqrt(q);
        if (rs > prev && rs < r) best = std::max(best, avg(rs));
      }
    }
    prev = r;
  }
  return best;
}

}  // namespace

GridFunction maximal_function(const GridFunction& f, const std::vector<double>& targets) {
  f.validate();
  if (targets.empty()) throw std::invalid_argument("maximal_function: empty target list");
  if (f.size() < 2) throw std::invalid_argument("maximal_function: need at least one cell");
  AbsProfile P(f);
  std::vector<double> out(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) { out[i] = maximal_at(P, targets[i]); });
  GridFunction g;
  g.nodes = targets;
  g.values = std::move(out);
  return g;
}

// ---------------------------------------------------------------- Besov, projection

double besov_norm(const GridFunction& f, double p, double alpha,
                  const std::vector<double>& h_grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("besov_norm: alpha must lie in (0,1)");
  if (!(p >= 1.0)) throw std::invalid_argument("besov_norm: p must be >= 1");
  f.validate();
  if (f.size() < 2) throw std::invalid_argument("besov_norm: need at least one cell");
  double a = f.front(), b = f.back(), len = b - a;
  double semi = 0.0;
  for (double h : h_grid) {
    if (!(h > 0.0 && h <= len * (1.0 + 1e-15)))
      throw std::invalid_argument("besov_norm: shift outside (0, length]");
    double d;
    if (h >= len) {
      // [a, b-h] is a single point: only the sup norm sees it.
      if (!std::isinf(p)) continue;
      double fa, fa1, fb0, fb;
      detail::affine_ends(f, 0.0, a, f.nodes[1], fa, fa1);
      detail::affine_ends(f, 0.0, f.nodes[f.size() - 2], b, fb0, fb);
      d = std::abs(fb - fa);
    } else {
      d = detail::lp_of_pieces(detail::difference_pieces(f, h, &f, 0.0, a, b - h), p);
    }
    semi = std::max(semi, d / std::pow(h, alpha));
  }
  return lp_norm(f, p) + semi;
}

GridFunction project_average(const GridFunction& f, int n) {
  if (n < 1) throw std::invalid_argument("project_average: n must be >= 1");
  f.validate();
  if (f.size() < 2) throw std::invalid_argument("project_average: need at least one cell");
  std::vector<double> edges = linspace(f.front(), f.back(), static_cast<std::size_t>(n));
  GridFunction g;
  g.nodes = edges;
  g.values.resize(edges.size());
  g.interp = Interpretation::PiecewiseConstantLeft;
  for (int k = 0; k < n; ++k) {
    auto pieces = detail::difference_pieces(f, 0.0, nullptr, 0.0, edges[k], edges[k + 1]);
    double s = 0.0;
    for (const auto& L : pieces) s += 0.5 * (L.x1 - L.x0) * (L.v0 + L.v1);
    g.values[k] = s / (edges[k + 1] - edges[k]);
  }
  g.values[n] = g.values[n - 1];
  return g;
}

}  // namespace varfrac
