#include "pieces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varfrac::detail {

const double kGaussX[8] = {-0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
                           -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
                           0.79666647741362674,  0.96028985649753623};
const double kGaussW[8] = {0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
                           0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
                           0.22238103445337447, 0.10122853629037626};

std::size_t cell_of(const GridFunction& f, double x) {
  const auto& n = f.nodes;
  if (n.size() < 2) return 0;
  auto it = std::upper_bound(n.begin(), n.end(), x);
  std::ptrdiff_t j = (it - n.begin()) - 1;
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n.size()) - 2);
  return static_cast<std::size_t>(j);
}

void affine_ends(const GridFunction& f, double shift, double u, double w, double& fu, double& fw) {
  if (f.size() == 1) {
    fu = fw = f.values[0];
    return;
  }
  std::size_t j = cell_of(f, 0.5 * (u + w) + shift);
  if (f.interp == Interpretation::PiecewiseConstantLeft) {
    fu = fw = f.values[j];
    return;
  }
  double x0 = f.nodes[j], x1 = f.nodes[j + 1];
  double slope = (f.values[j + 1] - f.values[j]) / (x1 - x0);
  fu = f.values[j] + slope * (u + shift - x0);
  fw = f.values[j] + slope * (w + shift - x0);
}

std::vector<Lin> difference_pieces(const GridFunction& f, double sf, const GridFunction* g,
                                   double sg, double lo, double hi) {
  std::vector<double> bp{lo, hi};
  for (double x : f.nodes)
    if (x - sf > lo && x - sf < hi) bp.push_back(x - sf);
  if (g)
    for (double x : g->nodes)
      if (x - sg > lo && x - sg < hi) bp.push_back(x - sg);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  std::vector<Lin> out;
  out.reserve(bp.size());
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    double u = bp[k], w = bp[k + 1];
    if (!(w > u)) continue;
    double a0, a1;
    affine_ends(f, sf, u, w, a0, a1);
    if (g) {
      double b0, b1;
      affine_ends(*g, sg, u, w, b0, b1);
      a0 -= b0;
      a1 -= b1;
    }
    out.push_back({u, w, a0, a1});
  }
  return out;
}

namespace {

// Integral over [0,h] of a linear function running from magnitude m0 to m1
// (same sign throughout), raised to the power p.
double same_sign_power(double h, double m0, double m1, double p) {
  double w = std::max(m0, m1), u = std::min(m0, m1);
  if (w == 0.0) return 0.0;
  double delta = (w - u) / w;  // 1 - u/w
  double j;
  if (delta == 0.0) {
    j = 1.0;
  } else if (delta == 1.0) {
    j = 1.0 / (p + 1.0);
  } else {
    j = -std::expm1((p + 1.0) * std::log1p(-delta)) / ((p + 1.0) * delta);
  }
  return h * std::pow(w, p) * j;
}

}  // namespace

double lp_power_sum(const std::vector<Lin>& pieces, double p) {
  double s = 0.0;
  for (const auto& L : pieces) {
    double h = L.x1 - L.x0, a = L.v0, b = L.v1;
    if (p == 1.0) {
      if (a * b >= 0.0)
        s += 0.5 * h * (std::abs(a) + std::abs(b));
      else
        s += 0.5 * h * (a * a + b * b) / (std::abs(a) + std::abs(b));
    } else if (p == 2.0) {
      s += h * (a * a + a * b + b * b) / 3.0;
    } else if (a * b >= 0.0) {
      s += same_sign_power(h, std::abs(a), std::abs(b), p);
    } else {
      double theta = a / (a - b);
      s += same_sign_power(theta * h, std::abs(a), 0.0, p);
      s += same_sign_power((1.0 - theta) * h, 0.0, std::abs(b), p);
    }
  }
  return s;
}

double lp_of_pieces(const std::vector<Lin>& pieces, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& L : pieces) m = std::max({m, std::abs(L.v0), std::abs(L.v1)});
    return m;
  }
  return std::pow(lp_power_sum(pieces, p), 1.0 / p);
}

}  // namespace varfrac::detail
