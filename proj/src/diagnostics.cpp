#include "varfrac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pieces.hpp"
#include "varfrac/errors.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994531;

// Truncation schedule eps_k = 10^(-2^(k+1)), k = 0..7: ln(1/eps) doubles at
// each step, from 1e-2 down to 1e-256.
std::vector<double> truncation_schedule() {
  std::vector<double> eps;
  for (int k = 0; k < 8; ++k) eps.push_back(std::pow(10.0, -std::ldexp(2.0, k)));
  return eps;
}

// Integrand of the L1 criterion in u = ln(1/t): alpha(e^-u) e^(-u alpha(e^-u)).
double criterion_integrand(const OrderFunction& alpha, double u) {
  double t = std::exp(-u);
  double a = alpha.eval(t);
  if (!(a >= 0.0)) throw NumericalError("l1 criterion: negative order");
  return a * std::exp(-u * a);
}

// Integral over [u0, u1] split at breakpoints, 8 Gauss panels per unit-ish.
double criterion_piece(const OrderFunction& alpha, double u0, double u1,
                       const std::vector<double>& ubreaks) {
  std::vector<double> cuts{u0, u1};
  for (double b : ubreaks)
    if (b > u0 && b < u1) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    int panels = std::max(8, static_cast<int>(std::ceil(4.0 * (b - a))));
    panels = std::min(panels, 256);
    double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k)
      s += detail::gauss8([&](double u) { return criterion_integrand(alpha, u); }, a + k * h,
                          a + (k + 1) * h);
  }
  return s;
}

std::vector<double> log_breaks(const OrderFunction& alpha) {
  std::vector<double> ub;
  for (double b : alpha.breakpoints())
    if (b > 0.0) ub.push_back(-std::log(b));
  return ub;
}

}  // namespace

bool is_divergent(const std::vector<EvidencePoint>& ev, const DivergenceRule& rule) {
  int n = static_cast<int>(ev.size());
  if (n < rule.steps + 2) return false;
  std::vector<double> inc;
  for (int k = 1; k < n; ++k) inc.push_back(ev[k].value - ev[k - 1].value);
  int m = static_cast<int>(inc.size());
  double last = inc[m - 1];
  if (!(last > rule.floor * std::max(1.0, std::abs(ev.back().value)))) return false;
  for (int k = m - rule.steps; k < m; ++k)
    if (!(inc[k] >= rule.ratio * inc[k - 1]) || !(inc[k - 1] > 0.0)) return false;
  return true;
}

// ---------------------------------------------------------------- L1 norm

double l1_inner_integral(const OrderFunction& alpha, double s) {
  if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("l1 norm: probe must lie in [0,1)");
  double D = 1.0 - s;
  auto integrand = [&](double d) {
    double a = alpha.eval(s + d);
    if (!(a > 0.0) || !std::isfinite(a)) throw NumericalError("l1 norm: nonpositive order");
    return std::exp((a - 1.0) * std::log(d)) / std::tgamma(a);
  };
  // Below d_min the order is frozen at its value next to s and integrated
  // in closed form.
  double d_min = s > 0.0 ? std::max(s * 1e-9, 1e-300) : 1e-300;
  std::vector<double> cuts;
  for (double d = D; d > d_min; d *= 0.5) cuts.push_back(d);
  cuts.push_back(d_min);
  std::reverse(cuts.begin(), cuts.end());
  for (double b : alpha.breakpoints())
    if (b - s > d_min && b - s < D) cuts.push_back(b - s);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += detail::gauss8(integrand, cuts[i], cuts[i + 1]);
  double a0 = alpha.eval(s + 0.5 * d_min);
  if (a0 > 0.0) sum += std::exp(a0 * std::log(d_min)) / std::tgamma(a0 + 1.0);
  return sum;
}

NormReport l1_operator_norm(const OrderFunction& alpha, const std::vector<double>& s_grid,
                            const QuadratureConfig& cfg) {
  cfg.validate();
  for (double s : s_grid)
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("l1 norm: probes must lie in [0,1)");
  std::vector<double> user(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) { user[i] = l1_inner_integral(alpha, s_grid[i]); });

  NormReport rep;
  rep.method = "l1_operator_norm:geometric-gauss8";
  double sup = 0.0;
  for (double v : user) sup = std::max(sup, v);

  // Refinement toward the critical endpoint t = 0.
  double running = 0.0;
  for (double eps : truncation_schedule()) {
    running = std::max(running, l1_inner_integral(alpha, eps));
    for (std::size_t i = 0; i < s_grid.size(); ++i)
      if (s_grid[i] >= eps) running = std::max(running, user[i]);
    rep.evidence.push_back({eps, running});
  }
  sup = std::max(sup, running);
  rep.divergent = is_divergent(rep.evidence);
  rep.value = rep.divergent ? kInf : sup;
  return rep;
}

// ---------------------------------------------------------------- L1 criterion

double l1_criterion_truncated(const OrderFunction& alpha, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("l1 criterion: eps must lie in (0,1)");
  double U = -std::log(eps);
  auto ub = log_breaks(alpha);
  double s = 0.0, a = 0.0, b = std::min(1.0, U);
  while (a < U) {
    s += criterion_piece(alpha, a, b, ub);
    a = b;
    b = std::min(2.0 * b, U);
  }
  return s;
}

NormReport l1_criterion_integral(const OrderFunction& alpha, const QuadratureConfig& cfg) {
  cfg.validate();
  NormReport rep;
  rep.method = "l1_criterion:log-substitution-gauss8";
  auto ub = log_breaks(alpha);
  double prev_u = 0.0, total = 0.0;
  for (double eps : truncation_schedule()) {
    double U = -std::log(eps);
    // accumulate [prev_u, U] in doubling pieces
    double a = prev_u, b = prev_u == 0.0 ? std::min(1.0, U) : std::min(2.0 * prev_u, U);
    while (a < U) {
      total += criterion_piece(alpha, a, b, ub);
      a = b;
      b = std::min(std::max(2.0 * b, 1.0), U);
    }
    prev_u = U;
    rep.evidence.push_back({eps, total});
  }
  rep.divergent = is_divergent(rep.evidence);
  rep.value = rep.divergent ? kInf : total;
  return rep;
}

// ---------------------------------------------------------------- L_p -> L_inf

NormReport lp_to_linf_norm(const OrderFunction& alpha, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("lp_to_linf: p must exceed 1");
  double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  double ipp = 1.0 - ip;               // 1/p'
  double pp = 1.0 / ipp;               // p'
  double pref = 1.0 / std::pow(pp, ipp);
  NormReport rep;
  rep.method = "lp_to_linf:closed-form-sup";

  bool violated = false;
  double violated_at = 0.0;
  auto expr = [&](double t) {
    double a = alpha.eval(t);
    double gap = a - ip;
    if (!(gap > 0.0)) {
      if (!violated || t > violated_at) violated_at = t;
      violated = true;
      return kInf;
    }
    return pref * std::exp(gap * std::log(t)) / (std::tgamma(a) * std::pow(gap, ipp));
  };

  // Probes: geometric toward 0, uniform on (0,1], breakpoints.
  std::vector<double> probes;
  for (int j = 0; j <= 4 * 1000; ++j) probes.push_back(std::exp2(-j / 4.0));
  for (int i = 1; i <= 2000; ++i) probes.push_back(i / 2000.0);
  for (double b : alpha.breakpoints())
    if (b > 0.0) probes.push_back(b);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  probes.erase(std::remove_if(probes.begin(), probes.end(), [](double t) { return !(t > 0.0); }),
               probes.end());

  std::vector<double> vals(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) vals[i] = expr(probes[i]);

  // Local refinement around the best probe and around the smallest gap.
  auto zoom = [&](std::size_t i) {
    double lo = probes[i > 0 ? i - 1 : i], hi = probes[i + 1 < probes.size() ? i + 1 : i];
    double best = vals[i];
    for (int round = 0; round < 6 && hi > lo; ++round) {
      double bt = lo;
      for (int k = 0; k <= 32; ++k) {
        double t = lo + (hi - lo) * k / 32.0;
        if (!(t > 0.0)) continue;
        double v = expr(t);
        if (v > best) {
          best = v;
          bt = t;
        }
      }
      double w = (hi - lo) / 32.0;
      lo = std::max(lo, bt - w);
      hi = std::min(hi, bt + w);
    }
    return best;
  };
  std::size_t imax = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  double sup = std::max(vals[imax], zoom(imax));
  std::size_t igap = 0;
  double gmin = kInf;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    double g = alpha.eval(probes[i]) - ip;
    if (g < gmin) {
      gmin = g;
      igap = i;
    }
  }
  sup = std::max(sup, zoom(igap));

  // Evidence: running sup over t >= 2^-k, ln(1/t) doubling.
  for (int k = 1; k <= 1024; k *= 2) {
    double lim = std::ldexp(1.0, -k), run = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (probes[i] >= lim) run = std::max(run, vals[i]);
    rep.evidence.push_back({lim, run});
  }

  if (violated) {
    rep.method = "lp_to_linf:non-bounded(alpha<=1/p)";
    rep.divergent = true;
    rep.value = kInf;
    return rep;
  }
  rep.divergent = is_divergent(rep.evidence);
  rep.value = rep.divergent ? kInf : sup;
  return rep;
}

// ---------------------------------------------------------------- compactness

CompactnessVerdict classify_compactness(const OrderFunction& alpha, Endpoint endpoint,
                                        const CompactnessOptions& opt) {
  if (opt.max_level < 8) throw std::invalid_argument("classify_compactness: max_level too small");
  CompactnessVerdict v;
  v.endpoint = endpoint;
  v.options = opt;
  int K = opt.max_level;
  if (endpoint == Endpoint::One && !(alpha.hi() >= 1.0))
    throw std::invalid_argument("classify_compactness: profile does not reach t = 1");
  for (int k = 1; k <= K; ++k) {
    double ph;
    if (endpoint == Endpoint::Zero) {
      double t = std::ldexp(1.0, -k);
      if (t == 0.0) break;
      ph = phi(alpha, t);
    } else {
      double d = std::ldexp(1.0, -k);
      ph = alpha.eval_from_right(d) * (k * kLn2);
    }
    v.phi_evidence.push_back({static_cast<double>(k), ph});
    v.limit_evidence.push_back({static_cast<double>(k), std::exp(-ph)});
  }
  const auto& g = v.limit_evidence;
  std::size_t n = g.size(), half = n / 2;
  double tail_max = 0.0, all_min = kInf;
  for (std::size_t i = 0; i < n; ++i) all_min = std::min(all_min, g[i].value);
  for (std::size_t i = half; i < n; ++i) tail_max = std::max(tail_max, g[i].value);
  bool downward = g.back().value < 0.95 * tail_max;
  if (tail_max < opt.compact_tol)
    v.verdict = Verdict::Compact;
  else if (all_min >= opt.noncompact_floor && !downward)
    v.verdict = Verdict::NonCompact;
  else
    v.verdict = Verdict::Indeterminate;
  return v;
}

// ---------------------------------------------------------------- witnesses

std::vector<double> witness_separation(const OrderFunction& alpha, double p, int n_max,
                                       const QuadratureConfig& cfg, Endpoint endpoint) {
  cfg.validate();
  if (n_max < 1) throw std::invalid_argument("witness_separation: n_max must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("witness_separation: p must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n_max));
  parallel_for(out.size(), [&](std::size_t idx) {
    int n = static_cast<int>(idx) + 1;
    double lo = std::ldexp(1.0, -(n + 1)), hi = std::ldexp(1.0, -n);
    if (endpoint == Endpoint::One) {
      double l2 = 1.0 - hi, h2 = 1.0 - lo;
      lo = l2;
      hi = h2;
    }
    double height = std::isinf(p) ? 1.0 : std::exp2((n + 1) / p);
    GridFunction h;
    h.nodes = {0.0, lo, hi, 1.0};
    h.values = {0.0, height, 0.0, 0.0};
    if (hi >= 1.0) {
      h.nodes = {0.0, lo, 1.0};
      h.values = {0.0, height, height};
    }
    h.interp = Interpretation::PiecewiseConstantLeft;

    // Gauss nodes on pieces shrinking geometrically toward lo, where the
    // image behaves like (t - lo)^alpha.
    double len = hi - lo;
    std::vector<double> ts, ws;
    for (int j = 0; j < 60; ++j) {
      double b = lo + len * std::ldexp(1.0, -j), a = lo + len * std::ldexp(1.0, -(j + 1));
      if (!(b > a)) break;
      double c = 0.5 * (a + b), w = 0.5 * (b - a);
      for (int i = 0; i < 8; ++i) {
        ts.push_back(c + w * detail::kGaussX[i]);
        ws.push_back(w * detail::kGaussW[i]);
      }
    }
    std::vector<std::size_t> order(ts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
    std::vector<double> st, sw;
    for (std::size_t i : order) {
      if (!st.empty() && ts[i] <= st.back()) continue;
      st.push_back(ts[i]);
      sw.push_back(ws[i]);
    }
    QuadratureConfig local = cfg;
    GridFunction img = rl_apply(alpha, h, st, local);
    double acc = 0.0;
    for (std::size_t i = 0; i < st.size(); ++i) {
      double v = std::abs(img.values[i]);
      if (std::isinf(p))
        acc = std::max(acc, v);
      else
        acc += sw[i] * std::pow(v, p);
    }
    out[idx] = std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
  });
  return out;
}

// ---------------------------------------------------------------- identities

double verify_semigroup(const OrderFunction& alpha, double beta, const GridFunction& f,
                        const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("verify_semigroup: beta must be positive");
  f.validate();
  double a = f.front(), b = f.back();
  int N = cfg.n_cells;
  std::vector<double> targets(static_cast<std::size_t>(N) + 1);
  for (int j = 0; j <= N; ++j)
    targets[j] = a + (b - a) * std::pow(static_cast<double>(j) / N, cfg.grading);
  targets.back() = b;
  GridFunction lhs = rl_apply(alpha.plus(beta), f, targets, cfg);
  GridFunction inner = rl_apply(OrderFunction::constant(beta), f, targets, cfg);
  GridFunction rhs = rl_apply(alpha, inner, targets, cfg);
  double d = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) d = std::max(d, std::abs(lhs.values[i] - rhs.values[i]));
  return d;
}

double verify_scaling(const OrderFunction& alpha, double r, double p, double q,
                      const GridFunction& f, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("verify_scaling: r must lie in (0,1]");
  if (!(p >= 1.0 && q >= 1.0)) throw std::invalid_argument("verify_scaling: p, q must be >= 1");
  f.validate();
  if (f.front() != 0.0 || f.back() != 1.0)
    throw std::invalid_argument("verify_scaling: f must live on [0,1]");
  double ip = std::isinf(p) ? 0.0 : 1.0 / p, iq = std::isinf(q) ? 0.0 : 1.0 / q;
  std::size_t N = static_cast<std::size_t>(cfg.n_cells);
  std::vector<double> t = linspace(0.0, 1.0, N);

  // Left: J_p f on its own uniform grid of [0, r].
  GridFunction jf;
  jf.nodes = linspace(0.0, r, N);
  jf.values.resize(N + 1);
  double jscale = std::pow(r, -ip);
  for (std::size_t i = 0; i <= N; ++i) jf.values[i] = jscale * f(std::min(1.0, jf.nodes[i] / r));
  jf.interp = f.interp;
  std::vector<double> rt(N + 1);
  for (std::size_t i = 0; i <= N; ++i) rt[i] = r * t[i];
  rt.back() = r;
  GridFunction left = rl_apply(alpha, jf, rt, cfg);

  OrderFunction at = alpha.rescaled(r);
  GridFunction right = rl_apply(at, f, t, cfg);
  double d = 0.0, rq = std::pow(r, iq);
  for (std::size_t i = 0; i <= N; ++i) {
    double lv = rq * left.values[i];
    double rv = t[i] > 0.0 ? std::pow(r, at.eval(t[i]) + iq - ip) * right.values[i] : 0.0;
    d = std::max(d, std::abs(lv - rv));
  }
  return d;
}

// ---------------------------------------------------------------- local bounds

double sup_two_t_power(const OrderFunction& alpha, double r, double kappa) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("sup_two_t_power: r must lie in (0,1]");
  auto val = [&](double t) { return std::exp(kappa * alpha.eval(t) * std::log(2.0 * t)); };
  std::vector<double> probes;
  for (int j = 0; j <= 16 * 1000; ++j) {
    double t = r * std::exp2(-j / 16.0);
    if (t < 1e-300) break;
    probes.push_back(t);
  }
  for (int i = 1; i <= 2048; ++i) probes.push_back(r * i / 2048.0);
  for (double b : alpha.breakpoints())
    if (b > 0.0 && b <= r) probes.push_back(b);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  std::size_t best_i = 0;
  double best = -kInf;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    double v = val(probes[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double lo = probes[best_i > 0 ? best_i - 1 : 0];
  double hi = probes[std::min(best_i + 1, probes.size() - 1)];
  for (int round = 0; round < 8 && hi > lo; ++round) {
    double bt = probes[best_i];
    for (int k = 0; k <= 32; ++k) {
      double t = lo + (hi - lo) * k / 32.0;
      if (!(t > 0.0) || t > r) continue;
      double v = val(t);
      if (v > best) {
        best = v;
        bt = t;
      }
    }
    double w = (hi - lo) / 32.0;
    lo = std::max(lo, bt - w);
    hi = std::min(hi, bt + w);
  }
  return best;
}

double local_norm_bound(const OrderFunction& alpha, Endpoint endpoint, double r, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("local_norm_bound: p must be >= 1");
  if (endpoint == Endpoint::Zero) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("local_norm_bound: r must lie in (0,1]");
    return sup_two_t_power(alpha, r, 1.0);
  }
  if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("local_norm_bound: r must lie in (0,1/2]");
  double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  OrderFunction reflected = alpha.reflected(alpha.hi());
  return std::max(sup_two_t_power(reflected, r, 0.5), std::pow(r, 0.5 * ip));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Compact: return "Compact";
    case Verdict::NonCompact: return "NonCompact";
    default: return "Indeterminate";
  }
}

std::string to_string(Endpoint e) { return e == Endpoint::Zero ? "zero" : "one"; }

}  // namespace varfrac
