#pragma once

#include <string>
#include <vector>

#include "varfrac/operator_core.hpp"
#include "varfrac/order_function.hpp"

namespace varfrac {

struct EvidencePoint {
  double parameter;  // truncation level (epsilon, probe, or level k)
  double value;      // truncated value at that level
};

struct NormReport {
  double value = 0.0;  // +inf when divergent
  bool divergent = false;
  std::vector<EvidencePoint> evidence;
  std::string method;
};

// Divergence rule shared by the criteria: along a truncation schedule whose
// levels grow geometrically in ln(1/eps), a sequence is divergent when each of
// the last `steps` increments is at least `ratio` times the one before and the
// last increment is not negligible relative to the running value.
struct DivergenceRule {
  double ratio = 0.75;
  int steps = 3;
  double floor = 1e-3;
};
bool is_divergent(const std::vector<EvidencePoint>& evidence, const DivergenceRule& rule = {});

// sup over s of int_s^1 (t-s)^(alpha(t)-1)/Gamma(alpha(t)) dt.
NormReport l1_operator_norm(const OrderFunction& alpha, const std::vector<double>& s_grid,
                            const QuadratureConfig& cfg);
// Single inner integral I(s) of the L1 norm.
double l1_inner_integral(const OrderFunction& alpha, double s);

// int_0^1 alpha(t) t^(alpha(t)-1) dt.
NormReport l1_criterion_integral(const OrderFunction& alpha, const QuadratureConfig& cfg);
// Truncated value of the same integral over [eps, 1].
double l1_criterion_truncated(const OrderFunction& alpha, double eps);

// Norm of R^alpha from L_p to L_inf.
NormReport lp_to_linf_norm(const OrderFunction& alpha, double p);

enum class Endpoint { Zero, One };
enum class Verdict { Compact, NonCompact, Indeterminate };

struct CompactnessOptions {
  double compact_tol = 1e-6;
  double noncompact_floor = 0.01;
  int max_level = 1000;
};

struct CompactnessVerdict {
  Verdict verdict = Verdict::Indeterminate;
  Endpoint endpoint = Endpoint::Zero;
  std::vector<EvidencePoint> limit_evidence;  // (k, g(t_k))
  std::vector<EvidencePoint> phi_evidence;    // (k, phi(t_k))
  CompactnessOptions options;
};

CompactnessVerdict classify_compactness(const OrderFunction& alpha, Endpoint endpoint,
                                        const CompactnessOptions& opt = {});

// ||(R^alpha h_n) 1_{I_n}||_p for n = 1..n_max, h_n = 2^((n+1)/p) 1_{I_n}.
// For endpoint one the intervals are reflected about t = 1.
std::vector<double> witness_separation(const OrderFunction& alpha, double p, int n_max,
                                       const QuadratureConfig& cfg,
                                       Endpoint endpoint = Endpoint::Zero);

// Max discrepancy of R^(alpha+beta) f and R^alpha(R^beta f) on a target grid
// with cfg.n_cells cells graded toward the left end.
double verify_semigroup(const OrderFunction& alpha, double beta, const GridFunction& f,
                        const QuadratureConfig& cfg);

// Max discrepancy of r^(1/q) R^alpha(J_p f)(r t) and
// r^(alpha~(t)+1/q-1/p) R^(alpha~) f(t), alpha~(t) = alpha(r t). The left side
// acts on J_p f resampled to a uniform grid of [0, r] with cfg.n_cells cells.
double verify_scaling(const OrderFunction& alpha, double r, double p, double q,
                      const GridFunction& f, const QuadratureConfig& cfg);

// sup_{0<t<=r} (2t)^alpha(t), refined toward the maximiser.
double sup_two_t_power(const OrderFunction& alpha, double r, double exponent_scale = 1.0);

// Bound shapes with the unknown constant set to 1.
double local_norm_bound(const OrderFunction& alpha, Endpoint endpoint, double r, double p);

std::string to_string(Verdict v);
std::string to_string(Endpoint e);

}  // namespace varfrac
