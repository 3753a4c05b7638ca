#pragma once

#include <string>
#include <vector>

#include "varfrac/operator_core.hpp"
#include "varfrac/order_function.hpp"

namespace varfrac {

struct OperatorMatrix {
  int n = 0;
  double r = 1.0;
  double p = 2.0, q = 2.0;
  std::vector<double> entries;  // row-major n*n, zero above the diagonal
  std::string basis_tag = "normalized-indicator";

  double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
  static OperatorMatrix diagonal(const std::vector<double>& d, double p = 2.0, double q = 2.0);
};

// sigma_ij = (n/r)^(1/p - 1/q + 1) int_{I_i} 1/Gamma(alpha(t)) int_{I_j, s<t} (t-s)^(alpha(t)-1) ds dt
// on the equal cells I_j of [0, r].
OperatorMatrix assemble_matrix(const OrderFunction& alpha, int n, double r, double p, double q,
                               const QuadratureConfig& cfg);

// Descending singular values.
std::vector<double> singular_values(const OperatorMatrix& m);

struct ApproximationNumbers {
  std::vector<double> values;  // a_1..a_{n_max}
  bool converged = true;       // N_disc vs 2 N_disc within 1 percent
  double max_rel_change = 0.0;
};

ApproximationNumbers approximation_numbers(const OrderFunction& alpha, int n_max, int n_disc,
                                           const QuadratureConfig& cfg);

double carl_constant(double alpha_exp);
// e_n <= C_a n^-a max_{k<=n} k^a a_k.
std::vector<double> carl_entropy_upper(const std::vector<double>& a_seq, double alpha_exp);

struct VolumetricBound {
  double bound = 0.0;               // lower bound on e_{n+1}
  double volume_ratio_root = 0.0;   // (vol B_p^n / vol B_q^n)^(1/n)
  double diagonal_geomean = 0.0;    // (prod sigma_jj)^(1/n)
  double half = 0.5;
};

VolumetricBound volumetric_entropy_lower(const OperatorMatrix& m);

// (vol B_q^n)^(1/n) = 2 Gamma(1+1/q) / Gamma(n/q+1)^(1/n).
double ball_volume_root(int n, double q);

// Index-wise comparison used as a soft ordering report: counts k with
// smaller[k] > larger[k] * (1 + slack).
int ordering_violations(const std::vector<double>& smaller, const std::vector<double>& larger,
                        double slack = 0.01);

}  // namespace varfrac
