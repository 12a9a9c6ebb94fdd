#pragma once

// NLS hierarchy Hamiltonians from the recursion
//   u_1 = -phi_plus,  u_{k+1} = u_k' + phi_minus sum_{l=1}^{k-1} u_{k-l} u_l,
// carried out exactly on Fourier bands, and the trace formulas linking them
// to the action sums.

#include <string>
#include <vector>

#include "birkhoff/actions.hpp"

namespace birkhoff {

/// Sign s_k in H_k = s_k int phi_minus u_k dx.
enum class HierarchySign {
  calibrated,      // s_1 = -1, s_k = +1 for k >= 2; reproduces H_1, H_2, H_3 in closed form
  alternating,     // s_k = (-1)^k
  paper_appendix,  // s_k = +1
};

HierarchySign parse_hierarchy_sign(const std::string& name);
const char* to_string(HierarchySign sign);

struct HierarchyEvaluation {
  int k_max = 0;
  int band = 0;       // K of the potential
  int grid_size = 0;  // power of two >= 4 (K+1)(k_max+1); informational, products are exact
  HierarchySign sign = HierarchySign::calibrated;
  /// u[k] holds the coefficients of e^{2 pi i j x}, index j + k K.
  std::vector<std::vector<cplx>> u;
  std::vector<cplx> H;  // H[k], k = 1..k_max; H[0] unused

  cplx hamiltonian(int k) const;
  /// Largest |j| with a nonzero coefficient in u_k.
  int observed_band(int k) const;
};

/// Requires 1 <= k_max <= 9.
HierarchyEvaluation hierarchy_compute(const FourierPotential& phi, int k_max,
                                      HierarchySign sign = HierarchySign::calibrated);

struct TraceReport {
  int k = 0;
  double lhs = 0;   // sum of J_{n,k} over located indices
  double tail = 0;  // bound on the dropped indices
  cplx rhs{};       // H_1 for k = 1, -H_k / (2i)^{k-1} otherwise
  double residual = 0;  // worst relative deviation over [lhs - tail, lhs + tail]
  bool passed = false;
};

TraceReport trace_check(const ActionSpectrum& as, const HierarchyEvaluation& h, int k, double tol = 1e-5);

struct HformReport {
  int m = 0;
  double h_odd = 0;       // (-1)^{m+1} H_{2m+1}
  double derivative = 0;  // int |psi^{(m)}|^2
  double remainder = 0;   // r_m = h_odd - derivative, the p_{2m} integral
  double constant = 0;    // smallest C with |r_m| <= ||psi^{(m)}||^2 + C (1 + ||psi||_0^{4m}) ||psi||_0^2
  bool passed = false;
};

/// Requires a real-type potential and 1 <= m <= 3.
HformReport hform_check(const FourierPotential& phi, int m, HierarchySign sign = HierarchySign::calibrated);

}  // namespace birkhoff
