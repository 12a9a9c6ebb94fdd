#pragma once

// Lyapunov-Schmidt reduction at the resonant pair e_n^+ = (0, e_n),
// e_n^- = (e_{-n}, 0), e_m = e^{i m pi x}, on a truncated basis.
//
// With D = diag(1/(lambda - m pi)) (zero at m = n) the operator
// T_n = Phi D is anti-diagonal:
//   T_{-+} = Phi_{-+} D maps the e^+ block to the e^- block,
//   T_{+-} = Phi_{+-} D the other way round,
// and T_n^2 is block diagonal. Only modes m = n mod 2 interact with n.

#include <Eigen/Dense>
#include <vector>

#include "birkhoff/spectrum.hpp"

namespace birkhoff {

/// Truncated Fourier model of the reduction for one index n. The matrices of
/// Phi do not depend on lambda; D is rebuilt per evaluation.
class ReductionWorkspace {
 public:
  /// truncation <= 0 picks K_t = 4 (|n| + K + 8); smaller values are raised to |n| + 8K.
  ReductionWorkspace(const FourierPotential& phi, int n, int truncation = 0);

  int n() const { return n_; }
  int truncation() const { return kt_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const std::vector<int>& modes() const { return modes_; }
  int position_of_n() const { return pos_n_; }
  const FourierPotential& potential() const { return phi_; }

  /// Throws a range error unless |Re lambda - n pi| <= pi/2.
  void check_strip(cplx lambda) const;
  /// Diagonal of A_lambda^{-1} Q_n on the retained modes.
  Eigen::VectorXcd resolvent(cplx lambda) const;

  const Eigen::MatrixXcd& phi_minus_plus() const { return phi_mp_; }
  const Eigen::MatrixXcd& phi_plus_minus() const { return phi_pm_; }

 private:
  FourierPotential phi_;
  int n_ = 0;
  int kt_ = 0;
  int pos_n_ = 0;
  std::vector<int> modes_;
  Eigen::MatrixXcd phi_mp_;  // (Phi e_m^+)_j^-  = phi^-_{j+m}
  Eigen::MatrixXcd phi_pm_;  // (Phi e_m^-)_j^+  = phi^+_{j+m}
};

struct LsCoefficients {
  cplx lambda{};
  cplx a_plus{}, a_minus{}, b_plus{}, b_minus{};
  /// lambda-derivatives, filled when requested
  cplx da{}, db_plus{}, db_minus{};
  /// |a^+ - a^-| / max(1e-300, |a^+|, |a^-|), or the absolute gap when both vanish
  double symmetry = 0;

  cplx a() const { return 0.5 * (a_plus + a_minus); }
};

/// a_n^pm, b_n^pm at lambda by solving (I - T_n^2) x = Phi e_n^pm.
/// Threshold error unless <n> >= 8 ||phi||_1^2 (skipped with enforce_threshold
/// = false); conditioning error when the solve breaks down.
LsCoefficients ls_coefficients(const ReductionWorkspace& ws, cplx lambda, bool derivatives = false,
                               bool enforce_threshold = true);

struct LsRoots {
  cplx xi_plus{}, xi_minus{};  // roots of lambda - n pi - a -+ sqrt(b^+ b^-)
  int iterations = 0;
  int retries = 0;
  double disc_radius = 0;  // ||phi||_1^2/<n> + sqrt2 ||phi||_1/<2n>
  bool in_disc = false;
};

/// Both roots of det S_n in the strip by Newton on its two factors, seeded at
/// n pi + a +- sqrt(b^+ b^-); four perturbed seeds on failure, then a
/// convergence error.
LsRoots detS_roots(const ReductionWorkspace& ws, bool enforce_threshold = true);

struct OperatorNormReport {
  int n = 0;
  cplx lambda{};
  double weighted_norm = 0;  // ||phi||_w
  double t_norm = 0;         // max over shifts i in {0, n} of ||T_n||_{w;-i -> w;i}
  double t_bound = 0;        // 2 ||phi||_w
  double t2_norm = 0;        // ||T_n^2||_{w;n}
  double t2_bound = 0;       // 4 ||phi||_w^2 / <n>
  bool passed = false;
};

/// Largest singular values of the weight-conjugated truncated operators.
OperatorNormReport operator_norm_checks(const ReductionWorkspace& ws, cplx lambda, const Weight& w);

struct LsCheck {
  int n = 0;
  int truncation = 0;
  LsRoots roots;
  double lambda_minus = 0, lambda_plus = 0;  // from the spectrum, when given
  double root_error = 0;                      // after sorting by real part
  double worst_symmetry = 0;
  double a_sup = 0, a_bound = 0;
  double b_dev_plus = 0, b_dev_minus = 0;      // sup w_{2n} |b^pm - phi^pm_{2n}|
  double b_bound_plus = 0, b_bound_minus = 0;  // 8 ||phi||_w^2 ||phi_pm||_w / <n>
  bool coefficient_bounds_apply = false;       // <n> >= 8 ||phi||_w^2
  double gap_sq = 0;  // |xi^+ - xi^-|^2
  double bb_sup = 0;  // sup over the strip samples of |b^+ b^-|
  OperatorNormReport norms;
  bool passed = false;
};

/// Everything the reduction asserts for index n, with sup norms over the strip
/// taken on a 5 x 3 sample grid plus the roots. `sp` may be null.
LsCheck ls_check(const FourierPotential& phi, int n, const Weight& w, const PeriodicSpectrum* sp,
                 int truncation = 0, double root_tol = 1e-6);

}  // namespace birkhoff
