#pragma once

// Floquet discriminant of the Zakharov-Shabat operator
//   L = diag(i, -i) d/dx + [[0, phi_minus], [phi_plus, 0]]
// over one period. The fundamental solution solves M' = A M with
//   A(x, lambda) = [[-i lambda, i phi_minus], [-i phi_plus, i lambda]],
// and Delta(lambda) = tr M(1, lambda).
//
// Both schemes write the exponent on each subinterval as Omega0 + lambda Omega1
// with traceless 2x2 blocks, so one kernel serves both and lambda-derivatives
// follow from the product rule over the factors.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/parallel.hpp"
#include "birkhoff/potentials.hpp"

namespace birkhoff {

enum class Scheme {
  magnus4,   // two-point Gauss Magnus, fourth order; the default
  midpoint,  // frozen midpoint coefficient, second order
};

/// Subintervals needed to resolve every index |n| <= n_max. A step h with
/// lambda h near pi resonates with the potential and opens spurious gaps for
/// |n| within about K of the subinterval count, so the count must clear n_max.
int required_subintervals(const FourierPotential& phi, int n_max);

struct DiscriminantOptions {
  int subintervals = 0;  // 0 -> max(256, 16 K, required_subintervals(phi, index_reach))
  int index_reach = 0;   // largest |n| the spectrum will be located to
  Scheme scheme = Scheme::magnus4;
  bool richardson = false;  // extrapolate N and N/2 results
  double lambda_cap = 1e6;
  bool error_estimate = true;  // compare against N/2 subintervals
};

struct DiscriminantSample {
  cplx lambda{};
  cplx delta{};
  cplx delta_dot{};
  cplx delta_ddot{};
  /// Delta^2/4 - 1 from the monodromy entries, (M11-M22)^2/4 + M12 M21; no
  /// cancellation near double eigenvalues.
  cplx gap_function{};
  double error_estimate = 0.0;
};

struct GridEntry {
  DiscriminantSample sample;
  bool ok = true;
  ErrorKind kind = ErrorKind::overflow;
  std::string message;
};

class DiscriminantEvaluator {
 public:
  explicit DiscriminantEvaluator(FourierPotential phi, DiscriminantOptions opts = {});

  const FourierPotential& potential() const { return phi_; }
  const DiscriminantOptions& options() const { return opts_; }
  int subintervals() const { return n_; }

  /// Delta and its first two lambda-derivatives.
  DiscriminantSample evaluate(cplx lambda) const;
  /// Derivatives up to `order` (0, 1 or 2) and no error estimate; the hot path
  /// for root finding.
  DiscriminantSample evaluate_fast(cplx lambda, int order) const;

  std::vector<GridEntry> evaluate_grid(std::span<const cplx> lambdas,
                                       Execution exec = Execution::parallel) const;

 private:
  struct Factor {
    cplx d0, u0, l0;  // Omega0 = [[d0, u0], [l0, -d0]]
    cplx d1, u1, l1;  // Omega1
  };
  struct Monodromy {
    cplx m[4]{}, dm[4]{}, ddm[4]{};
  };

  static std::vector<Factor> build(const FourierPotential& phi, int n, Scheme scheme);
  Monodromy propagate(const std::vector<Factor>& factors, cplx lambda, int order) const;
  DiscriminantSample sample_from(const Monodromy& mono, cplx lambda) const;
  Monodromy combined(cplx lambda, int order) const;

  FourierPotential phi_;
  DiscriminantOptions opts_;
  int n_ = 0;
  std::vector<Factor> fine_;
  std::vector<Factor> coarse_;
};

}  // namespace birkhoff
