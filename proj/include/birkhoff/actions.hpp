#pragma once

// Action variables I_n and higher actions
//   J_{n,k} = (2/pi) int_{gap} lambda^{k-1} f_n(lambda) d lambda,
//   f_n = arccosh((-1)^n Delta/2),
// by Gauss-Legendre on the gap, and I_n again from the contour integral of
// lambda Delta'/sqrt(Delta^2 - 4) around it.

#include <functional>
#include <map>
#include <vector>

#include "birkhoff/spectrum.hpp"

namespace birkhoff {

/// f_n(lambda) for lambda in the closed gap n.
double f_n(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n, double lambda);

struct ActionOptions {
  std::vector<int> levels{1, 2, 3, 5, 7};
  double rel_tol = 1e-9;
  double abs_tol = 1e-300;
  int initial_nodes = 16;
  int max_doublings = 8;
  Execution exec = Execution::parallel;
};

struct GapIntegral {
  std::map<int, double> J;  // level -> J_{n,k}
  int nodes = 0;
  double change = 0;  // last doubling difference, relative
};

/// J_{n,k} for all requested levels from one set of quadrature nodes.
GapIntegral action_gap_integral(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n,
                                const std::vector<int>& levels, const ActionOptions& opts = {});
double action_gap_integral(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n, int k,
                           const ActionOptions& opts = {});

struct ContourOptions {
  int initial_nodes = 64;
  int max_nodes = 8192;
  double rel_tol = 1e-11;
};

struct ContourResult {
  double value = 0;
  int nodes = 0;
  double delta = 0;  // ellipse semi-major axis minus gamma/2
  double imag_residue = 0;
};

/// I_n from the contour integral on an ellipse around gap n.
ContourResult action_contour(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n,
                             const ContourOptions& opts = {});

/// Bound on sum_{|n| > n_max} weight(n) I_n from the individual and summed gap
/// estimates with Abel trial weights; +inf if no trial weight applies.
double action_tail_bound(const FourierPotential& phi, int n_max, const std::function<double(int)>& weight);

class ActionSpectrum {
 public:
  int n_max = 0;
  std::vector<int> levels;
  std::vector<double> I;                  // index n + n_max
  std::map<int, std::vector<double>> J;   // level -> values by n + n_max
  std::vector<int> nodes;                 // quadrature nodes used per index
  FourierPotential phi;

  double action(int n) const { return I.at(static_cast<std::size_t>(n + n_max)); }
  double level(int n, int k) const;
  bool has_level(int k) const { return J.count(k) > 0; }

  /// Bound on sum_{|n| > n_max} weight(n) I_n.
  double tail(const std::function<double(int)>& weight) const;
};

ActionSpectrum compute_actions(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp,
                               const ActionOptions& opts = {});

struct NormValue {
  double truncated = 0;
  double tail = 0;
  double total() const { return truncated + tail; }
};

/// sum <2 n pi>^s I_n
NormValue action_norm(const ActionSpectrum& as, double s);
/// sum w_{2n}^2 I_n
NormValue action_norm(const ActionSpectrum& as, const Weight& w);
/// sqrt(2 sum <2 n pi>^{2s} I_n), the norm of the Birkhoff coordinates.
NormValue birkhoff_norm(const ActionSpectrum& as, double s);
NormValue birkhoff_norm(const ActionSpectrum& as, const Weight& w);
/// sum_n J_{n,k} with a bound on the dropped indices.
NormValue level_sum(const ActionSpectrum& as, int k);

/// zeta with J_{n,2m+1} = zeta^{2m} I_n, chosen inside the gap.
double mean_value_node(const ActionSpectrum& as, const PeriodicSpectrum& sp, int n, int m);

}  // namespace birkhoff
