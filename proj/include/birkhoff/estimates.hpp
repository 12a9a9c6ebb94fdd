#pragma once

// Both sides of the two-sided action and Birkhoff-norm estimates, evaluated on
// single potentials and reduced over seeded random families. Truncation tails
// always go to the side that makes a pass harder.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "birkhoff/hierarchy.hpp"

namespace birkhoff {

struct FamilySpec {
  int count = 20;
  std::uint64_t base_seed = 1;
  int K = 8;
  RandomPotentialSpec::Decay decay = RandomPotentialSpec::Decay::sobolev;
  double s = 1.0;
  double a = 0.0;
  /// Member i is rescaled to ||phi||_1 = norms[i mod size]. The magnitudes of
  /// random_potential are fixed, so each level is one amplitude.
  std::vector<double> norms{0.25, 0.5, 1.0, 1.5, 2.0};
};

struct FamilyMember {
  std::uint64_t seed = 0;
  double target_norm = 0;
  FourierPotential phi;
};

/// Members use seeds base_seed + i, so a doubled family extends the original.
std::vector<FamilyMember> generate_family(const FamilySpec& spec);

struct AnalysisOptions {
  int n_max = 0;  // 0 -> sized from the threshold and the weights below
  std::vector<Weight> weights{Weight::sobolev(1.0), Weight::abel(1.0, 0.2)};
  DiscriminantOptions disc;
  SpectrumOptions spectrum;
  ActionOptions actions;
  int k_max = 7;
  HierarchySign sign = HierarchySign::calibrated;
};

/// Spectrum, actions and hierarchy of one potential.
struct Analysis {
  std::uint64_t seed = 0;
  FourierPotential phi;
  std::shared_ptr<const DiscriminantEvaluator> ev;
  PeriodicSpectrum sp;
  ActionSpectrum as;
  HierarchyEvaluation h;
};

/// n_max large enough for the localization threshold, the gap sums of every
/// listed weight and the tail bounds of the weighted action norms.
int analysis_n_max(const FourierPotential& phi, const std::vector<Weight>& weights);

Analysis analyze(const FourierPotential& phi, const AnalysisOptions& opts, Execution exec = Execution::parallel);
/// Members in parallel, each analyzed serially; results in member order.
std::vector<Analysis> analyze_family(const std::vector<FamilyMember>& family, const AnalysisOptions& opts,
                                     Execution exec = Execution::parallel);

struct RatioRecord {
  std::uint64_t seed = 0;
  double lhs = 0;
  double rhs = 0;  // right-hand side without the unknown constant
  double ratio = 0;
};

/// lhs / rhs with 0/0 = 0.
double safe_ratio(double lhs, double rhs);

/// ||I||_{l1_{2m}} against ||phi||_m^2 + (1 + ||phi||_1)^{4m} ||phi||_0^2.
RatioRecord check_act_sob_i(const Analysis& a, int m);
/// ||phi||_m^2 against ||I||_{l1_{2m}} + (1 + ||I||_{l1_2})^{4m-3} ||I||_{l1}.
RatioRecord check_act_sob_ii(const Analysis& a, int m);

struct RatioPair {
  RatioRecord upper;  // (i)
  RatioRecord lower;  // (ii)
};

/// ||Omega||_m against ||phi||_m + (1 + ||phi||_1)^{2m} ||phi||_0, and
/// ||phi||_m against ||Omega||_m + (1 + ||Omega||_1)^{4m-3} ||Omega||_0.
RatioPair check_b_est(const Analysis& a, int m);
/// sum w_{2n}^2 I_n against w[16 ||phi||_w^2]^2 ||phi||_w^2, and
/// ||Omega||_w against w[16 ||phi||_w^2] ||phi||_w.
RatioPair check_act_west(const Analysis& a, const Weight& w);
/// ||I||_{l1_{2s}} against (1 + ||phi||_s)^{4s} ||phi||_s^2, real s >= 1.
RatioRecord check_real_exponent(const Analysis& a, double s);

struct H3Record {
  std::uint64_t seed = 0;
  double lhs_first = 0, rhs_first = 0;    // H_3 - 2 H_1^2  <=  sum (2 n pi)^2 I_n
  double lhs_second = 0, rhs_second = 0;  // ||phi||_1^2 / 3 <= ||I||_{l1_2} + ||I||_{l1}^2
  double slack_first = 0, slack_second = 0;
  bool passed = false;
};
H3Record check_H3_lemma(const Analysis& a);

struct SobRepRecord {
  std::uint64_t seed = 0;
  int m = 0;
  double lhs = 0;          // int |psi^{(m)}|^2
  double level_sum = 0;    // 4^m sum_n J_{n,2m+1}
  double p_integral = 0;   // (-1)^{m+1} H_{2m+1} - lhs
  double residual = 0;     // worst over the tail interval, relative to max(lhs, 1)
  bool passed = false;
};
SobRepRecord check_sob_rep(const Analysis& a, int m, double tol = 1e-4);

struct IndexCheck {
  std::uint64_t seed = 0;
  int checked = 0;
  int failures = 0;
  double worst = 0;  // largest violation measure; <= 0 means every inequality held
  int worst_n = 0;
  bool passed() const { return failures == 0; }
};

/// 2^{-m} <2n pi>^{2m} I_n <= 4^m J_{n,2m+1} <= <2n pi>^{2m} I_n for
/// above-threshold n != 0 with I_n > floor. `worst` is the largest relative
/// excess over either side.
IndexCheck check_in_jn(const Analysis& a, int m, double floor = 1e-12);
/// I_n <= 2^11 (1 + ||phi||_1^2) gamma_n^2 above threshold; `worst` is the
/// largest ratio I_n / bound.
IndexCheck check_action_gap_bound(const Analysis& a);
/// |4 I_n / gamma_n^2 - 1| <= 0.5 on the top quartile (by |n|) of open gaps;
/// `worst` is the largest deviation.
IndexCheck check_in_gmn(const Analysis& a);

struct EstimateReport {
  std::string theorem;
  std::string parameter;
  std::vector<RatioRecord> per_potential;
  double empirical_constant = 0;  // max ratio
  bool passed = false;            // every ratio finite
};

EstimateReport reduce_ratios(std::string theorem, std::string parameter, std::vector<RatioRecord> records);

/// Reports for the named theorem groups: "b-est", "act-sob", "act-west",
/// "real-exponent". Empirical constants are squared where the inequality is
/// stated for squares.
std::vector<EstimateReport> family_estimates(const std::vector<Analysis>& family,
                                             const std::vector<std::string>& theorems,
                                             const std::vector<Weight>& weights);

}  // namespace birkhoff
