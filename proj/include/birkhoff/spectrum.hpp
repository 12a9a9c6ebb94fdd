#pragma once

// Periodic spectrum of a real-type potential: the eigenvalues
// lambda_n^- <= lambda_n^+ (zeros of Delta^2 - 4), the critical points
// lambda_n^dot (zeros of Delta'), gap midpoints and lengths.
//
// Indices with <n> >= N_loc = ceil(8 ||phi||_1^2) are located by Newton from
// n pi; all lower indices come from a scan of Delta' whose total count is
// confirmed by a winding number.

#include <vector>

#include "birkhoff/discriminant.hpp"

namespace birkhoff {

struct GapRecord {
  int n = 0;
  double lambda_minus = 0, lambda_plus = 0, lambda_dot = 0;
  double tau = 0, gamma = 0;
  bool collapsed = true;
  /// Delta^2/4 - 1 at lambda_dot; f_n(lambda_dot) = asinh(sqrt(.)).
  double g_dot = 0;
  double residual_minus = 0, residual_plus = 0, residual_dot = 0;
};

struct SpectrumOptions {
  double gap_tol_scale = 1e-9;  // gapTol = scale * max(1, ||phi||_1)
  double scan_step = 0.0;       // 0 -> pi/32
  bool verify_count = true;
  Execution exec = Execution::parallel;
};

class PeriodicSpectrum {
 public:
  int n_max = 0;
  int threshold = 0;  // N_loc
  double norm1 = 0;
  double box_half_width = 0;
  double box_height = 0;
  double gap_tol = 0;
  /// Winding number over the low-frequency rectangle, and the count it should
  /// equal (both 0 when no index lies below threshold).
  int counted = 0;
  int expected = 0;
  std::vector<GapRecord> entries;  // index n + n_max

  const GapRecord& at(int n) const;
  bool above_threshold(int n) const { return 1 + (n < 0 ? -n : n) >= threshold; }
};

/// Locate every index |n| <= n_max. Requires a real-type potential and
/// n_max >= N_loc + 2.
PeriodicSpectrum locate_spectrum(const DiscriminantEvaluator& ev, int n_max,
                                 const SpectrumOptions& opts = {});

/// N_loc = ceil(8 ||phi||_1^2), at least 1.
int localization_threshold(const FourierPotential& phi);

struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
};

/// Number of periodic eigenvalues (with multiplicity) inside `rect`: the
/// winding number of Delta^2 - 4 along its boundary.
int count_in_rectangle(const DiscriminantEvaluator& ev, Rect rect);

struct LocalizationEntry {
  int n = 0;
  bool above = false;
  double displacement = 0;  // max |lambda_n^pm - n pi|, or max |lambda_n^pm| below threshold
  double bound = 0;         // displacement bound, or the box half-width
  bool ok = true;
};

struct LocalizationReport {
  std::vector<LocalizationEntry> entries;
  double worst_bound_margin = 0;  // min(bound - displacement) above threshold
  double worst_cap_margin = 0;    // min(pi/5 - displacement) above threshold
  double worst_box_margin = 0;    // min(half-width - |lambda|) below threshold
  int failures = 0;
  bool passed() const { return failures == 0; }
};

LocalizationReport localization_report(const PeriodicSpectrum& sp, const FourierPotential& phi);

struct GapIndexEntry {
  int n = 0;
  double lhs = 0;  // w_{2n} gamma_n
  double rhs = 0;  // 4 ||phi||_w
  bool above = false;
  bool ok = true;
};

struct GapReport {
  int N = 0;  // first index with <N> >= 8 ||phi||_w^2
  double weighted_norm = 0;
  double sum_lhs = 0;  // sum over N <= |n| <= n_max of w_{2n}^2 gamma_n^2
  double sum_rhs = 0;  // 6 ||R_N phi||_w^2 + 1152 ||phi||_w^6 / <N>
  std::vector<GapIndexEntry> entries;
  int failures = 0;
  /// collapsed gaps whose weighted resolution w_{2n} gapTol already exceeds the bound
  int unresolved = 0;
  bool passed() const { return failures == 0; }
};

/// Weighted gap-length sums and individual gap bounds. Throws a range error
/// when 8 ||phi||_w^2 needs indices beyond the located spectrum.
GapReport gap_report(const PeriodicSpectrum& sp, const FourierPotential& phi, const Weight& w);

}  // namespace birkhoff
