#pragma once

// Band-limited Zakharov-Shabat potentials, weights and the sequence norms
// built from them.
//
// Conventions. A potential is a pair phi = (phi_minus, phi_plus) of period-1
// functions stored by their Fourier coefficients on e^{2 pi i k x}, |k| <= K.
// Real type means phi_plus = conj(phi_minus); then psi = phi_minus and
//   psi(x) = sum_k c_k e^{2 pi i k x}.
// The resonant modes that couple e_n^- and e_n^+ in the 2-periodic basis are
//   mode_minus(n) = coefficient of e^{-2 pi i n x} in phi_minus,
//   mode_plus(n)  = coefficient of e^{+2 pi i n x} in phi_plus,
// so that ||phi||_w^2 = sum_n w_{2n}^2 (|mode_minus(n)|^2 + |mode_plus(n)|^2).

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace birkhoff {

using cplx = std::complex<double>;

/// <x> = 1 + |x|
inline double japanese(double x) { return 1.0 + (x < 0 ? -x : x); }

class FourierPotential {
 public:
  FourierPotential() = default;

  /// Real-type potential phi = (psi, conj psi) from the coefficients of psi.
  static FourierPotential real_type(const std::map<int, cplx>& psi);
  /// General pair (phi_minus, phi_plus); used for discriminant evaluation only.
  static FourierPotential pair(const std::map<int, cplx>& minus,
                               const std::map<int, cplx>& plus);
  static FourierPotential zero() { return real_type({}); }
  static FourierPotential constant(cplx a) { return real_type({{0, a}}); }

  int band() const { return band_; }
  bool is_real_type() const { return real_type_; }

  /// Coefficient of e^{2 pi i k x} in phi_minus (= psi for real type).
  cplx minus_coeff(int k) const;
  /// Coefficient of e^{2 pi i k x} in phi_plus.
  cplx plus_coeff(int k) const;
  cplx psi_coeff(int k) const { return minus_coeff(k); }

  cplx mode_minus(int n) const { return minus_coeff(-n); }
  cplx mode_plus(int n) const { return plus_coeff(n); }

  /// (phi_minus(x), phi_plus(x))
  std::pair<cplx, cplx> eval(double x) const;

  bool is_zero() const;
  /// Same potential with every coefficient multiplied by t.
  FourierPotential scaled(double t) const;

 private:
  int band_ = 0;
  bool real_type_ = true;
  std::vector<cplx> minus_{cplx{}};  // index k + band_
  std::vector<cplx> plus_{cplx{}};
};

enum class WeightKind { sobolev, abel, gevrey, log_light, custom };

/// Normalized submultiplicative weight on Z. Built-in kinds evaluate their
/// closed form at any index; custom weights are tables and raise a range
/// error outside the stored indices.
class Weight {
 public:
  static Weight sobolev(double s);
  static Weight abel(double s, double a);
  static Weight gevrey(double s, double a, double sigma);
  static Weight log_light(double s, double a, double sigma);
  /// Symmetric custom weight from w_0, w_1, ..., w_N.
  static Weight custom(std::vector<double> nonnegative);
  /// Custom table over -N..N (length 2N+1); need not be symmetric.
  static Weight custom_full(std::vector<double> full);

  WeightKind kind() const { return kind_; }
  double s() const { return s_; }
  double a() const { return a_; }
  double sigma() const { return sigma_; }
  std::string describe() const;

  /// Largest |n| at which the weight is defined (INT32_MAX for closed forms).
  int range() const;
  double operator()(int n) const;
  /// Piecewise linear extension w[t], t >= 0.
  double extend(double t) const;

  /// The table n -> w_n/<n> for |n| <= N, as a custom weight.
  Weight divided_by_linear(int N) const;

 private:
  WeightKind kind_ = WeightKind::sobolev;
  double s_ = 0, a_ = 0, sigma_ = 0;
  std::vector<double> table_;  // custom: index n + half_
  int half_ = 0;
};

struct WeightViolation {
  std::string axiom;  // "normalized", "symmetric", "submultiplicative", "monotone"
  int n = 0;
  int m = 0;
  double lhs = 0, rhs = 0;
};

struct WeightReport {
  int checked_range = 0;
  std::vector<WeightViolation> violations;
  bool valid() const { return violations.empty(); }
  /// w in M^1: w_n/<n> is itself a valid weight on the checked range.
  bool in_m1 = false;
};

/// Exhaustive check of the weight axioms on |n|, |m|, |n+m| <= N. N defaults
/// to the table range for custom weights and to 128 otherwise.
WeightReport validate_weight(const Weight& w, std::optional<int> N = {});

/// ||phi||_s, s >= 0.
double sobolev_norm(const FourierPotential& phi, double s);
double sobolev_norm_sq(const FourierPotential& phi, double s);
/// ||phi||_w; range error if the band exceeds the weight table.
double weighted_norm(const FourierPotential& phi, const Weight& w);
double weighted_norm_sq(const FourierPotential& phi, const Weight& w);
/// ||phi_minus||_w and ||phi_plus||_w separately.
double weighted_norm_minus(const FourierPotential& phi, const Weight& w);
double weighted_norm_plus(const FourierPotential& phi, const Weight& w);
/// ||R_N phi||_w^2 with R_N keeping the modes |n| >= N.
double tail_norm_sq(const FourierPotential& phi, const Weight& w, int N);
/// int_T |d^m psi/dx^m|^2 dx for a real-type potential.
double derivative_l2_sq(const FourierPotential& phi, int m);
/// int_T |psi|^4 dx for a real-type potential (exact finite convolution).
double quartic_integral(const FourierPotential& phi);

/// psi -> psi e^{2 pi i m x}; requires real type.
FourierPotential gauge_shift(const FourierPotential& phi, int m);

/// Seeded random real-type potential with c_k = amplitude * decay_k * e^{i theta_k},
/// decay_k = <2 pi k>^{-s-1} (times e^{-2a|k|} for Abel decay).
struct RandomPotentialSpec {
  int K = 8;
  enum class Decay { sobolev, abel } decay = Decay::sobolev;
  double s = 1.0;
  double a = 0.0;
  std::uint64_t seed = 0;
  double amplitude = 1.0;
};
FourierPotential random_potential(const RandomPotentialSpec& spec);

}  // namespace birkhoff
