#include "birkhoff/potentials.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "birkhoff/errors.hpp"
#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {

constexpr double kPi = std::numbers::pi;

int band_of(const std::map<int, cplx>& coeffs) {
  int K = 0;
  for (const auto& [k, c] : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::config, "non-finite Fourier coefficient at k=" + std::to_string(k));
    if (c != cplx{}) K = std::max(K, std::abs(k));
  }
  return K;
}

std::vector<cplx> dense(const std::map<int, cplx>& coeffs, int K) {
  std::vector<cplx> out(2 * K + 1);
  for (const auto& [k, c] : coeffs)
    if (std::abs(k) <= K) out[k + K] = c;
  return out;
}

}  // namespace

FourierPotential FourierPotential::real_type(const std::map<int, cplx>& psi) {
  FourierPotential p;
  p.band_ = band_of(psi);
  p.real_type_ = true;
  p.minus_ = dense(psi, p.band_);
  p.plus_.resize(p.minus_.size());
  for (int k = -p.band_; k <= p.band_; ++k)
    p.plus_[k + p.band_] = std::conj(p.minus_[-k + p.band_]);
  return p;
}

FourierPotential FourierPotential::pair(const std::map<int, cplx>& minus,
                                        const std::map<int, cplx>& plus) {
  FourierPotential p;
  p.band_ = std::max(band_of(minus), band_of(plus));
  p.real_type_ = false;
  p.minus_ = dense(minus, p.band_);
  p.plus_ = dense(plus, p.band_);
  return p;
}

cplx FourierPotential::minus_coeff(int k) const {
  return std::abs(k) <= band_ ? minus_[k + band_] : cplx{};
}

cplx FourierPotential::plus_coeff(int k) const {
  return std::abs(k) <= band_ ? plus_[k + band_] : cplx{};
}

std::pair<cplx, cplx> FourierPotential::eval(double x) const {
  cplx m{}, p{};
  for (int k = -band_; k <= band_; ++k) {
    const double arg = 2.0 * kPi * k * x;
    const cplx e{std::cos(arg), std::sin(arg)};
    m += minus_[k + band_] * e;
    p += plus_[k + band_] * e;
  }
  return {m, p};
}

bool FourierPotential::is_zero() const {
  return std::all_of(minus_.begin(), minus_.end(), [](cplx c) { return c == cplx{}; }) &&
         std::all_of(plus_.begin(), plus_.end(), [](cplx c) { return c == cplx{}; });
}

FourierPotential FourierPotential::scaled(double t) const {
  FourierPotential p = *this;
  for (auto& c : p.minus_) c *= t;
  for (auto& c : p.plus_) c *= t;
  return p;
}

// ---------------------------------------------------------------- weights

Weight Weight::sobolev(double s) {
  if (s < 0) throw Error(ErrorKind::config, "Sobolev exponent must be >= 0");
  Weight w;
  w.kind_ = WeightKind::sobolev;
  w.s_ = s;
  return w;
}

Weight Weight::abel(double s, double a) {
  if (s < 0 || a <= 0) throw Error(ErrorKind::config, "Abel weight needs s >= 0, a > 0");
  Weight w;
  w.kind_ = WeightKind::abel;
  w.s_ = s;
  w.a_ = a;
  return w;
}

Weight Weight::gevrey(double s, double a, double sigma) {
  if (s < 0 || a <= 0 || sigma <= 0 || sigma >= 1)
    throw Error(ErrorKind::config, "Gevrey weight needs s >= 0, a > 0, 0 < sigma < 1");
  Weight w;
  w.kind_ = WeightKind::gevrey;
  w.s_ = s;
  w.a_ = a;
  w.sigma_ = sigma;
  return w;
}

Weight Weight::log_light(double s, double a, double sigma) {
  if (s < 0 || a <= 0 || sigma <= 0 || sigma >= 1)
    throw Error(ErrorKind::config, "log-light weight needs s >= 0, a > 0, 0 < sigma < 1");
  Weight w;
  w.kind_ = WeightKind::log_light;
  w.s_ = s;
  w.a_ = a;
  w.sigma_ = sigma;
  return w;
}

Weight Weight::custom(std::vector<double> nonnegative) {
  if (nonnegative.empty()) throw Error(ErrorKind::config, "custom weight table is empty");
  const int N = static_cast<int>(nonnegative.size()) - 1;
  std::vector<double> full(2 * N + 1);
  for (int n = -N; n <= N; ++n) full[n + N] = nonnegative[std::abs(n)];
  return custom_full(std::move(full));
}

Weight Weight::custom_full(std::vector<double> full) {
  if (full.size() % 2 == 0) throw Error(ErrorKind::config, "full weight table must have odd length 2N+1");
  for (double v : full)
    if (!std::isfinite(v)) throw Error(ErrorKind::config, "non-finite weight table entry");
  Weight w;
  w.kind_ = WeightKind::custom;
  w.half_ = static_cast<int>(full.size() / 2);
  w.table_ = std::move(full);
  return w;
}

std::string Weight::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case WeightKind::sobolev: os << "sobolev(s=" << s_ << ")"; break;
    case WeightKind::abel: os << "abel(s=" << s_ << ",a=" << a_ << ")"; break;
    case WeightKind::gevrey: os << "gevrey(s=" << s_ << ",a=" << a_ << ",sigma=" << sigma_ << ")"; break;
    case WeightKind::log_light: os << "log_light(s=" << s_ << ",a=" << a_ << ",sigma=" << sigma_ << ")"; break;
    case WeightKind::custom: os << "custom(N=" << half_ << ")"; break;
  }
  return os.str();
}

int Weight::range() const { return kind_ == WeightKind::custom ? half_ : INT32_MAX; }

double Weight::operator()(int n) const {
  const double an = std::abs(static_cast<double>(n));
  switch (kind_) {
    case WeightKind::sobolev:
      return std::pow(japanese(an * kPi), s_);
    case WeightKind::abel:
      return std::pow(japanese(an * kPi), s_) * std::exp(a_ * an);
    case WeightKind::gevrey:
      return std::pow(japanese(an * kPi), s_) * std::exp(a_ * std::pow(an, sigma_));
    case WeightKind::log_light:
      return std::pow(japanese(an * kPi), s_) *
             std::exp(a_ * an / (1.0 + std::pow(std::log(japanese(an)), sigma_)));
    case WeightKind::custom:
      if (std::abs(n) > half_)
        throw Error(ErrorKind::range, "weight index " + std::to_string(n) + " beyond table range " +
                                          std::to_string(half_));
      return table_[n + half_];
  }
  return 1.0;
}

double Weight::extend(double t) const {
  if (!(t >= 0)) throw Error(ErrorKind::range, "weight extension needs t >= 0");
  if (t > static_cast<double>(range()))
    throw Error(ErrorKind::range, "weight extension beyond table range");
  const double lo = std::floor(t);
  const int n = static_cast<int>(lo);
  const double frac = t - lo;
  if (frac == 0.0) return (*this)(n);
  return (1.0 - frac) * (*this)(n) + frac * (*this)(n + 1);
}

Weight Weight::divided_by_linear(int N) const {
  const int top = std::min(N, range());
  std::vector<double> full(2 * top + 1);
  for (int n = -top; n <= top; ++n) full[n + top] = (*this)(n) / japanese(n);
  return custom_full(std::move(full));
}

namespace {

void check_axioms(const Weight& w, int N, std::vector<WeightViolation>& out) {
  constexpr double kRel = 1e-12;
  for (int n = -N; n <= N; ++n) {
    const double wn = w(n);
    if (!(wn >= 1.0 - kRel)) out.push_back({"normalized", n, 0, wn, 1.0});
    const double wm = w(-n);
    if (std::abs(wn - wm) > kRel * std::max(wn, wm)) out.push_back({"symmetric", n, -n, wn, wm});
  }
  for (int n = 0; n < N; ++n) {
    const double a = w(n), b = w(n + 1);
    if (a > b * (1 + kRel)) out.push_back({"monotone", n, n + 1, a, b});
    const double c = w(-n), d = w(-n - 1);
    if (c > d * (1 + kRel)) out.push_back({"monotone", -n, -n - 1, c, d});
  }
  for (int n = -N; n <= N; ++n) {
    for (int m = -N; m <= N; ++m) {
      const int k = n + m;
      if (std::abs(k) > N) continue;
      const double lhs = w(k), rhs = w(n) * w(m);
      if (lhs > rhs * (1 + kRel)) out.push_back({"submultiplicative", n, m, lhs, rhs});
    }
  }
}

}  // namespace

WeightReport validate_weight(const Weight& w, std::optional<int> N) {
  WeightReport report;
  const int range = N ? *N : (w.kind() == WeightKind::custom ? w.range() : 128);
  report.checked_range = std::min(range, w.range());
  check_axioms(w, report.checked_range, report.violations);
  std::vector<WeightViolation> quotient;
  check_axioms(w.divided_by_linear(report.checked_range), report.checked_range, quotient);
  report.in_m1 = report.violations.empty() && quotient.empty();
  return report;
}

// ------------------------------------------------------------------ norms

namespace {

template <class WeightFn>
double mode_sum(const FourierPotential& phi, WeightFn weight_sq, bool minus, bool plus) {
  std::vector<double> terms;
  terms.reserve(2 * (2 * phi.band() + 1));
  for (int n = -phi.band(); n <= phi.band(); ++n) {
    const double w2 = weight_sq(n);
    if (minus) terms.push_back(w2 * std::norm(phi.mode_minus(n)));
    if (plus) terms.push_back(w2 * std::norm(phi.mode_plus(n)));
  }
  return pairwise_sum(terms);
}

void require_range(const FourierPotential& phi, const Weight& w) {
  if (2LL * phi.band() > w.range())
    throw Error(ErrorKind::range, "potential band " + std::to_string(phi.band()) +
                                      " needs weight index " + std::to_string(2 * phi.band()) +
                                      " beyond table range " + std::to_string(w.range()));
}

}  // namespace

double sobolev_norm_sq(const FourierPotential& phi, double s) {
  if (s < 0) throw Error(ErrorKind::range, "Sobolev exponent must be >= 0");
  return mode_sum(
      phi, [s](int n) { return std::pow(japanese(2.0 * n * kPi), 2.0 * s); }, true, true);
}

double sobolev_norm(const FourierPotential& phi, double s) { return std::sqrt(sobolev_norm_sq(phi, s)); }

double weighted_norm_sq(const FourierPotential& phi, const Weight& w) {
  require_range(phi, w);
  return mode_sum(phi, [&w](int n) { const double v = w(2 * n); return v * v; }, true, true);
}

double weighted_norm(const FourierPotential& phi, const Weight& w) { return std::sqrt(weighted_norm_sq(phi, w)); }

double weighted_norm_minus(const FourierPotential& phi, const Weight& w) {
  require_range(phi, w);
  return std::sqrt(mode_sum(phi, [&w](int n) { const double v = w(2 * n); return v * v; }, true, false));
}

double weighted_norm_plus(const FourierPotential& phi, const Weight& w) {
  require_range(phi, w);
  return std::sqrt(mode_sum(phi, [&w](int n) { const double v = w(2 * n); return v * v; }, false, true));
}

double tail_norm_sq(const FourierPotential& phi, const Weight& w, int N) {
  require_range(phi, w);
  return mode_sum(
      phi,
      [&w, N](int n) {
        if (std::abs(n) < N) return 0.0;
        const double v = w(2 * n);
        return v * v;
      },
      true, true);
}

double derivative_l2_sq(const FourierPotential& phi, int m) {
  std::vector<double> terms;
  for (int k = -phi.band(); k <= phi.band(); ++k)
    terms.push_back(std::pow(2.0 * kPi * k, 2.0 * m) * std::norm(phi.psi_coeff(k)));
  return pairwise_sum(terms);
}

double quartic_integral(const FourierPotential& phi) {
  // |psi|^2 has coefficients r_j = sum_k c_{k+j} conj(c_k); int |psi|^4 = sum_j |r_j|^2.
  const int K = phi.band();
  std::vector<double> terms;
  for (int j = -2 * K; j <= 2 * K; ++j) {
    cplx r{};
    for (int k = -K; k <= K; ++k) r += phi.psi_coeff(k + j) * std::conj(phi.psi_coeff(k));
    terms.push_back(std::norm(r));
  }
  return pairwise_sum(terms);
}

FourierPotential gauge_shift(const FourierPotential& phi, int m) {
  if (!phi.is_real_type()) throw Error(ErrorKind::config, "gauge_shift requires a real-type potential");
  std::map<int, cplx> shifted;
  for (int k = -phi.band(); k <= phi.band(); ++k)
    if (phi.psi_coeff(k) != cplx{}) shifted[k + m] = phi.psi_coeff(k);
  return FourierPotential::real_type(shifted);
}

FourierPotential random_potential(const RandomPotentialSpec& spec) {
  if (spec.K < 0) throw Error(ErrorKind::config, "random potential needs K >= 0");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::map<int, cplx> coeffs;
  for (int k = -spec.K; k <= spec.K; ++k) {
    double decay = std::pow(japanese(2.0 * kPi * k), -spec.s - 1.0);
    if (spec.decay == RandomPotentialSpec::Decay::abel) decay *= std::exp(-2.0 * spec.a * std::abs(k));
    coeffs[k] = spec.amplitude * decay * std::polar(1.0, angle(rng));
  }
  return FourierPotential::real_type(coeffs);
}

}  // namespace birkhoff
