#include "birkhoff/hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace birkhoff {

namespace {

constexpr double kPi = std::numbers::pi;

// Trigonometric polynomial stored as coefficients over -band..band.
struct Poly {
  int band = 0;
  std::vector<cplx> c{cplx{}};

  cplx at(int j) const { return std::abs(j) <= band ? c[j + band] : cplx{}; }
};

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  out.band = a.band + b.band;
  out.c.assign(2 * out.band + 1, cplx{});
  for (int i = -a.band; i <= a.band; ++i) {
    const cplx ai = a.c[i + a.band];
    if (ai == cplx{}) continue;
    for (int j = -b.band; j <= b.band; ++j) out.c[i + j + out.band] += ai * b.c[j + b.band];
  }
  return out;
}

Poly derivative(const Poly& a) {
  Poly out = a;
  for (int j = -a.band; j <= a.band; ++j) out.c[j + a.band] *= cplx{0.0, 2.0 * kPi * j};
  return out;
}

Poly widen(const Poly& a, int band) {
  if (band <= a.band) return a;
  Poly out;
  out.band = band;
  out.c.assign(2 * band + 1, cplx{});
  for (int j = -a.band; j <= a.band; ++j) out.c[j + band] = a.c[j + a.band];
  return out;
}

void add_into(Poly& acc, const Poly& a) {
  if (a.band > acc.band) acc = widen(acc, a.band);
  for (int j = -a.band; j <= a.band; ++j) acc.c[j + acc.band] += a.c[j + a.band];
}

// int f g dx over one period
cplx integral_of_product(const Poly& f, const Poly& g) {
  cplx s{};
  for (int j = -f.band; j <= f.band; ++j) s += f.c[j + f.band] * g.at(-j);
  return s;
}

double sign_of(HierarchySign mode, int k) {
  switch (mode) {
    case HierarchySign::calibrated: return k == 1 ? -1.0 : 1.0;
    case HierarchySign::alternating: return (k % 2 == 0) ? 1.0 : -1.0;
    case HierarchySign::paper_appendix: return 1.0;
  }
  return 1.0;
}

}  // namespace

HierarchySign parse_hierarchy_sign(const std::string& name) {
  if (name == "calibrated") return HierarchySign::calibrated;
  if (name == "alternating") return HierarchySign::alternating;
  if (name == "paper-appendix") return HierarchySign::paper_appendix;
  throw Error(ErrorKind::config, "unknown hierarchy sign '" + name + "'");
}

const char* to_string(HierarchySign sign) {
  switch (sign) {
    case HierarchySign::calibrated: return "calibrated";
    case HierarchySign::alternating: return "alternating";
    case HierarchySign::paper_appendix: return "paper-appendix";
  }
  return "calibrated";
}

cplx HierarchyEvaluation::hamiltonian(int k) const {
  if (k < 1 || k > k_max) throw Error(ErrorKind::range, "H_" + std::to_string(k) + " was not computed");
  return H[static_cast<std::size_t>(k)];
}

int HierarchyEvaluation::observed_band(int k) const {
  const auto& v = u.at(static_cast<std::size_t>(k));
  const int half = static_cast<int>(v.size() / 2);
  for (int j = half; j > 0; --j)
    if (v[half + j] != cplx{} || v[half - j] != cplx{}) return j;
  return 0;
}

HierarchyEvaluation hierarchy_compute(const FourierPotential& phi, int k_max, HierarchySign sign) {
  if (k_max < 1 || k_max > 9) throw Error(ErrorKind::range, "hierarchy supports 1 <= k_max <= 9");
  const int K = phi.band();
  HierarchyEvaluation ev;
  ev.k_max = k_max;
  ev.band = K;
  ev.sign = sign;
  ev.grid_size = static_cast<int>(std::bit_ceil(static_cast<unsigned>(4 * (K + 1) * (k_max + 1))));

  Poly minus, plus;
  minus.band = plus.band = K;
  minus.c.resize(2 * K + 1);
  plus.c.resize(2 * K + 1);
  for (int j = -K; j <= K; ++j) {
    minus.c[j + K] = phi.minus_coeff(j);
    plus.c[j + K] = phi.plus_coeff(j);
  }

  std::vector<Poly> u(static_cast<std::size_t>(k_max + 1));
  u[1] = plus;
  for (auto& c : u[1].c) c = -c;
  for (int k = 1; k < k_max; ++k) {
    Poly next = derivative(u[k]);
    Poly conv;
    for (int l = 1; l <= k - 1; ++l) add_into(conv, multiply(u[k - l], u[l]));
    if (k >= 2) add_into(next, multiply(minus, conv));
    u[k + 1] = widen(next, (k + 1) * K);
    if (u[k + 1].band > (k + 1) * K)
      throw Error(ErrorKind::range, "u_" + std::to_string(k + 1) + " exceeds its expected band");
  }

  ev.u.resize(static_cast<std::size_t>(k_max + 1));
  ev.H.assign(static_cast<std::size_t>(k_max + 1), cplx{});
  for (int k = 1; k <= k_max; ++k) {
    ev.u[k] = widen(u[k], k * K).c;
    ev.H[k] = sign_of(sign, k) * integral_of_product(minus, u[k]);
  }
  return ev;
}

TraceReport trace_check(const ActionSpectrum& as, const HierarchyEvaluation& h, int k, double tol) {
  TraceReport rep;
  rep.k = k;
  const NormValue sum = level_sum(as, k);
  rep.lhs = sum.truncated;
  rep.tail = sum.tail;
  if (k == 1) {
    rep.rhs = h.hamiltonian(1);
  } else {
    rep.rhs = -h.hamiltonian(k) / std::pow(cplx{0.0, 2.0}, k - 1);
  }
  // H_2 and friends can vanish for real-type potentials while the individual
  // J_{n,k} do not, so the absolute sum sets the scale as well.
  double abs_sum = 0;
  for (int n = -as.n_max; n <= as.n_max; ++n) abs_sum += std::abs(as.level(n, k));
  const double scale = std::max(std::abs(rep.rhs), abs_sum);
  const double worst = std::max(std::abs(rep.lhs - rep.tail - rep.rhs), std::abs(rep.lhs + rep.tail - rep.rhs));
  rep.residual = scale > 0 ? worst / scale : worst;
  rep.passed = rep.residual <= tol;
  return rep;
}

HformReport hform_check(const FourierPotential& phi, int m, HierarchySign sign) {
  if (!phi.is_real_type()) throw Error(ErrorKind::config, "hform_check requires a real-type potential");
  if (m < 1 || m > 3) throw Error(ErrorKind::range, "hform_check supports 1 <= m <= 3");
  HformReport rep;
  rep.m = m;
  const auto h = hierarchy_compute(phi, 2 * m + 1, sign);
  const cplx H = h.hamiltonian(2 * m + 1);
  rep.h_odd = ((m % 2 == 0) ? -1.0 : 1.0) * H.real();
  rep.derivative = derivative_l2_sq(phi, m);
  rep.remainder = rep.h_odd - rep.derivative;
  const double psi0sq = derivative_l2_sq(phi, 0);
  const double denom = (1.0 + std::pow(psi0sq, 2.0 * m)) * psi0sq;
  const double excess = std::max(0.0, std::abs(rep.remainder) - rep.derivative);
  rep.constant = denom > 0 ? excess / denom : 0.0;
  rep.passed = std::isfinite(rep.constant) && std::abs(H.imag()) <= 1e-10 * std::max(1.0, std::abs(H));
  return rep;
}

}  // namespace birkhoff
