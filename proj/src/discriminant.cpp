#include "birkhoff/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace birkhoff {

namespace {

constexpr cplx kI{0.0, 1.0};

// cosh(sqrt q), sinh(sqrt q)/sqrt q and their q-derivatives.
struct ExpCoeffs {
  cplx c, s, cq, sq, cqq, sqq;
};

constexpr int kTerms = 18;  // |q| < 4: truncation below 1e-20

struct SeriesTables {
  double c[kTerms], s[kTerms], sq[kTerms], sqq[kTerms];
  SeriesTables() {
    double f = 1.0;  // running factorial
    for (int k = 0; k < kTerms; ++k) {
      if (k > 0) f *= 2 * k;
      c[k] = 1.0 / f;
      f *= 2 * k + 1;
      s[k] = 1.0 / f;
    }
    for (int k = 0; k < kTerms; ++k) {
      sq[k] = k + 1 < kTerms ? (k + 1) * s[k + 1] : 0.0;
      sqq[k] = k + 2 < kTerms ? (k + 2) * (k + 1) * s[k + 2] : 0.0;
    }
  }
};

const SeriesTables& series() {
  static const SeriesTables t;
  return t;
}

inline cplx horner(const double* coef, cplx q) {
  cplx acc = coef[kTerms - 1];
  for (int k = kTerms - 2; k >= 0; --k) acc = acc * q + coef[k];
  return acc;
}

template <int Order>
ExpCoeffs exp_coeffs(cplx q) {
  ExpCoeffs e{};
  if (std::norm(q) < 16.0) {
    // C = sum q^k/(2k)!, S = sum q^k/(2k+1)!; the closed forms for the
    // q-derivatives lose digits as q -> 0.
    const SeriesTables& t = series();
    e.c = horner(t.c, q);
    e.s = horner(t.s, q);
    if constexpr (Order >= 1) e.sq = horner(t.sq, q);
    if constexpr (Order >= 2) e.sqq = horner(t.sqq, q);
  } else {
    const cplx r = std::sqrt(q);
    e.c = std::cosh(r);
    e.s = std::sinh(r) / r;
    if constexpr (Order >= 1) e.sq = (e.c - e.s) / (2.0 * q);
    if constexpr (Order >= 2) e.sqq = (e.s - 6.0 * e.sq) / (4.0 * q);
  }
  e.cq = 0.5 * e.s;
  e.cqq = 0.5 * e.sq;
  return e;
}

// out = a * b for row-major 2x2 blocks
inline void mul(const cplx* a, const cplx* b, cplx* out) {
  const cplx r0 = a[0] * b[0] + a[1] * b[2];
  const cplx r1 = a[0] * b[1] + a[1] * b[3];
  const cplx r2 = a[2] * b[0] + a[3] * b[2];
  const cplx r3 = a[2] * b[1] + a[3] * b[3];
  out[0] = r0;
  out[1] = r1;
  out[2] = r2;
  out[3] = r3;
}

inline void madd(const cplx* a, const cplx* b, cplx scale, cplx* acc) {
  acc[0] += scale * (a[0] * b[0] + a[1] * b[2]);
  acc[1] += scale * (a[0] * b[1] + a[1] * b[3]);
  acc[2] += scale * (a[2] * b[0] + a[3] * b[2]);
  acc[3] += scale * (a[2] * b[1] + a[3] * b[3]);
}

template <int Order, class Factor, class Mono>
void run(const std::vector<Factor>& factors, cplx lambda, Mono& out) {
  cplx M[4] = {1.0, 0.0, 0.0, 1.0};
  cplx dM[4] = {};
  cplx ddM[4] = {};
  for (const auto& f : factors) {
    const cplx d = f.d0 + lambda * f.d1;
    const cplx u = f.u0 + lambda * f.u1;
    const cplx l = f.l0 + lambda * f.l1;
    const cplx q = d * d + u * l;
    const ExpCoeffs e = exp_coeffs<Order>(q);
    const cplx E[4] = {e.c + e.s * d, e.s * u, e.s * l, e.c - e.s * d};
    if constexpr (Order >= 1) {
      const cplx qd = 2.0 * d * f.d1 + f.u1 * l + u * f.l1;
      const cplx a = e.cq * qd, b = e.sq * qd;
      const cplx Ed[4] = {a + b * d + e.s * f.d1, b * u + e.s * f.u1, b * l + e.s * f.l1,
                          a - b * d - e.s * f.d1};
      if constexpr (Order >= 2) {
        const cplx qdd = 2.0 * (f.d1 * f.d1 + f.u1 * f.l1);
        const cplx a2 = e.cqq * qd * qd + e.cq * qdd;
        const cplx b2 = e.sqq * qd * qd + e.sq * qdd;
        const cplx g = 2.0 * e.sq * qd;
        const cplx Edd[4] = {a2 + b2 * d + g * f.d1, b2 * u + g * f.u1, b2 * l + g * f.l1,
                             a2 - b2 * d - g * f.d1};
        cplx next[4];
        mul(E, ddM, next);
        madd(Ed, dM, 2.0, next);
        madd(Edd, M, 1.0, next);
        std::copy(next, next + 4, ddM);
      }
      cplx next[4];
      mul(E, dM, next);
      madd(Ed, M, 1.0, next);
      std::copy(next, next + 4, dM);
    }
    mul(E, M, M);
  }
  std::copy(M, M + 4, out.m);
  std::copy(dM, dM + 4, out.dm);
  std::copy(ddM, ddM + 4, out.ddm);
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

int required_subintervals(const FourierPotential& phi, int n_max) {
  const int need = std::max(0, n_max) + 2 * phi.band() + 16;
  return (need + 15) / 16 * 16;
}

DiscriminantEvaluator::DiscriminantEvaluator(FourierPotential phi, DiscriminantOptions opts)
    : phi_(std::move(phi)), opts_(opts) {
  n_ = opts_.subintervals > 0 ? opts_.subintervals
                              : std::max({256, 16 * phi_.band(), required_subintervals(phi_, opts_.index_reach)});
  if (n_ < 8) throw Error(ErrorKind::config, "discriminant needs at least 8 subintervals");
  if (n_ % 2 != 0) ++n_;  // the coarse companion uses n/2
  fine_ = build(phi_, n_, opts_.scheme);
  if (opts_.error_estimate || opts_.richardson) coarse_ = build(phi_, n_ / 2, opts_.scheme);
}

std::vector<DiscriminantEvaluator::Factor> DiscriminantEvaluator::build(const FourierPotential& phi,
                                                                        int n, Scheme scheme) {
  std::vector<Factor> out(n);
  const double h = 1.0 / n;
  // Q = [[0, p], [r, 0]] with p = i phi_minus, r = -i phi_plus
  auto coupling = [&phi](double x) {
    const auto [m, p] = phi.eval(x);
    return std::pair<cplx, cplx>{kI * m, -kI * p};
  };
  for (int j = 0; j < n; ++j) {
    const double x0 = j * h;
    Factor f{};
    if (scheme == Scheme::midpoint) {
      const auto [p, r] = coupling(x0 + 0.5 * h);
      f.u0 = h * p;
      f.l0 = h * r;
      f.d1 = -kI * h;
    } else {
      const double off = std::sqrt(3.0) / 6.0;
      const auto [p1, r1] = coupling(x0 + h * (0.5 - off));
      const auto [p2, r2] = coupling(x0 + h * (0.5 + off));
      const double c = std::sqrt(3.0) * h * h / 12.0;
      f.d0 = c * (p2 * r1 - p1 * r2);
      f.u0 = 0.5 * h * (p1 + p2);
      f.l0 = 0.5 * h * (r1 + r2);
      f.d1 = -kI * h;
      f.u1 = -2.0 * kI * c * (p1 - p2);
      f.l1 = 2.0 * kI * c * (r1 - r2);
    }
    out[j] = f;
  }
  return out;
}

DiscriminantEvaluator::Monodromy DiscriminantEvaluator::propagate(const std::vector<Factor>& factors,
                                                                  cplx lambda, int order) const {
  Monodromy mono;
  switch (order) {
    case 0: run<0>(factors, lambda, mono); break;
    case 1: run<1>(factors, lambda, mono); break;
    default: run<2>(factors, lambda, mono); break;
  }
  return mono;
}

DiscriminantEvaluator::Monodromy DiscriminantEvaluator::combined(cplx lambda, int order) const {
  if (!(std::abs(lambda) <= opts_.lambda_cap))
    throw Error(ErrorKind::range, "|lambda| exceeds the configured cap");
  Monodromy fine = propagate(fine_, lambda, order);
  if (!opts_.richardson) return fine;
  const Monodromy coarse = propagate(coarse_, lambda, order);
  const double p = opts_.scheme == Scheme::midpoint ? 2.0 : 4.0;
  const double w = std::pow(2.0, p);
  for (int i = 0; i < 4; ++i) {
    fine.m[i] = (w * fine.m[i] - coarse.m[i]) / (w - 1.0);
    fine.dm[i] = (w * fine.dm[i] - coarse.dm[i]) / (w - 1.0);
    fine.ddm[i] = (w * fine.ddm[i] - coarse.ddm[i]) / (w - 1.0);
  }
  return fine;
}

DiscriminantSample DiscriminantEvaluator::sample_from(const Monodromy& mono, cplx lambda) const {
  DiscriminantSample s;
  s.lambda = lambda;
  s.delta = mono.m[0] + mono.m[3];
  s.delta_dot = mono.dm[0] + mono.dm[3];
  s.delta_ddot = mono.ddm[0] + mono.ddm[3];
  const cplx diff = mono.m[0] - mono.m[3];
  s.gap_function = 0.25 * diff * diff + mono.m[1] * mono.m[2];
  if (!finite(s.delta) || !finite(s.delta_dot) || !finite(s.delta_ddot) || !finite(s.gap_function))
    throw Error(ErrorKind::overflow,
                "non-finite monodromy at lambda = (" + std::to_string(lambda.real()) + ", " +
                    std::to_string(lambda.imag()) + "); reduce |Im lambda|");
  return s;
}

DiscriminantSample DiscriminantEvaluator::evaluate_fast(cplx lambda, int order) const {
  return sample_from(combined(lambda, order), lambda);
}

DiscriminantSample DiscriminantEvaluator::evaluate(cplx lambda) const {
  DiscriminantSample s = sample_from(combined(lambda, 2), lambda);
  if (opts_.error_estimate) {
    const Monodromy coarse = propagate(coarse_, lambda, 0);
    const cplx dc = coarse.m[0] + coarse.m[3];
    const double p = opts_.scheme == Scheme::midpoint ? 2.0 : 4.0;
    s.error_estimate =
        std::abs(s.delta - dc) / (std::pow(2.0, p) - 1.0) / std::max(1.0, std::abs(s.delta));
    if (!std::isfinite(s.error_estimate)) s.error_estimate = 0.0;
  }
  return s;
}

std::vector<GridEntry> DiscriminantEvaluator::evaluate_grid(std::span<const cplx> lambdas,
                                                            Execution exec) const {
  return parallel_map(
      lambdas.size(),
      [&](std::size_t i) {
        GridEntry entry;
        try {
          entry.sample = evaluate(lambdas[i]);
        } catch (const Error& e) {
          entry.ok = false;
          entry.kind = e.kind();
          entry.message = e.what();
          entry.sample.lambda = lambdas[i];
        }
        return entry;
      },
      exec);
}

}  // namespace birkhoff
