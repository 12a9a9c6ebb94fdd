#include "birkhoff/lyapunov_schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>

namespace birkhoff {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

void require_threshold(const FourierPotential& phi, int n) {
  const double bound = 8.0 * sobolev_norm_sq(phi, 1.0);
  if (japanese(n) < bound)
    throw Error(ErrorKind::threshold, "<" + std::to_string(n) + "> is below 8 ||phi||_1^2 = " + std::to_string(bound));
}

double largest_singular_value(const Mat& b) {
  if (b.size() == 0) return 0.0;
  const Mat gram = b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// Products with the anti-diagonal blocks for one value of D.
struct Blocks {
  const Mat& phi_mp;
  const Mat& phi_pm;
  const Vec& d;
  Vec t_mp(const Vec& v) const { return phi_mp * d.cwiseProduct(v); }
  Vec t_pm(const Vec& v) const { return phi_pm * d.cwiseProduct(v); }
};

}  // namespace

ReductionWorkspace::ReductionWorkspace(const FourierPotential& phi, int n, int truncation)
    : phi_(phi), n_(n) {
  const int K = phi.band();
  const int floor_kt = std::abs(n) + 8 * K;
  kt_ = truncation > 0 ? std::max(truncation, floor_kt) : 4 * (std::abs(n) + K + 8);
  int lo = -kt_;
  if ((lo - n) % 2 != 0) ++lo;
  for (int m = lo; m <= kt_; m += 2) modes_.push_back(m);
  pos_n_ = (n - lo) / 2;

  const int S = size();
  phi_mp_ = Mat::Zero(S, S);
  phi_pm_ = Mat::Zero(S, S);
  for (int c = 0; c < S; ++c) {
    for (int r = 0; r < S; ++r) {
      const int k = (modes_[r] + modes_[c]) / 2;
      if (std::abs(k) > K) continue;
      phi_mp_(r, c) = phi.mode_minus(k);
      phi_pm_(r, c) = phi.mode_plus(k);
    }
  }
}

void ReductionWorkspace::check_strip(cplx lambda) const {
  if (!(std::abs(lambda.real() - n_ * kPi) <= 0.5 * kPi + 1e-12))
    throw Error(ErrorKind::range, "lambda lies outside the strip of index " + std::to_string(n_));
}

Vec ReductionWorkspace::resolvent(cplx lambda) const {
  Vec d(size());
  for (int i = 0; i < size(); ++i) d(i) = i == pos_n_ ? cplx{} : 1.0 / (lambda - modes_[i] * kPi);
  return d;
}

LsCoefficients ls_coefficients(const ReductionWorkspace& ws, cplx lambda, bool derivatives, bool enforce_threshold) {
  if (enforce_threshold) require_threshold(ws.potential(), ws.n());
  ws.check_strip(lambda);
  const int S = ws.size();
  const int pn = ws.position_of_n();
  const Vec d = ws.resolvent(lambda);
  const Blocks t{ws.phi_minus_plus(), ws.phi_plus_minus(), d};

  // T^2 on the e^- block is banded: Phi only couples modes with |j + m| <= 2K
  const int K = ws.potential().band();
  const auto& modes = ws.modes();
  const int lo = modes.front();
  auto span_of = [&](int m, int& first, int& last) {
    first = std::max(0, (-m - 2 * K - lo + 1) / 2);
    last = std::min(S - 1, (-m + 2 * K - lo) / 2);
  };
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(static_cast<std::size_t>(S) * (4 * K + 2));
  std::vector<cplx> column(static_cast<std::size_t>(S));
  for (int c = 0; c < S; ++c) {
    std::fill(column.begin(), column.end(), cplx{});
    int j0, j1;
    span_of(modes[c], j0, j1);
    int r_min = S, r_max = -1;
    for (int j = j0; j <= j1; ++j) {
      const cplx inner = ws.phi_plus_minus()(j, c) * d(c) * d(j);
      if (inner == cplx{}) continue;
      int r0, r1;
      span_of(modes[j], r0, r1);
      for (int r = r0; r <= r1; ++r) column[r] += ws.phi_minus_plus()(r, j) * inner;
      r_min = std::min(r_min, r0);
      r_max = std::max(r_max, r1);
    }
    bool diag = false;
    for (int r = r_min; r <= r_max; ++r) {
      const cplx v = (r == c ? 1.0 : 0.0) - column[r];
      if (r == c) diag = true;
      if (v != cplx{}) entries.emplace_back(r, c, v);
    }
    if (!diag) entries.emplace_back(c, c, 1.0);
  }
  Eigen::SparseMatrix<cplx> lhs(S, S);
  lhs.setFromTriplets(entries.begin(), entries.end());
  lhs.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::NaturalOrdering<int>> lu;
  lu.compute(lhs);

  LsCoefficients out;
  out.lambda = lambda;
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::conditioning, "I - T_n^2 is numerically singular at index " + std::to_string(ws.n()));

  const Vec v = ws.phi_minus_plus().col(pn);  // Phi e_n^+
  const Vec u = ws.phi_plus_minus().col(pn);  // Phi e_n^-
  const Vec x = lu.solve(v);
  const Vec tx = t.t_pm(x);
  const Vec z = lu.solve(t.t_mp(u));
  const Vec y = u + t.t_pm(z);
  const Vec ty = t.t_mp(y);
  out.b_minus = x(pn);
  out.a_plus = tx(pn);
  out.b_plus = y(pn);
  out.a_minus = ty(pn);

  const double amax = std::max(std::abs(out.a_plus), std::abs(out.a_minus));
  const double adiff = std::abs(out.a_plus - out.a_minus);
  out.symmetry = amax > 0 ? adiff / amax : adiff;

  if (derivatives) {
    const Vec dd = -d.cwiseProduct(d);
    const Blocks tp{ws.phi_minus_plus(), ws.phi_plus_minus(), dd};
    auto m_dot = [&](const Vec& w) { return Vec(tp.t_mp(t.t_pm(w)) + t.t_mp(tp.t_pm(w))); };
    const Vec dx = lu.solve(m_dot(x));
    const Vec dz = lu.solve(Vec(m_dot(z) + tp.t_mp(u)));
    const Vec dy = tp.t_pm(z) + t.t_pm(dz);
    out.db_minus = dx(pn);
    out.db_plus = dy(pn);
    const cplx da_plus = (tp.t_pm(x) + t.t_pm(dx))(pn);
    const cplx da_minus = (tp.t_mp(y) + t.t_mp(dy))(pn);
    out.da = 0.5 * (da_plus + da_minus);
  }
  if (!std::isfinite(std::abs(out.a_plus) + std::abs(out.b_plus) + std::abs(out.b_minus) + std::abs(out.a_minus)))
    throw Error(ErrorKind::conditioning, "non-finite reduction coefficients at index " + std::to_string(ws.n()));
  return out;
}

namespace {

struct FactorResult {
  cplx root{};
  int iterations = 0;
  bool ok = false;
};

// Newton on lambda - n pi - a(lambda) - sign sigma(lambda), sigma^2 = b^+ b^-,
// following the branch of sigma closest to the previous iterate.
FactorResult newton_factor(const ReductionWorkspace& ws, cplx seed, double sign, cplx sigma_prev,
                           bool enforce_threshold) {
  FactorResult res;
  cplx lam = seed;
  const double npi = ws.n() * kPi;
  for (int it = 1; it <= 60; ++it) {
    if (std::abs(lam.real() - npi) > 0.5 * kPi) return res;
    const auto c = ls_coefficients(ws, lam, true, enforce_threshold);
    const cplx bb = c.b_plus * c.b_minus;
    cplx sigma = std::sqrt(bb);
    if (std::abs(sigma + sigma_prev) < std::abs(sigma - sigma_prev)) sigma = -sigma;
    sigma_prev = sigma;
    cplx dsigma{};
    if (sigma != cplx{}) {
      dsigma = (c.db_plus * c.b_minus + c.b_plus * c.db_minus) / (2.0 * sigma);
      // near a simple zero of b^+ b^- sigma is not differentiable; fall back
      // to the fixed-point step, which contracts since |a'| is small
      if (!std::isfinite(std::abs(dsigma)) || std::abs(dsigma) > 0.5) dsigma = {};
    }
    const cplx g = lam - npi - c.a() - sign * sigma;
    const cplx dg = 1.0 - c.da - sign * dsigma;
    const cplx step = g / dg;
    lam -= step;
    res.iterations = it;
    if (!std::isfinite(std::abs(lam))) return res;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(lam))) {
      res.root = lam;
      res.ok = std::abs(lam.real() - npi) <= 0.5 * kPi;
      return res;
    }
  }
  return res;
}

}  // namespace

LsRoots detS_roots(const ReductionWorkspace& ws, bool enforce_threshold) {
  const FourierPotential& phi = ws.potential();
  if (enforce_threshold) require_threshold(phi, ws.n());
  const double norm1 = sobolev_norm(phi, 1.0);
  LsRoots out;
  out.disc_radius = norm1 * norm1 / japanese(ws.n()) + std::sqrt(2.0) * norm1 / japanese(2.0 * ws.n());

  const cplx center{ws.n() * kPi, 0.0};
  const auto c0 = ls_coefficients(ws, center, false, enforce_threshold);
  const cplx sigma0 = std::sqrt(c0.b_plus * c0.b_minus);
  const double spread = 0.25 * std::max(out.disc_radius, 1e-6);
  const cplx offsets[] = {{spread, 0}, {-spread, 0}, {0, spread}, {0, -spread}};

  for (double sign : {1.0, -1.0}) {
    const cplx seed = center + c0.a() + sign * sigma0;
    FactorResult r = newton_factor(ws, seed, sign, sigma0, enforce_threshold);
    out.iterations += r.iterations;
    for (int k = 0; k < 4 && !r.ok; ++k) {
      ++out.retries;
      r = newton_factor(ws, seed + offsets[k], sign, sigma0, enforce_threshold);
      out.iterations += r.iterations;
    }
    if (!r.ok)
      throw Error(ErrorKind::convergence, "Newton on det S_n failed at index " + std::to_string(ws.n()));
    (sign > 0 ? out.xi_plus : out.xi_minus) = r.root;
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(center));
  out.in_disc = std::abs(out.xi_plus - center) <= out.disc_radius + slack &&
                std::abs(out.xi_minus - center) <= out.disc_radius + slack;
  return out;
}

OperatorNormReport operator_norm_checks(const ReductionWorkspace& ws, cplx lambda, const Weight& w) {
  ws.check_strip(lambda);
  OperatorNormReport rep;
  rep.n = ws.n();
  rep.lambda = lambda;
  rep.weighted_norm = weighted_norm(ws.potential(), w);
  rep.t_bound = 2.0 * rep.weighted_norm;
  rep.t2_bound = 4.0 * rep.weighted_norm * rep.weighted_norm / japanese(ws.n());

  const int S = ws.size();
  const auto& modes = ws.modes();
  auto weights = [&](int shift) {
    Eigen::VectorXd v(S);
    for (int i = 0; i < S; ++i) v(i) = w(modes[i] + shift);
    return v;
  };
  const Vec d = ws.resolvent(lambda);
  const Mat t_mp = ws.phi_minus_plus() * d.asDiagonal();
  const Mat t_pm = ws.phi_plus_minus() * d.asDiagonal();

  // ||T f||_{w;i} <= C ||f||_{w;-i}:  W_i T W_{-i}^{-1}
  for (int shift : {0, ws.n()}) {
    const Eigen::VectorXd wi = weights(shift);
    const Eigen::VectorXd wmi_inv = weights(-shift).cwiseInverse();
    for (const Mat* block : {&t_mp, &t_pm}) {
      const Mat b = wi.asDiagonal() * (*block) * wmi_inv.asDiagonal();
      rep.t_norm = std::max(rep.t_norm, largest_singular_value(b));
    }
  }
  const Eigen::VectorXd wn = weights(ws.n());
  const Eigen::VectorXd wn_inv = wn.cwiseInverse();
  for (const Mat& sq : {Mat(t_mp * t_pm), Mat(t_pm * t_mp)}) {
    const Mat b = wn.asDiagonal() * sq * wn_inv.asDiagonal();
    rep.t2_norm = std::max(rep.t2_norm, largest_singular_value(b));
  }
  const double slack = 1e-12;
  rep.passed = rep.t_norm <= rep.t_bound * (1 + slack) + 1e-300 && rep.t2_norm <= rep.t2_bound * (1 + slack) + 1e-300;
  return rep;
}

LsCheck ls_check(const FourierPotential& phi, int n, const Weight& w, const PeriodicSpectrum* sp, int truncation,
                 double root_tol) {
  const ReductionWorkspace ws(phi, n, truncation);
  LsCheck out;
  out.n = n;
  out.truncation = ws.truncation();
  out.roots = detS_roots(ws);

  bool roots_ok = out.roots.in_disc;
  if (sp != nullptr && std::abs(n) <= sp->n_max) {
    const GapRecord& g = sp->at(n);
    out.lambda_minus = g.lambda_minus;
    out.lambda_plus = g.lambda_plus;
    cplx lo = out.roots.xi_minus, hi = out.roots.xi_plus;
    if (lo.real() > hi.real()) std::swap(lo, hi);
    out.root_error = std::max(std::abs(lo - g.lambda_minus), std::abs(hi - g.lambda_plus));
    roots_ok = roots_ok && out.root_error <= root_tol;
  }

  const double wnorm = weighted_norm(phi, w);
  const double wn2 = w(2 * n);
  out.coefficient_bounds_apply = japanese(n) >= 8.0 * wnorm * wnorm;
  out.a_bound = wnorm * wnorm / japanese(n);
  out.b_bound_plus = 8.0 * wnorm * wnorm * weighted_norm_plus(phi, w) / japanese(n);
  out.b_bound_minus = 8.0 * wnorm * wnorm * weighted_norm_minus(phi, w) / japanese(n);

  std::vector<cplx> samples;
  for (double re : {-0.5, -0.25, 0.0, 0.25, 0.5})
    for (double im : {0.0, 0.5, 1.5}) samples.emplace_back(n * kPi + re * kPi, im);
  samples.push_back(out.roots.xi_plus);
  samples.push_back(out.roots.xi_minus);
  for (const cplx& lam : samples) {
    const auto c = ls_coefficients(ws, lam);
    out.worst_symmetry = std::max(out.worst_symmetry, c.symmetry);
    out.a_sup = std::max({out.a_sup, std::abs(c.a_plus), std::abs(c.a_minus)});
    out.b_dev_plus = std::max(out.b_dev_plus, wn2 * std::abs(c.b_plus - phi.mode_plus(n)));
    out.b_dev_minus = std::max(out.b_dev_minus, wn2 * std::abs(c.b_minus - phi.mode_minus(n)));
    out.bb_sup = std::max(out.bb_sup, std::abs(c.b_plus * c.b_minus));
  }
  out.gap_sq = std::norm(out.roots.xi_plus - out.roots.xi_minus);
  out.norms = operator_norm_checks(ws, cplx{n * kPi, 0.0}, w);

  const double floor = std::pow(4e-14 * std::max(1.0, std::abs(n) * kPi), 2);
  bool ok = roots_ok && out.worst_symmetry <= 1e-9 && out.gap_sq <= 6.0 * out.bb_sup + floor && out.norms.passed;
  if (out.coefficient_bounds_apply)
    ok = ok && out.a_sup <= out.a_bound && out.b_dev_plus <= out.b_bound_plus && out.b_dev_minus <= out.b_bound_minus;
  out.passed = ok;
  return out;
}

}  // namespace birkhoff
