#include "birkhoff/spectrum.hpp"

#include <limits>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {

constexpr double kPi = std::numbers::pi;

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Delta' and Delta'' on the real line.
std::pair<double, double> ddot(const DiscriminantEvaluator& ev, double x) {
  const auto s = ev.evaluate_fast(x, 2);
  return {s.delta_dot.real(), s.delta_ddot.real()};
}

// Monotone stand-in for (-1)^n Delta - 2 between two critical points: equal to
// g = Delta^2/4 - 1 where (-1)^n Delta > 0 and to (-1)^n Delta/2 - 1 elsewhere.
// g keeps full relative accuracy at tiny gaps.
std::pair<double, double> edge_function(const DiscriminantEvaluator& ev, int n, double x) {
  const auto s = ev.evaluate_fast(x, 1);
  const double sgn = parity(n);
  const double d = s.delta.real(), dd = s.delta_dot.real();
  if (sgn * d > 0) return {s.gap_function.real(), 0.5 * d * dd};
  return {0.5 * sgn * d - 1.0, 0.5 * sgn * dd};
}

double critical_point_near(const DiscriminantEvaluator& ev, int n) {
  const double c = n * kPi;
  for (double half : {kPi / 4, kPi / 2 - 0.05}) {
    const double a = c - half, b = c + half;
    if ((ddot(ev, a).first > 0) != (ddot(ev, b).first > 0))
      return bracketed_newton([&](double x) { return ddot(ev, x); }, a, b);
  }
  throw Error(ErrorKind::convergence,
              "no sign change of Delta' around n pi for n = " + std::to_string(n));
}

GapRecord resolve_gap(const DiscriminantEvaluator& ev, int n, double dot, double left,
                      double right, double gap_tol) {
  GapRecord r;
  r.n = n;
  r.lambda_dot = dot;
  const auto at_dot = ev.evaluate_fast(dot, 2);
  r.g_dot = at_dot.gap_function.real();
  r.residual_dot = std::abs(at_dot.delta_dot.real()) / std::max(1.0, std::abs(at_dot.delta_ddot.real()));
  if (r.g_dot <= 0.0) {
    r.lambda_minus = r.lambda_plus = r.tau = dot;
  } else {
    auto f = [&](double x) { return edge_function(ev, n, x); };
    if (f(left).first >= 0 || f(right).first >= 0)
      throw Error(ErrorKind::spectrum, "gap " + std::to_string(n) + " is not bracketed");
    r.lambda_minus = bracketed_newton(f, left, dot);
    r.lambda_plus = bracketed_newton(f, dot, right);
    r.tau = 0.5 * (r.lambda_minus + r.lambda_plus);
  }
  r.gamma = r.lambda_plus - r.lambda_minus;
  r.collapsed = r.gamma <= gap_tol;
  for (auto [x, res] : {std::pair{r.lambda_minus, &r.residual_minus}, std::pair{r.lambda_plus, &r.residual_plus}}) {
    const auto s = ev.evaluate_fast(x, 1);
    *res = std::abs(parity(n) * s.delta.real() - 2.0) / std::max(1.0, std::abs(s.delta_dot.real()));
  }
  return r;
}

// Zeros of Delta' on [-(J+1/2) pi, (J+1/2) pi], expected 2J+1 of them.
std::vector<double> scan_critical_points(const DiscriminantEvaluator& ev, int J, double step0,
                                         Execution exec) {
  const double L = (J + 0.5) * kPi;
  const int expected = 2 * J + 1;
  double step = step0;
  std::vector<double> roots;
  for (int attempt = 0; attempt < 4; ++attempt, step *= 0.5) {
    const int m = static_cast<int>(std::ceil(2 * L / step));
    const auto vals = parallel_map(
        static_cast<std::size_t>(m + 1),
        [&](std::size_t i) { return ddot(ev, -L + 2 * L * static_cast<double>(i) / m).first; }, exec);
    std::vector<std::size_t> brackets;
    for (int i = 0; i < m; ++i)
      if ((vals[i] > 0) != (vals[i + 1] > 0)) brackets.push_back(static_cast<std::size_t>(i));
    if (static_cast<int>(brackets.size()) != expected) continue;
    roots = parallel_map(
        brackets.size(),
        [&](std::size_t k) {
          const std::size_t i = brackets[k];
          const double a = -L + 2 * L * static_cast<double>(i) / m;
          const double b = -L + 2 * L * static_cast<double>(i + 1) / m;
          return bracketed_newton([&](double x) { return ddot(ev, x); }, a, b);
        },
        exec);
    return roots;
  }
  throw Error(ErrorKind::indexing, "scan found a wrong number of critical points of Delta' below threshold (expected " +
                                       std::to_string(expected) + ")");
}

}  // namespace

const GapRecord& PeriodicSpectrum::at(int n) const {
  if (n < -n_max || n > n_max) throw Error(ErrorKind::range, "spectrum index out of range");
  return entries[static_cast<std::size_t>(n + n_max)];
}

int localization_threshold(const FourierPotential& phi) {
  const double n1 = sobolev_norm_sq(phi, 1.0);
  return std::max(1, static_cast<int>(std::ceil(8.0 * n1 - 1e-12)));
}

PeriodicSpectrum locate_spectrum(const DiscriminantEvaluator& ev, int n_max, const SpectrumOptions& opts) {
  const FourierPotential& phi = ev.potential();
  if (!phi.is_real_type()) throw Error(ErrorKind::config, "locate_spectrum requires a real-type potential");
  PeriodicSpectrum sp;
  sp.norm1 = sobolev_norm(phi, 1.0);
  sp.threshold = localization_threshold(phi);
  if (n_max < sp.threshold + 2)
    throw Error(ErrorKind::range, "n_max = " + std::to_string(n_max) + " is below N_loc + 2 = " +
                                      std::to_string(sp.threshold + 2));
  if (ev.subintervals() < required_subintervals(phi, n_max))
    throw Error(ErrorKind::range, std::to_string(ev.subintervals()) + " subintervals cannot resolve |n| <= " +
                                      std::to_string(n_max) + "; set DiscriminantOptions::index_reach");
  sp.n_max = n_max;
  sp.box_half_width = (8.0 * sp.norm1 * sp.norm1 - 0.5) * kPi;
  sp.box_height = sp.norm1;
  sp.gap_tol = opts.gap_tol_scale * std::max(1.0, sp.norm1);

  // Indices |n| <= J are taken from the scan; J = N_loc - 1 reaches one index
  // into the Newton regime so that both methods overlap.
  const int J = sp.threshold - 1;
  std::vector<double> dots(static_cast<std::size_t>(2 * n_max + 1));
  if (J >= 1) {
    const double step = opts.scan_step > 0 ? opts.scan_step : kPi / 32;
    const auto low = scan_critical_points(ev, J, step, opts.exec);
    for (int n = -J; n <= J; ++n) dots[n + n_max] = low[n + J];
  }
  const int first_newton = J >= 1 ? J + 1 : 0;
  {
    std::vector<int> idx;
    for (int n = -n_max; n <= n_max; ++n)
      if (std::abs(n) >= first_newton) idx.push_back(n);
    const auto found = parallel_map(
        idx.size(), [&](std::size_t k) { return critical_point_near(ev, idx[k]); }, opts.exec);
    for (std::size_t k = 0; k < idx.size(); ++k) dots[idx[k] + n_max] = found[k];
  }
  for (int n = -n_max; n < n_max; ++n)
    if (!(dots[n + n_max] < dots[n + 1 + n_max]))
      throw Error(ErrorKind::indexing, "critical points out of order at n = " + std::to_string(n));

  sp.entries = parallel_map(
      dots.size(),
      [&](std::size_t k) {
        const int n = static_cast<int>(k) - n_max;
        const double dot = dots[k];
        // Delta is monotone between neighbouring critical points; beyond the
        // located range half a period suffices
        const double left = k > 0 ? dots[k - 1] : dot - kPi / 2;
        const double right = k + 1 < dots.size() ? dots[k + 1] : dot + kPi / 2;
        return resolve_gap(ev, n, dot, left, right, sp.gap_tol);
      },
      opts.exec);

  for (const auto& r : sp.entries)
    if (parity(r.n) * ev.evaluate_fast(r.lambda_dot, 0).delta.real() < 2.0 - 1e-8)
      throw Error(ErrorKind::indexing, "critical point " + std::to_string(r.n) +
                                           " has (-1)^n Delta < 2; indexing is off");

  if (opts.verify_count && J >= 1) {
    const double edge = (J + 0.5) * kPi;
    const double h = std::clamp(sp.norm1, 0.5, 4.0);
    sp.expected = 2 * (2 * J + 1);
    sp.counted = count_in_rectangle(ev, {-edge, edge, -h, h});
    if (sp.counted != sp.expected) {
      std::ostringstream os;
      os << "winding number " << sp.counted << " differs from the expected " << sp.expected
         << " eigenvalues in |Re lambda| < " << edge;
      throw Error(ErrorKind::indexing, os.str());
    }
  }
  return sp;
}

namespace {

struct Winding {
  const DiscriminantEvaluator& ev;
  double floor;
  double total = 0;
  bool touched = false;

  cplx g(cplx z) const { return ev.evaluate_fast(z, 0).gap_function; }

  void segment(cplx a, cplx b, cplx ga, cplx gb, int depth) {
    const double step = std::arg(gb / ga);
    if (std::abs(step) > kPi / 4 && depth < 40) {
      const cplx m = 0.5 * (a + b);
      const cplx gm = g(m);
      if (4.0 * std::abs(gm) < floor) touched = true;
      segment(a, m, ga, gm, depth + 1);
      segment(m, b, gm, gb, depth + 1);
      return;
    }
    total += step;
  }
};

}  // namespace

int count_in_rectangle(const DiscriminantEvaluator& ev, Rect rect) {
  if (!(rect.re_lo < rect.re_hi && rect.im_lo < rect.im_hi))
    throw Error(ErrorKind::config, "degenerate rectangle");
  constexpr double kFloor = 1e-8;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const cplx corners[4] = {{rect.re_lo, rect.im_lo}, {rect.re_hi, rect.im_lo},
                             {rect.re_hi, rect.im_hi}, {rect.re_lo, rect.im_hi}};
    Winding w{ev, kFloor};
    for (int e = 0; e < 4 && !w.touched; ++e) {
      const cplx a = corners[e], b = corners[(e + 1) % 4];
      const int pieces = std::max(4, static_cast<int>(std::ceil(std::abs(b - a) / (kPi / 16))));
      cplx prev = a, gprev = w.g(a);
      if (4.0 * std::abs(gprev) < kFloor) w.touched = true;
      for (int i = 1; i <= pieces && !w.touched; ++i) {
        const cplx z = a + (b - a) * (static_cast<double>(i) / pieces);
        const cplx gz = w.g(z);
        if (4.0 * std::abs(gz) < kFloor) w.touched = true;
        w.segment(prev, z, gprev, gz, 0);
        prev = z;
        gprev = gz;
      }
    }
    if (!w.touched) return static_cast<int>(std::lround(w.total / (2 * kPi)));
    // a root sits on the boundary; push the edges outward a little
    const double grow = 1e-3 * (attempt + 1) * std::max(1.0, rect.re_hi - rect.re_lo);
    rect.re_lo -= grow;
    rect.re_hi += grow * 0.7;
    rect.im_lo -= grow;
    rect.im_hi += grow * 0.7;
  }
  throw Error(ErrorKind::boundary, "Delta^2 - 4 vanishes on the rectangle boundary after 3 perturbations");
}

LocalizationReport localization_report(const PeriodicSpectrum& sp, const FourierPotential& phi) {
  LocalizationReport rep;
  const double n1 = sobolev_norm(phi, 1.0);
  rep.worst_bound_margin = rep.worst_cap_margin = rep.worst_box_margin = INFINITY;
  for (const auto& r : sp.entries) {
    LocalizationEntry e;
    e.n = r.n;
    e.above = sp.above_threshold(r.n);
    // eigenvalues of the zero potential land within rounding of n pi, against a zero bound
    const double noise = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(r.n * kPi));
    if (e.above) {
      e.displacement = std::max(std::abs(r.lambda_minus - r.n * kPi), std::abs(r.lambda_plus - r.n * kPi));
      e.bound = n1 * n1 / japanese(r.n) + std::sqrt(2.0) * n1 / japanese(2.0 * r.n);
      e.ok = e.displacement <= e.bound + noise && e.displacement <= kPi / 5;
      rep.worst_bound_margin = std::min(rep.worst_bound_margin, e.bound - e.displacement);
      rep.worst_cap_margin = std::min(rep.worst_cap_margin, kPi / 5 - e.displacement);
    } else {
      e.displacement = std::max(std::abs(r.lambda_minus), std::abs(r.lambda_plus));
      e.bound = sp.box_half_width;
      e.ok = e.displacement <= e.bound + noise;
      rep.worst_box_margin = std::min(rep.worst_box_margin, e.bound - e.displacement);
    }
    if (!e.ok) ++rep.failures;
    rep.entries.push_back(e);
  }
  return rep;
}

GapReport gap_report(const PeriodicSpectrum& sp, const FourierPotential& phi, const Weight& w) {
  GapReport rep;
  rep.weighted_norm = weighted_norm(phi, w);
  const double wn2 = rep.weighted_norm * rep.weighted_norm;
  const double first = std::max(0.0, std::ceil(8.0 * wn2 - 1.0 - 1e-12));
  if (!(first <= sp.n_max))
    throw Error(ErrorKind::range, "8 ||phi||_w^2 = " + std::to_string(8.0 * wn2) +
                                      " needs indices beyond the located n_max = " + std::to_string(sp.n_max));
  rep.N = static_cast<int>(first);
  std::vector<double> terms;
  for (const auto& r : sp.entries) {
    GapIndexEntry e;
    e.n = r.n;
    e.above = std::abs(r.n) >= rep.N;
    const double w2n = w(2 * r.n);
    // a collapsed gap is below resolution and counts as closed
    e.lhs = r.collapsed ? 0.0 : w2n * r.gamma;
    e.rhs = 4.0 * rep.weighted_norm;
    if (e.above) {
      e.ok = e.lhs <= e.rhs;
      if (!e.ok) ++rep.failures;
      if (r.collapsed && w2n * sp.gap_tol > e.rhs) ++rep.unresolved;
      terms.push_back(e.lhs * e.lhs);
    }
    rep.entries.push_back(e);
  }
  rep.sum_lhs = pairwise_sum(terms);
  rep.sum_rhs = 6.0 * tail_norm_sq(phi, w, rep.N) + 1152.0 * wn2 * wn2 * wn2 / japanese(rep.N);
  if (rep.sum_lhs > rep.sum_rhs) ++rep.failures;
  return rep;
}

}  // namespace birkhoff
