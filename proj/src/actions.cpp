#include "birkhoff/actions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "birkhoff/numerics.hpp"

namespace birkhoff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// asinh(sqrt(g)) = arccosh(sqrt(1 + g)), accurate as g -> 0
double f_from(const DiscriminantSample& s, int n) {
  const double g = s.gap_function.real();
  if (g < -2e-12 || parity(n) * s.delta.real() < 0)
    throw Error(ErrorKind::spectrum, "(-1)^n Delta/2 < 1 inside gap " + std::to_string(n));
  return std::asinh(std::sqrt(std::max(g, 0.0)));
}

double power(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

double f_n(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n, double lambda) {
  const GapRecord& r = sp.at(n);
  if (r.collapsed) return 0.0;
  const double slack = 1e-12 * std::max(1.0, std::abs(lambda));
  if (lambda < r.lambda_minus - slack || lambda > r.lambda_plus + slack)
    throw Error(ErrorKind::range, "f_n evaluated outside gap " + std::to_string(n));
  return f_from(ev.evaluate_fast(lambda, 0), n);
}

GapIntegral action_gap_integral(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n,
                                const std::vector<int>& levels, const ActionOptions& opts) {
  GapIntegral out;
  for (int k : levels) {
    if (k < 1) throw Error(ErrorKind::config, "action levels start at 1");
    out.J[k] = 0.0;
  }
  const GapRecord& r = sp.at(n);
  if (r.collapsed) return out;

  // lambda = tau + (gamma/2) cos theta removes the square-root endpoint behaviour
  const double half = 0.5 * r.gamma;
  // returns J_k and sum |terms|; the latter scales the convergence test so
  // that even levels with sign cancellation are judged fairly
  auto integrate = [&](int nodes) {
    const QuadratureRule& rule = gauss_legendre(nodes);
    std::map<int, std::vector<double>> terms, mags;
    for (int i = 0; i < nodes; ++i) {
      const double theta = 0.5 * kPi * (rule.nodes[i] + 1.0);
      const double lambda = r.tau + half * std::cos(theta);
      const double base =
          rule.weights[i] * 0.5 * kPi * half * std::sin(theta) * f_from(ev.evaluate_fast(lambda, 0), n);
      for (int k : levels) {
        const double t = base * power(lambda, k - 1);
        terms[k].push_back(t);
        mags[k].push_back(std::abs(t));
      }
    }
    std::map<int, std::pair<double, double>> J;
    for (int k : levels) J[k] = {2.0 / kPi * pairwise_sum(terms[k]), 2.0 / kPi * pairwise_sum(mags[k])};
    return J;
  };

  int nodes = opts.initial_nodes;
  auto prev = integrate(nodes);
  for (int d = 0; d < opts.max_doublings; ++d) {
    nodes *= 2;
    auto next = integrate(nodes);
    bool ok = true;
    out.change = 0;
    for (int k : levels) {
      const double diff = std::abs(next[k].first - prev[k].first);
      const double scale = std::max(next[k].second, opts.abs_tol);
      out.change = std::max(out.change, diff / scale);
      // rounding in Delta bounds f_n to about 1e-13 absolute, so the integral
      // cannot settle below gamma times that
      const double floor = 1e-12 * r.gamma * power(std::abs(r.tau) + r.gamma, k - 1);
      if (diff > std::max(opts.rel_tol * scale, floor)) ok = false;
    }
    prev = std::move(next);
    if (ok) {
      for (int k : levels) out.J[k] = prev[k].first;
      out.nodes = nodes;
      return out;
    }
  }
  throw Error(ErrorKind::quadrature, "gap integral " + std::to_string(n) + " did not converge with " +
                                         std::to_string(nodes) + " nodes (relative change " +
                                         std::to_string(out.change) + ")");
}

double action_gap_integral(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n, int k,
                           const ActionOptions& opts) {
  return action_gap_integral(ev, sp, n, std::vector<int>{k}, opts).J.at(k);
}

ContourResult action_contour(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp, int n,
                             const ContourOptions& opts) {
  ContourResult out;
  const GapRecord& r = sp.at(n);
  if (r.collapsed) return out;

  // Ellipse tau + (gamma/2) cosh(rho + i theta) with foci at the gap ends.
  // Its semi-major axis is gamma/2 + delta, delta = gamma/4, kept clear of the
  // neighbouring gaps.
  double room = kInf;
  if (n > -sp.n_max) room = std::min(room, r.lambda_minus - sp.at(n - 1).lambda_plus);
  if (n < sp.n_max) room = std::min(room, sp.at(n + 1).lambda_minus - r.lambda_plus);
  double delta = 0.25 * r.gamma;
  if (delta > 0.45 * room) delta = 0.45 * room;
  if (!(delta > 1e-6 * r.gamma))
    throw Error(ErrorKind::geometry, "no room for a contour around gap " + std::to_string(n));
  out.delta = delta;
  const double half = 0.5 * r.gamma;
  const double rho = std::acosh((half + delta) / half);
  const cplx tau{r.tau, 0.0};
  const cplx I{0.0, 1.0};

  auto root_of = [&](cplx z) { return ev.evaluate_fast(z, 1); };
  auto nearer = [](cplx prev, cplx cand) { return std::abs(cand - prev) <= std::abs(cand + prev) ? cand : -cand; };

  // Branch on the upper rim of the gap: (-1)^n sqrt(g) > 0. Carry it up to the
  // ellipse at theta = pi/2.
  const double top = half * std::sinh(rho);
  cplx branch = parity(n) * std::sqrt(std::max(root_of(tau).gap_function.real(), 0.0));
  {
    const int steps = 64;
    for (int i = 1; i <= steps; ++i) {
      const cplx z{r.tau, top * i / steps};
      const cplx cand = std::sqrt(root_of(z).gap_function);
      const cplx next = nearer(branch, cand);
      if (std::abs(std::arg(next / branch)) > kPi / 2)
        throw Error(ErrorKind::geometry, "branch jump on the way to the contour of gap " + std::to_string(n));
      branch = next;
    }
  }

  // theta runs from pi/2 once around, counterclockwise; with this branch the
  // counterclockwise circuit gives I_n >= 0
  auto integrate = [&](int nodes, cplx start_branch) -> std::pair<cplx, bool> {
    std::vector<double> re(nodes), im(nodes);
    cplx b = start_branch;
    for (int i = 0; i < nodes; ++i) {
      const double theta = 0.5 * kPi + 2.0 * kPi * i / nodes;
      const cplx w{rho, theta};
      const cplx z = tau + half * std::cosh(w);
      const cplx dz = I * half * std::sinh(w);
      const auto s = root_of(z);
      const cplx next = nearer(b, std::sqrt(s.gap_function));
      if (i > 0 && std::abs(std::arg(next / b)) > kPi / 2) return {cplx{}, false};
      b = next;
      // sqrt(Delta^2 - 4) = 2 sqrt(g); (z - tau) in place of z since the
      // closed integral of Delta'/sqrt(Delta^2 - 4) vanishes
      const cplx term = (z - tau) * s.delta_dot / (2.0 * b) * dz;
      re[i] = term.real();
      im[i] = term.imag();
    }
    const double scale = 2.0 * kPi / nodes / kPi;
    return {cplx{pairwise_sum(re), pairwise_sum(im)} * scale, true};
  };

  int nodes = opts.initial_nodes;
  cplx prev{};
  bool have_prev = false;
  while (nodes <= opts.max_nodes) {
    auto [val, clean] = integrate(nodes, branch);
    if (!clean) {
      nodes *= 2;
      have_prev = false;
      continue;
    }
    // same rounding floor as the gap integral
    const double floor = 1e-12 * r.gamma * std::max(1.0, r.gamma);
    if (have_prev && std::abs(val - prev) <= std::max(opts.rel_tol * std::abs(val), floor)) {
      out.value = val.real();
      out.imag_residue = std::abs(val.imag());
      out.nodes = nodes;
      return out;
    }
    prev = val;
    have_prev = true;
    nodes *= 2;
  }
  throw Error(ErrorKind::quadrature, "contour integral around gap " + std::to_string(n) + " did not converge");
}

double action_tail_bound(const FourierPotential& phi, int n_max, const std::function<double(int)>& weight) {
  if (phi.is_zero()) return 0.0;
  const double n1sq = sobolev_norm_sq(phi, 1.0);
  // per-index action bound needs <n> >= 8 ||phi||_1^2 for every dropped index
  if (japanese(n_max + 1) < 8.0 * n1sq) return kInf;
  const double action_factor = 2048.0 * (1.0 + n1sq);

  double best = kInf;
  // geometric grid of trial weights from a = 0.01 to 2
  for (double a = 0.01; a <= 2.0 + 1e-12; a *= 1.25) {
    const Weight v = Weight::abel(1.0, a);
    const double vn2 = weighted_norm_sq(phi, v);
    // individual gap estimate: v_{2n} gamma_n <= 4 ||phi||_v for <n> >= 8 ||phi||_v^2
    if (japanese(n_max + 1) < 8.0 * vn2) break;  // larger a only raises ||phi||_v
    double individual = 0, sup_ratio = 0;
    bool converged = false;
    for (int n = n_max + 1; n < n_max + 20000; ++n) {
      const double v2 = v(2 * n) * v(2 * n);
      const double ratio = weight(n) / v2;
      if (!std::isfinite(ratio)) break;
      sup_ratio = std::max(sup_ratio, ratio);
      const double term = 2.0 * ratio * 16.0 * vn2;  // both signs of n
      individual += term;
      if (term < 1e-18 * individual || term == 0.0) {
        converged = true;
        break;
      }
    }
    // this trial weight does not dominate `weight`
    if (!converged) continue;
    const int N = n_max + 1;
    const double summed = sup_ratio * (6.0 * tail_norm_sq(phi, v, N) + 1152.0 * vn2 * vn2 * vn2 / japanese(N));
    best = std::min(best, action_factor * std::min(individual, summed));
  }
  return best;
}

double ActionSpectrum::level(int n, int k) const {
  if (k == 1) return action(n);
  auto it = J.find(k);
  if (it == J.end()) throw Error(ErrorKind::config, "level " + std::to_string(k) + " was not computed");
  return it->second.at(static_cast<std::size_t>(n + n_max));
}

double ActionSpectrum::tail(const std::function<double(int)>& weight) const {
  return action_tail_bound(phi, n_max, weight);
}

ActionSpectrum compute_actions(const DiscriminantEvaluator& ev, const PeriodicSpectrum& sp,
                               const ActionOptions& opts) {
  if (!ev.potential().is_real_type()) throw Error(ErrorKind::config, "actions require a real-type potential");
  ActionSpectrum as;
  as.n_max = sp.n_max;
  as.phi = ev.potential();
  as.levels = opts.levels;
  if (std::find(as.levels.begin(), as.levels.end(), 1) == as.levels.end()) as.levels.insert(as.levels.begin(), 1);
  std::sort(as.levels.begin(), as.levels.end());
  as.levels.erase(std::unique(as.levels.begin(), as.levels.end()), as.levels.end());

  const auto results = parallel_map(
      sp.entries.size(),
      [&](std::size_t i) { return action_gap_integral(ev, sp, sp.entries[i].n, as.levels, opts); }, opts.exec);
  as.I.resize(results.size());
  as.nodes.resize(results.size());
  for (int k : as.levels)
    if (k != 1) as.J[k].resize(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    as.I[i] = results[i].J.at(1);
    as.nodes[i] = results[i].nodes;
    for (int k : as.levels)
      if (k != 1) as.J[k][i] = results[i].J.at(k);
  }
  return as;
}

namespace {

NormValue weighted_sum(const ActionSpectrum& as, const std::function<double(int)>& weight) {
  std::vector<double> terms;
  for (int n = -as.n_max; n <= as.n_max; ++n) terms.push_back(weight(n) * std::abs(as.action(n)));
  return {pairwise_sum(terms), as.tail(weight)};
}

}  // namespace

NormValue action_norm(const ActionSpectrum& as, double s) {
  if (s < 0) throw Error(ErrorKind::range, "norm exponent must be >= 0");
  return weighted_sum(as, [s](int n) { return std::pow(japanese(2.0 * n * kPi), s); });
}

NormValue action_norm(const ActionSpectrum& as, const Weight& w) {
  // a finite table says nothing past its end, which the tail bound reads as unbounded
  const int reach = w.range();
  return weighted_sum(as, [&w, reach](int n) {
    if (reach >= 0 && std::abs(2 * n) > reach) return kInf;
    const double v = w(2 * n);
    return v * v;
  });
}

NormValue birkhoff_norm(const ActionSpectrum& as, double s) {
  const NormValue a = action_norm(as, 2.0 * s);
  const double lo = std::sqrt(2.0 * a.truncated);
  return {lo, std::sqrt(2.0 * a.total()) - lo};
}

NormValue birkhoff_norm(const ActionSpectrum& as, const Weight& w) {
  const NormValue a = action_norm(as, w);
  const double lo = std::sqrt(2.0 * a.truncated);
  return {lo, std::sqrt(2.0 * a.total()) - lo};
}

NormValue level_sum(const ActionSpectrum& as, int k) {
  std::vector<double> terms;
  for (int n = -as.n_max; n <= as.n_max; ++n) terms.push_back(as.level(n, k));
  // |lambda| <= |n| pi + pi/5 <= <2 n pi>/2 on every dropped gap
  const double tail = as.tail([k](int n) { return power(0.5 * japanese(2.0 * n * kPi), k - 1); });
  return {pairwise_sum(terms), tail};
}

double mean_value_node(const ActionSpectrum& as, const PeriodicSpectrum& sp, int n, int m) {
  if (m < 1) throw Error(ErrorKind::config, "mean-value node needs m >= 1");
  const double In = as.action(n);
  if (!(In > 0)) throw Error(ErrorKind::undefined_node, "I_n = 0 for n = " + std::to_string(n));
  const double ratio = as.level(n, 2 * m + 1) / In;
  if (ratio < 0) throw Error(ErrorKind::undefined_node, "J_{n,2m+1} < 0 for n = " + std::to_string(n));
  const double z = std::pow(ratio, 1.0 / (2 * m));
  const GapRecord& r = sp.at(n);
  const double slack = 1e-9 * std::max(1.0, std::abs(r.tau));
  for (double cand : {r.tau >= 0 ? z : -z, r.tau >= 0 ? -z : z})
    if (cand >= r.lambda_minus - slack && cand <= r.lambda_plus + slack) return cand;
  throw Error(ErrorKind::undefined_node, "mean-value node for n = " + std::to_string(n) + " lies outside the gap");
}

}  // namespace birkhoff
