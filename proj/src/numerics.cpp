#include "birkhoff/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "birkhoff/errors.hpp"

namespace birkhoff {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton on P_n from the Tricomi initial guesses; nodes are symmetric.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_legendre(n));
  return *slot;
}

double bracketed_newton(const std::function<std::pair<double, double>(double)>& fd, double a,
                        double b, double xtol, int max_iter) {
  auto [fa, da] = fd(a);
  if (fa == 0.0) return a;
  auto [fb, db] = fd(b);
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw Error(ErrorKind::convergence, "bracketed_newton: endpoints do not bracket a root");
  // orient so that f(lo) < 0 < f(hi)
  double lo = fa < 0 ? a : b;
  double hi = fa < 0 ? b : a;
  double x = 0.5 * (a + b);
  double dx_old = std::abs(b - a), dx = dx_old;
  auto [f, d] = fd(x);
  for (int it = 0; it < max_iter; ++it) {
    if (f == 0.0) return x;
    const double scale = xtol * std::max(1.0, std::abs(x));
    const bool newton_out = ((x - hi) * d - f) * ((x - lo) * d - f) > 0.0;
    const bool slow = std::abs(2.0 * f) > std::abs(dx_old * d);
    dx_old = dx;
    if (d == 0.0 || newton_out || slow) {
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    } else {
      dx = f / d;
      x -= dx;
    }
    if (std::abs(dx) < scale || std::abs(hi - lo) < 2.0 * scale) return x;
    std::tie(f, d) = fd(x);
    if (f < 0) lo = x; else hi = x;
  }
  throw Error(ErrorKind::convergence, "bracketed_newton: no convergence");
}

}  // namespace birkhoff
