#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace birkhoff {

/// Pairwise (cascade) summation; deterministic for a fixed input order.
double pairwise_sum(std::span<const double> values);

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; rules are cached per n.
const QuadratureRule& gauss_legendre(int n);

/// Safeguarded Newton on a bracket [a, b] with f(a) f(b) <= 0. `fd` returns
/// (f, f'). Stops when the step or the bracket falls below
/// xtol * max(1, |x|). Throws a convergence error after max_iter steps.
double bracketed_newton(const std::function<std::pair<double, double>(double)>& fd, double a,
                        double b, double xtol = 4e-16, int max_iter = 200);

}  // namespace birkhoff
