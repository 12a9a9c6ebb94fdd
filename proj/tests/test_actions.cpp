#include "helpers.hpp"

using namespace testing;
using doctest::Approx;

namespace {

struct Setup {
  FourierPotential phi;
  DiscriminantEvaluator ev;
  PeriodicSpectrum sp;
  ActionSpectrum as;

  explicit Setup(FourierPotential p, int extra = 6)
      : phi(p), ev(p), sp(locate_spectrum(ev, localization_threshold(p) + extra)), as(compute_actions(ev, sp)) {}
};

}  // namespace

TEST_CASE("f_n of the constant potential") {
  const Setup s(FourierPotential::constant(0.5));
  CHECK(f_n(s.ev, s.sp, 0, 0.0) == Approx(0.5).epsilon(1e-12));
  CHECK(f_n(s.ev, s.sp, 0, 0.5) == Approx(0.0).epsilon(1e-6));
  CHECK(f_n(s.ev, s.sp, 0, -0.5) == Approx(0.0).epsilon(1e-6));
  CHECK(f_n(s.ev, s.sp, 3, s.sp.at(3).lambda_dot) == 0.0);
}

TEST_CASE("gap integrals of the constant potential") {
  const Setup s(FourierPotential::constant(0.5));
  CHECK(action_gap_integral(s.ev, s.sp, 0, 1) == Approx(0.25).epsilon(1e-10));
  CHECK(action_gap_integral(s.ev, s.sp, 0, 3) == Approx(0.015625).epsilon(1e-10));
  // lambda^{k-1} f_0 is odd for even k
  CHECK(std::abs(action_gap_integral(s.ev, s.sp, 0, 2)) < 1e-15);
  CHECK(action_gap_integral(s.ev, s.sp, 2, 1) == 0.0);
  CHECK(s.as.action(0) == Approx(0.25).epsilon(1e-10));
  for (int n = -s.as.n_max; n <= s.as.n_max; ++n)
    if (n != 0) CHECK(s.as.action(n) == 0.0);
}

TEST_CASE("contour actions") {
  const Setup s(FourierPotential::constant(0.5));
  CHECK(action_contour(s.ev, s.sp, 0).value == Approx(0.25).epsilon(1e-9));
  CHECK(action_contour(s.ev, s.sp, 1).value == 0.0);
  // the shifted constant has its open gap at n = -1
  const FourierPotential g = gauge_shift(FourierPotential::constant(0.5), 1);
  const DiscriminantEvaluator ev(g);
  const PeriodicSpectrum sp = locate_spectrum(ev, localization_threshold(g) + 2);
  CHECK(action_contour(ev, sp, -1).value == Approx(0.25).epsilon(1e-9));
  CHECK(action_gap_integral(ev, sp, -1, 1) == Approx(0.25).epsilon(1e-8));
  const double zeta = [&] {
    ActionOptions o;
    o.levels = {1, 3};
    return mean_value_node(compute_actions(ev, sp, o), sp, -1, 1);
  }();
  CHECK(zeta >= sp.at(-1).lambda_minus);
  CHECK(zeta <= sp.at(-1).lambda_plus);
  CHECK(std::abs(zeta + pi) < 0.5);
}

TEST_CASE("action norms of the constant potential") {
  const Setup s(FourierPotential::constant(0.5));
  CHECK(action_norm(s.as, 0.0).total() == Approx(0.25).epsilon(1e-9));
  CHECK(action_norm(s.as, 2.0).total() == Approx(0.25).epsilon(1e-9));
  CHECK(birkhoff_norm(s.as, 1.0).total() == Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(action_norm(s.as, 0.0).tail < 1e-12);
  const Setup z(FourierPotential::zero());
  CHECK(action_norm(z.as, 1.0).total() == 0.0);
  CHECK(birkhoff_norm(z.as, 1.0).total() == 0.0);

  const FourierPotential g = gauge_shift(FourierPotential::constant(0.5), 1);
  // the tail bound needs some headroom past the threshold to be finite
  DiscriminantOptions o;
  o.index_reach = localization_threshold(g) + 40;
  const DiscriminantEvaluator ev(g, o);
  const PeriodicSpectrum sp = locate_spectrum(ev, o.index_reach);
  const auto b = birkhoff_norm(compute_actions(ev, sp), 0.0);
  CHECK(b.truncated == Approx(std::sqrt(0.5)).epsilon(1e-8));
  CHECK(std::isfinite(b.tail));
}

TEST_CASE("mean value nodes") {
  const Setup s(FourierPotential::constant(0.5));
  CHECK(mean_value_node(s.as, s.sp, 0, 1) == Approx(0.25).epsilon(1e-9));
  try {
    mean_value_node(s.as, s.sp, 2, 1);
    FAIL("expected an undefined-node error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_node);
  }
}

TEST_CASE("random potential: methods agree and actions follow the gaps") {
  const Setup s(scaled_random(21, 1.0), 10);
  double worst = 0;
  int open = 0;
  for (const GapRecord& g : s.sp.entries) {
    if (g.collapsed) continue;
    ++open;
    const double I = s.as.action(g.n);
    CHECK(I >= 0.0);
    const double c = action_contour(s.ev, s.sp, g.n).value;
    worst = std::max(worst, std::abs(c - I) / std::max(I, 1e-12));
  }
  CHECK(open > 5);
  CHECK(worst < 1e-6);
  // Parseval: sum I_n = ||phi||_0^2 / 2
  const NormValue l1 = level_sum(s.as, 1);
  CHECK(std::abs(l1.truncated - 0.5 * sobolev_norm_sq(s.phi, 0.0)) <= l1.tail + 1e-10);
}

TEST_CASE("tail bounds shrink with n_max and vanish for band-limited weights") {
  const FourierPotential phi = scaled_random(22, 0.8);
  const auto sob = [](double s) { return [s](int n) { return std::pow(1.0 + std::abs(2.0 * n * pi), s); }; };
  const double near = action_tail_bound(phi, localization_threshold(phi) + 4, sob(2.0));
  const double far = action_tail_bound(phi, localization_threshold(phi) + 40, sob(2.0));
  CHECK(std::isfinite(near));
  CHECK(far < near);
  // no Abel trial weight dominates e^{10 |n|}
  CHECK(std::isinf(action_tail_bound(phi, 40, [](int n) { return std::exp(10.0 * std::abs(n)); })));
}

TEST_CASE("serial and parallel actions agree") {
  const FourierPotential phi = scaled_random(23, 0.7);
  const DiscriminantEvaluator ev(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, localization_threshold(phi) + 6);
  ActionOptions a, b;
  a.exec = Execution::serial;
  b.exec = Execution::parallel;
  const ActionSpectrum x = compute_actions(ev, sp, a), y = compute_actions(ev, sp, b);
  CHECK(x.I == y.I);
  CHECK(x.J == y.J);
}
