#include "helpers.hpp"

using namespace testing;
using doctest::Approx;

TEST_CASE("hierarchy closed forms") {
  const auto z = hierarchy_compute(FourierPotential::zero(), 7);
  for (int k = 1; k <= 7; ++k) CHECK(z.hamiltonian(k) == cplx{});

  const auto c = hierarchy_compute(FourierPotential::constant(0.5), 5);
  CHECK(c.hamiltonian(1).real() == Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(c.hamiltonian(2)) < 1e-15);
  CHECK(c.hamiltonian(3).real() == Approx(0.0625).epsilon(1e-15));

  const auto e = hierarchy_compute(psi_exp(0.5), 3);
  CHECK(e.hamiltonian(1).real() == Approx(0.25).epsilon(1e-15));
  CHECK(e.hamiltonian(3).real() == Approx(pi * pi + 0.0625).epsilon(1e-14));
  CHECK(e.hamiltonian(3).real() == Approx(9.9321).epsilon(1e-5));
}

TEST_CASE("H_3 is the quartic energy for random real-type potentials") {
  const FourierPotential phi = random_potential(random_spec(14, RandomPotentialSpec::Decay::sobolev, 0.6));
  const auto h = hierarchy_compute(phi, 3);
  const double expected = derivative_l2_sq(phi, 1) + quartic_integral(phi);
  CHECK(h.hamiltonian(3).real() == Approx(expected).epsilon(1e-12));
  CHECK(std::abs(h.hamiltonian(3).imag()) < 1e-12);
  CHECK(h.hamiltonian(1).real() == Approx(0.5 * sobolev_norm_sq(phi, 0.0)).epsilon(1e-13));
}

TEST_CASE("recursion stays on its band") {
  const FourierPotential phi = random_potential(random_spec(15));
  const auto h = hierarchy_compute(phi, 9);
  for (int k = 1; k <= 9; ++k) CHECK(h.observed_band(k) <= k * phi.band());
  CHECK(h.grid_size >= 4 * (phi.band() + 1) * 10);
  CHECK_THROWS_AS(hierarchy_compute(phi, 10), Error);
  CHECK_THROWS_AS(h.hamiltonian(10), Error);
}

TEST_CASE("sign conventions") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const auto cal = hierarchy_compute(phi, 3, HierarchySign::calibrated);
  const auto alt = hierarchy_compute(phi, 3, HierarchySign::alternating);
  const auto app = hierarchy_compute(phi, 3, HierarchySign::paper_appendix);
  CHECK(alt.hamiltonian(1) == cal.hamiltonian(1));
  CHECK(alt.hamiltonian(3) == -cal.hamiltonian(3));
  CHECK(app.hamiltonian(1) == -cal.hamiltonian(1));
  CHECK(parse_hierarchy_sign("paper-appendix") == HierarchySign::paper_appendix);
  CHECK_THROWS_AS(parse_hierarchy_sign("upside-down"), Error);
}

TEST_CASE("trace formulas for the constant potential") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const DiscriminantEvaluator ev(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, 8);
  ActionOptions o;
  o.levels = {1, 3};
  const ActionSpectrum as = compute_actions(ev, sp, o);
  const auto h = hierarchy_compute(phi, 3);
  const TraceReport t1 = trace_check(as, h, 1);
  CHECK(t1.passed);
  CHECK(t1.lhs == Approx(0.25).epsilon(1e-10));
  const TraceReport t3 = trace_check(as, h, 3);
  CHECK(t3.passed);
  CHECK(t3.lhs == Approx(0.015625).epsilon(1e-10));
  CHECK(t3.rhs.real() == Approx(0.0625 / 4).epsilon(1e-14));

  const FourierPotential zero = FourierPotential::zero();
  const DiscriminantEvaluator ez(zero);
  const PeriodicSpectrum sz = locate_spectrum(ez, 4);
  const TraceReport tz = trace_check(compute_actions(ez, sz, o), hierarchy_compute(zero, 3), 3);
  CHECK(tz.lhs == 0.0);
  CHECK(tz.passed);
}

TEST_CASE("trace formulas for a random potential") {
  const FourierPotential phi = scaled_random(16, 1.0);
  const DiscriminantEvaluator ev(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, localization_threshold(phi) + 40);
  const ActionSpectrum as = compute_actions(ev, sp);
  const auto h = hierarchy_compute(phi, 7);
  for (int k : {1, 2, 3, 5}) CHECK_MESSAGE(trace_check(as, h, k, 1e-5).passed, "k = " << k);
}

TEST_CASE("h-form remainders") {
  const HformReport c = hform_check(FourierPotential::constant(0.5), 1);
  CHECK(c.h_odd == Approx(0.0625));
  CHECK(c.derivative == 0.0);
  CHECK(c.remainder == Approx(0.0625));
  CHECK(hform_check(FourierPotential::zero(), 2).remainder == 0.0);
  const HformReport r = hform_check(random_potential(random_spec(11)), 2);
  CHECK(r.passed);
  CHECK(std::isfinite(r.constant));
  CHECK_THROWS_AS(hform_check(FourierPotential::pair({{0, 1.0}}, {{0, 2.0}}), 1), Error);
}
