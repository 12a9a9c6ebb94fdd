#include "helpers.hpp"

using namespace testing;
using doctest::Approx;

TEST_CASE("sobolev norm oracles") {
  CHECK(sobolev_norm(FourierPotential::zero(), 1.0) == 0.0);
  CHECK(sobolev_norm(FourierPotential::constant(0.5), 0.0) == Approx(std::sqrt(0.5)).epsilon(1e-15));
  // one mode at e^{2 pi i x}: 2 <2 pi>^2
  CHECK(sobolev_norm(psi_exp(), 1.0) == Approx(std::sqrt(2.0) * (1.0 + 2.0 * pi)).epsilon(1e-14));
  CHECK(sobolev_norm(psi_exp(), 1.0) == Approx(10.300).epsilon(1e-4));
}

TEST_CASE("weighted norm oracles") {
  CHECK(weighted_norm(FourierPotential::zero(), Weight::abel(1.0, 0.4)) == 0.0);
  for (const Weight& w : {Weight::sobolev(2.0), Weight::abel(1.0, 0.3), Weight::gevrey(1.0, 1.0, 0.5)}) {
    CHECK(weighted_norm(FourierPotential::constant(0.7), w) == Approx(w(0) * std::sqrt(2.0) * 0.7).epsilon(1e-15));
  }
  // Abel(0, 1) at index 2 is e^2
  CHECK(weighted_norm(psi_exp(), Weight::abel(0.0, 1.0)) == Approx(std::sqrt(2.0) * std::exp(2.0)).epsilon(1e-14));
}

TEST_CASE("weighted norm outside a custom table is a range error") {
  const Weight w = Weight::custom({1.0, 2.0, 3.0});
  CHECK(weighted_norm(psi_exp(), w) == Approx(std::sqrt(2.0) * 3.0));
  const FourierPotential wide = FourierPotential::real_type({{2, 1.0}});
  try {
    weighted_norm(wide, w);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::range);
  }
}

TEST_CASE("piecewise linear weight extension") {
  // <n> itself, the convention of the hand-computed examples
  const Weight lin = Weight::custom({1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(lin.extend(3.0) == Approx(4.0));
  CHECK(lin.extend(2.5) == Approx(3.5));
  const double a = 0.7;
  CHECK(Weight::abel(0.0, a).extend(1.5) == Approx((std::exp(a) + std::exp(2 * a)) / 2).epsilon(1e-14));
  // the Sobolev weight of this library is <n pi>^s
  CHECK(Weight::sobolev(1.0).extend(3.0) == Approx(1.0 + 3.0 * pi));
  try {
    Weight::custom({1.0, 2.0}).extend(1.5);
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::range);
  }
}

TEST_CASE("weight axioms") {
  const WeightReport sob = validate_weight(Weight::sobolev(2.0));
  CHECK(sob.valid());
  CHECK(sob.in_m1);
  const WeightReport ones = validate_weight(Weight::custom(std::vector<double>(65, 1.0)));
  CHECK(ones.valid());
  CHECK_FALSE(ones.in_m1);
  const WeightReport gev = validate_weight(Weight::gevrey(1.0, 1.0, 0.5));
  CHECK(gev.valid());
  CHECK(gev.in_m1);
  // w_0 != 1 and a dip break normalization and monotonicity
  const WeightReport bad = validate_weight(Weight::custom({2.0, 3.0, 2.5, 4.0}));
  CHECK_FALSE(bad.valid());
}

TEST_CASE("gauge shift moves coefficients") {
  const FourierPotential g = gauge_shift(FourierPotential::constant(0.5), 1);
  CHECK(g.psi_coeff(1) == cplx{0.5, 0.0});
  CHECK(g.psi_coeff(0) == cplx{});
  const FourierPotential r = random_potential(random_spec(4));
  const FourierPotential same = gauge_shift(r, 0);
  for (int k = -r.band(); k <= r.band(); ++k) CHECK(same.psi_coeff(k) == r.psi_coeff(k));
  const FourierPotential back = gauge_shift(psi_exp(), -1);
  CHECK(back.psi_coeff(0) == cplx{1.0, 0.0});
  CHECK(back.band() == 0);
}

TEST_CASE("random potentials are seeded and follow the decay law") {
  const RandomPotentialSpec spec = random_spec(9);
  const FourierPotential a = random_potential(spec), b = random_potential(spec);
  CHECK(a.band() == spec.K);
  CHECK(a.is_real_type());
  for (int k = -spec.K; k <= spec.K; ++k) {
    CHECK(a.psi_coeff(k) == b.psi_coeff(k));
    CHECK(std::abs(a.psi_coeff(k)) == Approx(std::pow(1.0 + 2.0 * pi * std::abs(k), -2.0)).epsilon(1e-13));
  }
  const FourierPotential c = random_potential(random_spec(10));
  CHECK(c.psi_coeff(3) != a.psi_coeff(3));
}

TEST_CASE("derivative and quartic integrals") {
  const FourierPotential p = psi_exp(0.5);
  CHECK(derivative_l2_sq(p, 1) == Approx(0.25 * 4.0 * pi * pi));
  CHECK(quartic_integral(p) == Approx(0.0625));
  CHECK(quartic_integral(FourierPotential::constant(0.5)) == Approx(0.0625));
  // |1 + e^{2 pi i x}|^4 integrates to 6
  CHECK(quartic_integral(FourierPotential::real_type({{0, 1.0}, {1, 1.0}})) == Approx(6.0));
}
