#include "helpers.hpp"

using namespace testing;
using doctest::Approx;

TEST_CASE("zero potential spectrum") {
  const DiscriminantEvaluator ev(FourierPotential::zero());
  const PeriodicSpectrum sp = locate_spectrum(ev, 8);
  for (int n = -8; n <= 8; ++n) {
    const GapRecord& g = sp.at(n);
    CHECK(g.lambda_minus == Approx(n * pi).epsilon(1e-12));
    CHECK(g.lambda_plus == Approx(n * pi).epsilon(1e-12));
    CHECK(g.gamma < 1e-9);
    CHECK(g.collapsed);
  }
}

TEST_CASE("constant potential spectrum") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const DiscriminantEvaluator ev(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, 12);
  CHECK(sp.threshold == 4);
  CHECK(sp.at(0).lambda_minus == Approx(-0.5).epsilon(1e-12));
  CHECK(sp.at(0).lambda_plus == Approx(0.5).epsilon(1e-12));
  CHECK(sp.at(0).gamma == Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(sp.at(0).collapsed);
  for (int n = -12; n <= 12; ++n) {
    if (n == 0) continue;
    const double exact = (n > 0 ? 1 : -1) * std::sqrt(n * n * pi * pi + 0.25);
    CHECK(sp.at(n).collapsed);
    CHECK(sp.at(n).gamma == 0.0);
    CHECK(sp.at(n).lambda_minus == Approx(exact).epsilon(1e-12));
    CHECK(sp.at(n).lambda_plus == Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("gauge shift translates the spectrum by pi") {
  // psi e^{2 pi i x} has eigenvalues lambda_{n+1}(psi) - pi under this
  // library's labeling, so the open gap of the constant lands at n = -1
  const FourierPotential phi = random_potential(random_spec(5, RandomPotentialSpec::Decay::sobolev, 0.3));
  const PeriodicSpectrum a = locate_spectrum(DiscriminantEvaluator(phi), 20);
  const FourierPotential moved = gauge_shift(phi, 1);
  const PeriodicSpectrum b = locate_spectrum(DiscriminantEvaluator(moved), std::max(20, localization_threshold(moved) + 2));
  for (int n = -19; n <= 18; ++n) {
    CHECK(b.at(n).lambda_minus == Approx(a.at(n + 1).lambda_minus - pi).epsilon(1e-10));
    CHECK(b.at(n).lambda_plus == Approx(a.at(n + 1).lambda_plus - pi).epsilon(1e-10));
  }
  const FourierPotential shifted = gauge_shift(FourierPotential::constant(0.5), 1);
  const PeriodicSpectrum c = locate_spectrum(DiscriminantEvaluator(shifted), localization_threshold(shifted) + 2);
  int open = 0;
  for (const GapRecord& g : c.entries) open += g.collapsed ? 0 : 1;
  CHECK(open == 1);
  CHECK_FALSE(c.at(-1).collapsed);
  CHECK(c.at(-1).gamma == Approx(1.0).epsilon(1e-8));
  CHECK(c.at(-1).tau == Approx(-pi).epsilon(1e-10));
}

TEST_CASE("rectangle counts") {
  const DiscriminantEvaluator zero(FourierPotential::zero());
  CHECK(count_in_rectangle(zero, {-pi / 2, pi / 2, -pi / 2, pi / 2}) == 2);
  const DiscriminantEvaluator c(FourierPotential::constant(0.5));
  CHECK(count_in_rectangle(c, {-0.8, 0.8, -0.5, 0.5}) == 2);
  CHECK(count_in_rectangle(c, {pi - 0.3, pi + 0.3, -0.3, 0.3}) == 2);
  CHECK(count_in_rectangle(c, {1.0, 2.5, -0.3, 0.3}) == 0);
}

TEST_CASE("localization of the constant potential") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const PeriodicSpectrum sp = locate_spectrum(DiscriminantEvaluator(phi), 10);
  const LocalizationReport rep = localization_report(sp, phi);
  CHECK(rep.passed());
  bool seen = false;
  for (const auto& e : rep.entries)
    if (e.n == 4) {
      seen = true;
      CHECK(e.above);
      CHECK(e.displacement == Approx(std::sqrt(16 * pi * pi + 0.25) - 4 * pi).epsilon(1e-9));
      CHECK(e.displacement == Approx(0.00995).epsilon(1e-3));
      CHECK(e.bound == Approx(0.1 + std::sqrt(2.0) * std::sqrt(0.5) / 9.0).epsilon(1e-12));
    }
  CHECK(seen);
}

TEST_CASE("zero potential margins are the full bounds") {
  const FourierPotential phi = FourierPotential::zero();
  const LocalizationReport rep = localization_report(locate_spectrum(DiscriminantEvaluator(phi), 6), phi);
  CHECK(rep.passed());
  for (const auto& e : rep.entries) CHECK(e.displacement < 1e-12);
  CHECK(rep.worst_cap_margin == Approx(pi / 5).epsilon(1e-12));
}

TEST_CASE("random potentials satisfy localization and gap bounds") {
  const FourierPotential phi = random_potential(random_spec(7));
  const DiscriminantEvaluator ev(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, localization_threshold(phi) + 8);
  CHECK(sp.counted == sp.expected);
  CHECK(localization_report(sp, phi).passed());

  const FourierPotential ab = random_potential(random_spec(3, RandomPotentialSpec::Decay::abel, 0.3));
  const Weight w = Weight::abel(1.0, 0.2);
  const int need = static_cast<int>(std::ceil(8 * weighted_norm_sq(ab, w))) + 4;
  const PeriodicSpectrum sa = locate_spectrum(DiscriminantEvaluator(ab), std::max(need, localization_threshold(ab) + 2));
  const GapReport g = gap_report(sa, ab, w);
  CHECK(g.passed());
  CHECK(g.sum_lhs <= g.sum_rhs);
}

TEST_CASE("spectrum errors") {
  const FourierPotential phi = FourierPotential::constant(1.0);
  const DiscriminantEvaluator ev(phi);
  try {
    locate_spectrum(ev, localization_threshold(phi));
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::range);
  }
  // 8 ||phi||_w^2 is astronomically large under a steep Abel weight
  const FourierPotential two = FourierPotential::real_type({{2, 0.1}});
  const PeriodicSpectrum sp = locate_spectrum(DiscriminantEvaluator(two), localization_threshold(two) + 2);
  CHECK_THROWS_AS(gap_report(sp, two, Weight::abel(1.0, 3.0)), Error);
}

TEST_CASE("serial and parallel spectra agree") {
  const FourierPotential phi = random_potential(random_spec(12, RandomPotentialSpec::Decay::sobolev, 0.4));
  const DiscriminantEvaluator ev(phi);
  SpectrumOptions s, p;
  s.exec = Execution::serial;
  p.exec = Execution::parallel;
  const PeriodicSpectrum a = locate_spectrum(ev, 16, s), b = locate_spectrum(ev, 16, p);
  for (int n = -16; n <= 16; ++n) {
    CHECK(a.at(n).lambda_minus == b.at(n).lambda_minus);
    CHECK(a.at(n).lambda_plus == b.at(n).lambda_plus);
  }
}
