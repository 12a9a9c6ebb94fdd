#include "helpers.hpp"

#include "birkhoff/lyapunov_schmidt.hpp"

using namespace testing;
using doctest::Approx;

TEST_CASE("zero potential reduces to lambda - n pi") {
  const ReductionWorkspace ws(FourierPotential::zero(), 5);
  const LsCoefficients c = ls_coefficients(ws, 5 * pi + 0.1);
  CHECK(std::abs(c.a()) == 0.0);
  CHECK(std::abs(c.b_plus) == 0.0);
  CHECK(std::abs(c.b_minus) == 0.0);
  const LsRoots r = detS_roots(ws);
  CHECK(std::abs(r.xi_plus - 5 * pi) < 1e-14);
  CHECK(std::abs(r.xi_minus - 5 * pi) < 1e-14);
}

TEST_CASE("constant potential at n = 4") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const ReductionWorkspace ws(phi, 4);
  const LsCoefficients c = ls_coefficients(ws, 4 * pi);
  CHECK(std::abs(c.a()) <= 0.5 / 5.0);
  // phi_{2n} vanishes for the constant, so b itself is bounded
  const double bb = 8.0 / 5.0 * 0.5 * weighted_norm_plus(phi, Weight::sobolev(1.0));
  CHECK(std::abs(c.b_plus) <= bb);
  CHECK(std::abs(c.b_minus) <= bb);
  CHECK(c.symmetry < 1e-12);
  const LsRoots r = detS_roots(ws);
  const double exact = std::sqrt(16 * pi * pi + 0.25);
  CHECK(r.xi_plus.real() == Approx(exact).epsilon(1e-13));
  CHECK(r.xi_minus.real() == Approx(exact).epsilon(1e-13));
  CHECK(exact == Approx(12.5764).epsilon(1e-5));
  CHECK(r.in_disc);
}

TEST_CASE("gauge covariance of the coefficients") {
  // psi e^{2 pi i x} at index n is the original problem at n + 1, moved by pi.
  // The shifted potential is far below its own threshold, hence the override.
  const FourierPotential phi = FourierPotential::constant(0.5);
  const FourierPotential g = gauge_shift(phi, 1);
  const ReductionWorkspace ws_g(g, 5), ws(phi, 6);
  try {
    ls_coefficients(ws_g, 5 * pi);
    FAIL("expected a threshold error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::threshold);
  }
  const cplx lam = 5 * pi + cplx{0.2, 0.1};
  const LsCoefficients a = ls_coefficients(ws_g, lam, false, false);
  const LsCoefficients b = ls_coefficients(ws, lam + pi);
  CHECK(std::abs(a.a() - b.a()) < 1e-13);
  CHECK(std::abs(std::abs(a.b_plus) - std::abs(b.b_plus)) < 1e-13);
  CHECK(std::abs(std::abs(a.b_minus) - std::abs(b.b_minus)) < 1e-13);
  CHECK(std::abs(b.a()) <= 0.5 / 7.0);
  const LsRoots r = detS_roots(ws_g, false);
  CHECK(r.xi_plus.real() == Approx(std::sqrt(36 * pi * pi + 0.25) - pi).epsilon(1e-12));
}

TEST_CASE("operator norm bounds") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const ReductionWorkspace ws(phi, 6);
  const OperatorNormReport r = operator_norm_checks(ws, 6 * pi, Weight::sobolev(1.0));
  CHECK(r.t2_bound == Approx(4 * 0.5 / 7).epsilon(1e-14));
  CHECK(r.t2_norm <= r.t2_bound);
  CHECK(r.passed);
  const OperatorNormReport z = operator_norm_checks(ReductionWorkspace(FourierPotential::zero(), 3), 3 * pi,
                                                    Weight::sobolev(1.0));
  CHECK(z.t_norm == 0.0);
  CHECK(z.t2_norm == 0.0);

  const FourierPotential rnd = random_potential(random_spec(5));
  const int N = localization_threshold(rnd);
  const OperatorNormReport q = operator_norm_checks(ReductionWorkspace(rnd, N), N * pi + 0.3, Weight::sobolev(1.0));
  CHECK(q.t_norm <= q.t_bound);
  CHECK(q.t2_norm <= q.t2_bound);
}

TEST_CASE("strip and threshold errors") {
  const ReductionWorkspace ws(FourierPotential::constant(0.5), 4);
  CHECK_THROWS_AS(ls_coefficients(ws, 4 * pi + 2.0), Error);
  const FourierPotential big = FourierPotential::constant(2.0);
  CHECK_THROWS_AS(ls_coefficients(ReductionWorkspace(big, 3), 3 * pi), Error);
}

TEST_CASE("derivatives of the coefficients") {
  const FourierPotential phi = scaled_random(31, 0.6);
  const int n = localization_threshold(phi) + 1;
  const ReductionWorkspace ws(phi, n);
  const cplx lam = n * pi + cplx{0.1, 0.05};
  const double h = 1e-6;
  const LsCoefficients c = ls_coefficients(ws, lam, true);
  const LsCoefficients p = ls_coefficients(ws, lam + h), m = ls_coefficients(ws, lam - h);
  CHECK(std::abs(c.da - (p.a() - m.a()) / (2 * h)) < 1e-7);
  CHECK(std::abs(c.db_plus - (p.b_plus - m.b_plus) / (2 * h)) < 1e-7);
  CHECK(std::abs(c.db_minus - (p.b_minus - m.b_minus) / (2 * h)) < 1e-7);
}

TEST_CASE("roots match the periodic spectrum") {
  const FourierPotential phi = scaled_random(32, 1.0);
  const DiscriminantEvaluator ev(phi);
  const int N = localization_threshold(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, N + 10);
  for (int n : {N, N + 3, -N - 2}) {
    const LsCheck c = ls_check(phi, n, Weight::sobolev(1.0), &sp);
    CHECK_MESSAGE(c.passed, "n = " << n);
    CHECK(c.root_error < 1e-8);
    CHECK(c.worst_symmetry < 1e-9);
    CHECK(c.gap_sq <= 6 * c.bb_sup + 1e-20);
  }
}
