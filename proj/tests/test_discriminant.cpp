#include "helpers.hpp"

using namespace testing;
using doctest::Approx;

namespace {

cplx constant_delta(double a, cplx lambda) { return 2.0 * std::cos(std::sqrt(lambda * lambda - a * a)); }

}  // namespace

TEST_CASE("discriminant closed forms") {
  const DiscriminantEvaluator zero(FourierPotential::zero());
  CHECK(std::abs(zero.evaluate(0.0).delta - 2.0) < 1e-14);
  const DiscriminantEvaluator c(FourierPotential::constant(0.5));
  const DiscriminantSample s = c.evaluate(0.0);
  CHECK(s.delta.real() == Approx(2.0 * std::cosh(0.5)).epsilon(1e-13));
  CHECK(s.delta.real() == Approx(2.25525).epsilon(1e-5));
  for (cplx lam : {cplx{3.7, 0.0}, cplx{-11.2, 0.4}, cplx{0.2, -1.5}}) {
    const DiscriminantSample t = c.evaluate(lam);
    CHECK(std::abs(t.delta - constant_delta(0.5, lam)) < 1e-12 * std::max(1.0, std::abs(t.delta)));
    const cplx r = std::sqrt(lam * lam - 0.25);
    const cplx dd = -2.0 * std::sin(r) * lam / r;
    CHECK(std::abs(t.delta_dot - dd) < 1e-11 * std::max(1.0, std::abs(dd)));
  }
}

TEST_CASE("imaginary axis asymptotics") {
  const DiscriminantEvaluator ev(random_potential(random_spec(2)));
  double prev = INFINITY;
  for (double tau : {5.0, 10.0, 20.0}) {
    const cplx d = ev.evaluate(cplx{0.0, tau}).delta;
    const double dev = std::abs(d / (2.0 * std::cosh(tau)) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("grid evaluation") {
  const DiscriminantEvaluator zero(FourierPotential::zero());
  const std::vector<cplx> pts{0.0, pi / 2, pi};
  const auto g = zero.evaluate_grid(pts);
  REQUIRE(g.size() == 3);
  CHECK(g[0].sample.delta.real() == Approx(2.0));
  CHECK(std::abs(g[1].sample.delta) < 1e-14);
  CHECK(g[2].sample.delta.real() == Approx(-2.0));

  const DiscriminantEvaluator c(FourierPotential::constant(0.5));
  const std::vector<cplx> ends{-0.5, 0.5};
  for (const auto& e : c.evaluate_grid(ends)) CHECK(e.sample.delta.real() == Approx(2.0).epsilon(1e-14));
  CHECK(c.evaluate_grid(std::vector<cplx>{}).empty());
}

TEST_CASE("overflow is reported per grid point") {
  const DiscriminantEvaluator ev(FourierPotential::constant(0.5));
  const std::vector<cplx> pts{1.0, cplx{0.0, 900.0}};
  const auto g = ev.evaluate_grid(pts);
  CHECK(g[0].ok);
  CHECK_FALSE(g[1].ok);
  CHECK(g[1].kind == ErrorKind::overflow);
  CHECK_THROWS_AS(ev.evaluate(cplx{0.0, 900.0}), Error);
}

TEST_CASE("serial and parallel grids agree bit for bit") {
  const DiscriminantEvaluator ev(random_potential(random_spec(3)));
  std::vector<cplx> pts;
  for (int i = 0; i < 97; ++i) pts.emplace_back(-30.0 + 0.61 * i, 0.05 * (i % 7));
  const auto a = ev.evaluate_grid(pts, Execution::serial);
  const auto b = ev.evaluate_grid(pts, Execution::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sample.delta == b[i].sample.delta);
    CHECK(a[i].sample.delta_dot == b[i].sample.delta_dot);
  }
}

TEST_CASE("derivatives match finite differences") {
  const DiscriminantEvaluator ev(random_potential(random_spec(6)));
  const cplx lam{7.3, 0.2};
  const double h = 1e-5;
  const cplx fd = (ev.evaluate(lam + h).delta - ev.evaluate(lam - h).delta) / (2 * h);
  const cplx fdd = (ev.evaluate(lam + h).delta_dot - ev.evaluate(lam - h).delta_dot) / (2 * h);
  const DiscriminantSample s = ev.evaluate(lam);
  CHECK(std::abs(s.delta_dot - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
  CHECK(std::abs(s.delta_ddot - fdd) < 1e-7 * std::max(1.0, std::abs(fdd)));
  const DiscriminantSample f = ev.evaluate_fast(lam, 1);
  CHECK(std::abs(f.delta - s.delta) < 1e-13 * std::abs(s.delta) + 1e-14);
}

TEST_CASE("schemes converge to the same value") {
  const FourierPotential phi = random_potential(random_spec(8));
  DiscriminantOptions mid;
  mid.scheme = Scheme::midpoint;
  mid.subintervals = 4096;
  DiscriminantOptions fine;
  fine.subintervals = 2048;
  const cplx lam{5.1, 0.0};
  const cplx a = DiscriminantEvaluator(phi, mid).evaluate(lam).delta;
  const cplx b = DiscriminantEvaluator(phi).evaluate(lam).delta;
  const cplx c = DiscriminantEvaluator(phi, fine).evaluate(lam).delta;
  CHECK(std::abs(b - c) < 1e-11);
  CHECK(std::abs(a - c) < 1e-5);
  const DiscriminantSample s = DiscriminantEvaluator(phi).evaluate(lam);
  CHECK(s.error_estimate < 1e-9);
}
