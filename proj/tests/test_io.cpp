#include "helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "birkhoff/io.hpp"

using namespace testing;
using doctest::Approx;
using birkhoff::io::json;

namespace fs = std::filesystem;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::range;
}

}  // namespace

TEST_CASE("potential specs") {
  const FourierPotential c = io::potential_from_json(json::parse(R"({"type":"constant","a":0.5})"));
  CHECK(c.psi_coeff(0) == cplx{0.5, 0.0});
  const FourierPotential f =
      io::potential_from_json(json::parse(R"({"type":"fourier","coeffs":[{"k":-2,"re":0.1,"im":0.2},{"k":3,"re":1}]})"));
  CHECK(f.band() == 3);
  CHECK(f.psi_coeff(-2) == cplx{0.1, 0.2});
  CHECK(f.psi_coeff(3) == cplx{1.0, 0.0});
  const FourierPotential r =
      io::potential_from_json(json::parse(R"({"type":"random","K":4,"decay":"abel","s":1,"a":0.2,"seed":9,"amplitude":0.5})"));
  RandomPotentialSpec spec;
  spec.K = 4;
  spec.decay = RandomPotentialSpec::Decay::abel;
  spec.a = 0.2;
  spec.seed = 9;
  spec.amplitude = 0.5;
  CHECK(r.psi_coeff(2) == random_potential(spec).psi_coeff(2));
  // round trip through the fourier form
  const FourierPotential back = io::potential_from_json(io::potential_to_json(r));
  for (int k = -4; k <= 4; ++k) CHECK(back.psi_coeff(k) == r.psi_coeff(k));

  CHECK(kind_of([] { io::potential_from_json(json::parse(R"({"type":"wavelet"})")); }) == ErrorKind::config);
  CHECK(kind_of([] { io::potential_from_json(json::parse(R"({"type":"constant"})")); }) == ErrorKind::config);
  CHECK(kind_of([] { io::potential_from_json(json::parse(R"({"type":"constant","a":"big"})")); }) == ErrorKind::config);
  CHECK(kind_of([] { io::potential_from_json(json::parse("[1,2]")); }) == ErrorKind::config);
}

TEST_CASE("weight specs") {
  CHECK(io::weight_from_json(json::parse(R"({"kind":"sobolev","s":2})"))(3) == Approx(std::pow(1 + 3 * pi, 2)));
  CHECK(io::weight_from_json(json::parse(R"({"kind":"abel","s":0,"a":1})"))(2) == Approx(std::exp(2.0)));
  CHECK(io::weight_from_json(json::parse(R"({"kind":"gevrey","s":1,"a":1,"sigma":0.5})"))(3) ==
        Approx((1 + 3 * pi) * std::exp(std::sqrt(3.0))));
  const Weight t = io::weight_from_json(json::parse(R"({"kind":"custom","table":[1,2,4]})"));
  CHECK(t(-2) == 4.0);
  CHECK(t.range() == 2);
  CHECK(kind_of([] { io::weight_from_json(json::parse(R"({"kind":"custom"})")); }) == ErrorKind::config);
}

TEST_CASE("grid and family specs") {
  const auto pts = io::grid_from_json(json::parse(R"({"points":[[1,2],3]})"));
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == cplx{1, 2});
  CHECK(pts[1] == cplx{3, 0});
  const auto tensor = io::grid_from_json(json::parse(R"({"re":{"from":-1,"to":1,"count":5},"im":{"from":0,"to":1,"count":2}})"));
  REQUIRE(tensor.size() == 10);
  CHECK(tensor[4] == cplx{1, 0});
  CHECK(tensor[5] == cplx{-1, 1});

  const io::FamilyConfig f = io::family_from_json(
      json::parse(R"({"count":4,"base_seed":10,"K":6,"norms":[0.5,1],"weights":[{"kind":"sobolev","s":2}]})"));
  CHECK(f.spec.count == 4);
  CHECK(f.spec.base_seed == 10);
  CHECK(f.spec.K == 6);
  CHECK(f.spec.norms == std::vector<double>{0.5, 1.0});
  REQUIRE(f.weights.size() == 1);
  CHECK(f.weights[0].s() == 2.0);
  CHECK(kind_of([] { io::family_from_json(json::parse(R"({"decay":"gaussian"})")); }) == ErrorKind::config);
}

TEST_CASE("list and range parsing") {
  CHECK(io::parse_index_range("4..32") == std::pair{4, 32});
  CHECK(io::parse_index_range("-3..-1") == std::pair{-3, -1});
  CHECK(io::parse_index_range("7") == std::pair{7, 7});
  CHECK(kind_of([] { io::parse_index_range("9..2"); }) == ErrorKind::config);
  CHECK(kind_of([] { io::parse_index_range("a..b"); }) == ErrorKind::config);
  CHECK(io::parse_int_list("1,3,5") == std::vector<int>{1, 3, 5});
  CHECK(io::split_list("b-est,,act-sob") == std::vector<std::string>{"b-est", "act-sob"});
}

TEST_CASE("doubles round-trip through their shortest form") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(mant(gen), ex(gen));
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1e300 * 1e300) == "inf");
  CHECK(io::format_double(-1e300 * 1e300) == "-inf");
}

TEST_CASE("atomic writes leave no temporaries behind") {
  const fs::path dir = fs::temp_directory_path() / "birkhoff_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path file = dir / "out.csv";
  io::atomic_write(file, "first\n");
  io::atomic_write(file, "second\n");
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK(kind_of([&] { io::atomic_write(dir / "missing" / "x.csv", "x"); }) == ErrorKind::config);
  fs::remove_all(dir);
}

TEST_CASE("emitters") {
  const FourierPotential phi = FourierPotential::constant(0.5);
  const DiscriminantEvaluator ev(phi);
  const PeriodicSpectrum sp = locate_spectrum(ev, 6);
  const std::string csv = io::spectrum_csv(sp);
  CHECK(csv.rfind("n,lambda_minus,lambda_plus,lambda_dot,tau,gamma,collapsed,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 14);

  const std::vector<cplx> pts{0.0};
  const std::string d = io::discriminant_csv(ev.evaluate_grid(pts));
  CHECK(d.find("lambda_re,lambda_im,delta_re,delta_im,delta_dot_re,delta_dot_im,err") == 0);

  const json h = io::hierarchy_json(hierarchy_compute(phi, 3));
  CHECK(h["3"]["re"].get<double>() == Approx(0.0625));
  CHECK(h.size() == 3);

  EstimateReport r;
  r.theorem = "act-sob-i";
  r.parameter = "m=2";
  r.per_potential = {{1, 1.0, 2.0, 0.5}};
  r.empirical_constant = 0.5;
  r.passed = true;
  EstimateReport w = r;
  w.parameter = "sobolev(s=1)";
  w.empirical_constant = INFINITY;
  const json e = io::estimates_json({r, w});
  CHECK(e[0]["m"] == 2);
  CHECK(e[0]["perPotential"][0]["ratio"] == 0.5);
  CHECK(e[0]["empiricalConstant"] == 0.5);
  CHECK(e[1]["weight"] == "sobolev(s=1)");
  CHECK(e[1]["empiricalConstant"].is_null());
}

TEST_CASE("malformed files are configuration errors") {
  const fs::path p = fs::temp_directory_path() / "birkhoff_bad.json";
  {
    std::ofstream out(p);
    out << "{\"type\": ";
  }
  CHECK(kind_of([&] { io::read_json_file(p); }) == ErrorKind::config);
  CHECK(kind_of([] { io::read_json_file("/nonexistent/p.json"); }) == ErrorKind::config);
  fs::remove(p);
}
