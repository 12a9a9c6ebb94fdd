// Command-line front end: one subcommand per pipeline plus the acceptance suite.
//
// Exit status: 0 when every assertion in scope holds, 2 for configuration
// errors, 3 for numerical failures. Failures print a one-line JSON diagnostic
// on stderr (and into --diagnostics when given).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>

#include "birkhoff/acceptance.hpp"

namespace {

using namespace birkhoff;
using json = io::json;

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

struct Common {
  int threads = 0;
  std::string diagnostics;
};

// raised when the computation finished but an assertion did not hold
struct AssertionFailure {
  json details;
};

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    io::atomic_write(out, content);
}

void apply_threads(int cli_threads) {
  int n = 0;
  if (const char* env = std::getenv("BIRKHOFF_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::config, std::string("BIRKHOFF_THREADS is not an integer: ") + env);
    }
  } else if (cli_threads > 0) {
    n = cli_threads;
  }
  set_threads(n);
}

FourierPotential load_potential(const std::string& path) {
  return io::potential_from_json(io::read_json_file(path));
}

DiscriminantOptions reaching(int n_max) {
  DiscriminantOptions o;
  o.index_reach = n_max;
  return o;
}

// N_max never goes below N_loc + 2; a low request is raised with a warning
int checked_n_max(const FourierPotential& phi, int requested) {
  const int floor_n = localization_threshold(phi) + 2;
  if (requested < floor_n) {
    std::cerr << "warning: --nmax " << requested << " is below ceil(8 ||phi||_1^2) + 2; raised to " << floor_n << "\n";
    return floor_n;
  }
  return requested;
}

void run_discriminant(const std::string& potential, const std::string& grid, const std::string& out,
                      int subintervals, const std::string& scheme) {
  DiscriminantOptions o;
  o.subintervals = subintervals;
  if (scheme == "midpoint")
    o.scheme = Scheme::midpoint;
  else if (scheme != "magnus4")
    throw Error(ErrorKind::config, "unknown scheme '" + scheme + "'");
  const auto lambdas = io::grid_from_json(io::read_json_file(grid));
  double reach = 0;
  for (cplx l : lambdas) reach = std::max(reach, std::abs(l.real()) / std::numbers::pi + 1.0);
  o.index_reach = static_cast<int>(std::min(reach, 1e7));
  const DiscriminantEvaluator ev(load_potential(potential), o);
  const auto entries = ev.evaluate_grid(lambdas);
  emit(out, io::discriminant_csv(entries));
  json bad = json::array();
  for (const auto& e : entries)
    if (!e.ok)
      bad.push_back({{"lambda", {e.sample.lambda.real(), e.sample.lambda.imag()}},
                     {"kind", to_string(e.kind)},
                     {"message", e.message}});
  if (!bad.empty()) throw AssertionFailure{{{"failed_points", bad}}};
}

void run_spectrum(const std::string& potential, int nmax, double gap_tol_scale, const std::string& out) {
  const FourierPotential phi = load_potential(potential);
  const int n = checked_n_max(phi, nmax);
  const DiscriminantEvaluator ev(phi, reaching(n));
  SpectrumOptions so;
  so.gap_tol_scale = gap_tol_scale;
  const PeriodicSpectrum sp = locate_spectrum(ev, n, so);
  emit(out, io::spectrum_csv(sp));
  const LocalizationReport loc = localization_report(sp, phi);
  if (!loc.passed()) {
    json bad = json::array();
    for (const auto& e : loc.entries)
      if (!e.ok) bad.push_back({{"n", e.n}, {"displacement", e.displacement}, {"bound", e.bound}});
    throw AssertionFailure{{{"localization_failures", bad}}};
  }
}

void run_actions(const std::string& potential, int nmax, const std::string& levels, const std::string& method,
                 const std::string& out) {
  if (method != "gap" && method != "contour" && method != "both")
    throw Error(ErrorKind::config, "--method must be gap, contour or both");
  const FourierPotential phi = load_potential(potential);
  const int n = checked_n_max(phi, nmax);
  const DiscriminantEvaluator ev(phi, reaching(n));
  const PeriodicSpectrum sp = locate_spectrum(ev, n);
  const std::vector<int> ks = io::parse_int_list(levels);
  for (int k : ks)
    if (k < 1) throw Error(ErrorKind::config, "levels must be positive");
  const bool gap = method != "contour", contour = method != "gap";
  const auto per_index = parallel_map(static_cast<std::size_t>(2 * sp.n_max + 1), [&](std::size_t i) {
    const int n = static_cast<int>(i) - sp.n_max;
    std::vector<io::ActionRow> rows;
    if (gap) {
      const GapIntegral g = action_gap_integral(ev, sp, n, ks);
      for (int k : ks) rows.push_back({n, k, g.J.at(k), "gap", g.change});
    }
    if (contour) {
      const ContourResult c = action_contour(ev, sp, n);
      rows.push_back({n, 1, c.value, "contour", c.imag_residue});
    }
    return rows;
  });
  std::vector<io::ActionRow> rows;
  for (const auto& r : per_index) rows.insert(rows.end(), r.begin(), r.end());
  emit(out, io::actions_csv(rows));
  if (gap && contour) {
    json bad = json::array();
    for (const auto& r : per_index) {
      double g = 0, c = 0;
      for (const auto& row : r) {
        if (row.method == "gap" && row.k == 1) g = row.J;
        if (row.method == "contour") c = row.J;
      }
      if (std::abs(g - c) > 1e-6 * std::max(std::abs(g), 1e-12)) bad.push_back({{"n", r.front().n}, {"gap", g}, {"contour", c}});
    }
    if (!bad.empty()) throw AssertionFailure{{{"method_disagreement", bad}}};
  }
}

void run_hierarchy(const std::string& potential, int kmax, const std::string& sign, const std::string& out) {
  const auto h = hierarchy_compute(load_potential(potential), kmax, parse_hierarchy_sign(sign));
  emit(out, io::hierarchy_json(h).dump(2) + "\n");
}

void run_ls_check(const std::string& potential, const std::string& range, const std::string& weight, int truncation,
                  const std::string& out) {
  const FourierPotential phi = load_potential(potential);
  const Weight w = weight.empty() ? Weight::sobolev(1.0) : io::weight_from_json(io::read_json_file(weight));
  const auto [lo, hi] = io::parse_index_range(range);
  const int reach = std::max(std::abs(lo), std::abs(hi)) + 2;
  const int n_max = std::max(reach, localization_threshold(phi) + 2);
  const DiscriminantEvaluator ev(phi, reaching(n_max));
  const PeriodicSpectrum sp = locate_spectrum(ev, n_max);
  const auto checks = parallel_map(static_cast<std::size_t>(hi - lo + 1), [&](std::size_t i) {
    return ls_check(phi, lo + static_cast<int>(i), w, &sp, truncation);
  });
  emit(out, io::ls_csv(checks));
  json bad = json::array();
  for (const auto& c : checks)
    if (!c.passed) bad.push_back(c.n);
  if (!bad.empty()) throw AssertionFailure{{{"failed_indices", bad}}};
}

void run_estimates(const std::string& family, const std::string& theorems, const std::string& out) {
  const io::FamilyConfig cfg = io::family_from_json(io::read_json_file(family));
  const std::vector<std::string> groups = io::split_list(theorems);
  if (groups.empty()) throw Error(ErrorKind::config, "no theorem groups given");
  AnalysisOptions ao;
  ao.weights = cfg.weights;
  const auto analyses = analyze_family(generate_family(cfg.spec), ao);
  const auto reports = family_estimates(analyses, groups, cfg.weights);
  emit(out, io::estimates_json(reports).dump(2) + "\n");
  json bad = json::array();
  for (const auto& r : reports)
    if (!r.passed) bad.push_back(r.theorem + " " + r.parameter);
  if (!bad.empty()) throw AssertionFailure{{{"unbounded_ratios", bad}}};
}

void run_verify_all(bool quick, const std::string& config, const std::string& out) {
  AcceptanceOptions opts = quick ? AcceptanceOptions::quick() : AcceptanceOptions{};
  if (!config.empty()) {
    json j = io::read_json_file(config);
    if (quick) j["quick"] = true;
    opts = AcceptanceOptions::from_json(j);
  }
  const auto results = run_acceptance(opts, [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; });
  json all = json::array();
  json bad = json::array();
  for (const auto& r : results) {
    all.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary},
                   {"seconds", r.seconds}, {"details", r.details}});
    if (!r.passed) bad.push_back(r.id);
  }
  if (!out.empty()) io::atomic_write(out, all.dump(2) + "\n");
  if (!bad.empty()) throw AssertionFailure{{{"failed_criteria", bad}}};
}

void report(const Common& common, const std::string& sub, const json& diag) {
  json d = diag;
  d["subcommand"] = sub;
  std::cerr << d.dump() << "\n";
  if (!common.diagnostics.empty()) {
    try {
      io::atomic_write(common.diagnostics, d.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "could not write diagnostics: " << e.what() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic Zakharov-Shabat spectra, NLS actions and Birkhoff-norm estimates"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "worker threads (BIRKHOFF_THREADS overrides)");
  app.add_option("--diagnostics", common.diagnostics, "also write failure diagnostics JSON here");

  std::string potential, grid, out, scheme = "magnus4", levels = "1,3,5", method = "both", sign = "calibrated";
  std::string range = "4..32", weight, family, theorems = "b-est,act-sob,act-west", config;
  int nmax = 64, kmax = 7, subintervals = 0, truncation = 0;
  double gap_tol_scale = 1e-9;
  bool quick = false;

  auto* disc = app.add_subcommand("discriminant", "Delta and Delta' on a grid of lambda values");
  disc->add_option("--potential", potential, "potential JSON file")->required();
  disc->add_option("--grid", grid, "grid JSON file")->required();
  disc->add_option("--out", out, "output file, stdout if omitted");
  disc->add_option("--subintervals", subintervals, "Magnus subintervals on [0,1]");
  disc->add_option("--scheme", scheme, "magnus4 or midpoint");

  auto* spec = app.add_subcommand("spectrum", "periodic eigenvalues and gaps up to |n| = nmax");
  spec->add_option("--potential", potential, "potential JSON file")->required();
  spec->add_option("--nmax", nmax, "largest |n|, raised to the localization threshold if needed");
  spec->add_option("--gap-tol-scale", gap_tol_scale, "multiplies the collapsed-gap tolerance");
  spec->add_option("--out", out, "output file, stdout if omitted");

  auto* act = app.add_subcommand("actions", "action variables and higher actions");
  act->add_option("--potential", potential, "potential JSON file")->required();
  act->add_option("--nmax", nmax, "largest |n|, raised to the localization threshold if needed");
  act->add_option("--levels", levels, "odd levels, e.g. 1,3,5");
  act->add_option("--method", method, "gap, contour or both");
  act->add_option("--out", out, "output file, stdout if omitted");

  auto* hier = app.add_subcommand("hierarchy", "NLS hierarchy Hamiltonians H_1..H_kmax");
  hier->add_option("--potential", potential, "potential JSON file")->required();
  hier->add_option("--kmax", kmax, "highest Hamiltonian");
  hier->add_option("--sign", sign, "calibrated, alternating or paper-appendix");
  hier->add_option("--out", out, "output file, stdout if omitted");

  auto* ls = app.add_subcommand("ls-check", "Lyapunov-Schmidt reduction checks for a range of n");
  ls->add_option("--potential", potential, "potential JSON file")->required();
  ls->add_option("--n", range, "a..b");
  ls->add_option("--weight", weight, "weight JSON file");
  ls->add_option("--truncation", truncation, "Fourier truncation of the reduction");
  ls->add_option("--out", out, "output file, stdout if omitted");

  auto* est = app.add_subcommand("estimates", "empirical constants of the norm estimates over a family");
  est->add_option("--family", family, "family JSON file")->required();
  est->add_option("--theorems", theorems, "b-est,act-sob,act-west,real-exponent");
  est->add_option("--out", out, "output file, stdout if omitted");

  auto* ver = app.add_subcommand("verify-all", "run the acceptance suite");
  ver->add_flag("--quick", quick, "small families");
  ver->add_option("--config", config, "acceptance JSON file");
  ver->add_option("--out", out, "output file, stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    apply_threads(common.threads);
    if (sub == "discriminant") run_discriminant(potential, grid, out, subintervals, scheme);
    else if (sub == "spectrum") run_spectrum(potential, nmax, gap_tol_scale, out);
    else if (sub == "actions") run_actions(potential, nmax, levels, method, out);
    else if (sub == "hierarchy") run_hierarchy(potential, kmax, sign, out);
    else if (sub == "ls-check") run_ls_check(potential, range, weight, truncation, out);
    else if (sub == "estimates") run_estimates(family, theorems, out);
    else run_verify_all(quick, config, out);
  } catch (const AssertionFailure& f) {
    json d = f.details;
    d["status"] = "assertion-failed";
    report(common, sub, d);
    return kNumericExit;
  } catch (const Error& e) {
    report(common, sub, {{"status", "error"}, {"kind", to_string(e.kind())}, {"message", e.what()}});
    return e.kind() == ErrorKind::config ? kConfigExit : kNumericExit;
  } catch (const json::exception& e) {
    report(common, sub, {{"status", "error"}, {"kind", "config"}, {"message", e.what()}});
    return kConfigExit;
  } catch (const std::exception& e) {
    report(common, sub, {{"status", "error"}, {"kind", "internal"}, {"message", e.what()}});
    return kNumericExit;
  }
  return 0;
}
