#include "birkhoff/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace birkhoff {

namespace {

using json = io::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

CriterionResult named(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

// the constant potentials the oracle and localization criteria share
struct ConstantCase {
  double a = 0;
  FourierPotential phi;
  std::shared_ptr<const DiscriminantEvaluator> ev;
  PeriodicSpectrum sp;
  ActionSpectrum as;
};

CriterionResult constant_oracle(std::vector<ConstantCase>& cases) {
  CriterionResult r = named(1, "constant-potential oracle");
  const auto t0 = Clock::now();
  double worst_delta = 0, worst_gamma = 0, worst_i0 = 0, worst_other = 0;
  for (double a : {0.25, 0.5, 1.0}) {
    ConstantCase c;
    c.a = a;
    c.phi = FourierPotential::constant(a);
    c.ev = std::make_shared<const DiscriminantEvaluator>(c.phi);
    std::vector<cplx> grid;
    for (int i = 0; i < 100; ++i) grid.emplace_back(-20.0 + 40.0 * i / 99.0, 0.0);
    const auto samples = c.ev->evaluate_grid(grid);
    for (const auto& e : samples) {
      const cplx lam = e.sample.lambda;
      const cplx exact = 2.0 * std::cos(std::sqrt(lam * lam - a * a));
      worst_delta = std::max(worst_delta, e.ok ? std::abs(e.sample.delta - exact) / std::abs(exact) : INFINITY);
    }
    c.sp = locate_spectrum(*c.ev, localization_threshold(c.phi) + 8);
    c.as = compute_actions(*c.ev, c.sp);
    worst_gamma = std::max(worst_gamma, std::abs(c.sp.at(0).gamma - 2.0 * a));
    worst_i0 = std::max(worst_i0, std::abs(c.as.action(0) - a * a));
    for (int n = -c.sp.n_max; n <= c.sp.n_max; ++n)
      if (n != 0) worst_other = std::max(worst_other, std::abs(c.as.action(n)));
    cases.push_back(std::move(c));
  }
  r.seconds = seconds_since(t0);
  r.passed = worst_delta <= 1e-8 && worst_gamma <= 1e-8 && worst_i0 <= 1e-7 && worst_other < 1e-10 && r.seconds < 10.0;
  r.summary = "Delta rel " + fmt("%.1e", worst_delta) + ", |gamma_0 - 2a| " + fmt("%.1e", worst_gamma) +
              ", |I_0 - a^2| " + fmt("%.1e", worst_i0) + ", max other |I_n| " + fmt("%.1e", worst_other);
  r.details = {{"delta_rel", worst_delta}, {"gamma0_err", worst_gamma}, {"i0_err", worst_i0}, {"other_max", worst_other}};
  return r;
}

CriterionResult parseval(const std::vector<Analysis>& fam, double analysis_seconds) {
  CriterionResult r = named(2, "Parseval / trace level 1");
  const auto t0 = Clock::now();
  double worst = 0;
  for (const auto& a : fam) {
    const double l2 = sobolev_norm_sq(a.phi, 0.0);
    const NormValue s = level_sum(a.as, 1);
    const double dev = std::max(std::abs(2.0 * (s.truncated + s.tail) - l2), std::abs(2.0 * (s.truncated - s.tail) - l2));
    worst = std::max(worst, l2 > 0 ? dev / l2 : dev);
  }
  // the analysis of the family is part of this criterion's budget
  r.seconds = analysis_seconds + seconds_since(t0);
  r.passed = worst <= 1e-5 && r.seconds < 120.0;
  r.summary = "worst relative deviation " + fmt("%.1e", worst) + " over " + std::to_string(fam.size()) + " potentials";
  r.details = {{"worst", worst}};
  return r;
}

CriterionResult trace_level3(const std::vector<Analysis>& fam) {
  CriterionResult r = named(3, "trace level 3");
  const auto t0 = Clock::now();
  double worst = 0;
  for (const auto& a : fam) {
    const double h3 = a.h.hamiltonian(3).real();
    const NormValue s = level_sum(a.as, 3);
    const double dev = std::max(std::abs(4.0 * (s.truncated + s.tail) - h3), std::abs(4.0 * (s.truncated - s.tail) - h3));
    worst = std::max(worst, h3 != 0 ? dev / std::abs(h3) : dev);
  }
  r.seconds = seconds_since(t0);
  r.passed = worst <= 1e-4;
  r.summary = "worst |sum 4 J_{n,3} - H_3| / |H_3| = " + fmt("%.1e", worst);
  r.details = {{"worst", worst}};
  return r;
}

CriterionResult localization(const std::vector<Analysis>& fam, const std::vector<ConstantCase>& consts) {
  CriterionResult r = named(4, "localization");
  const auto t0 = Clock::now();
  int failures = 0, checked = 0;
  double bound_margin = INFINITY, cap_margin = INFINITY, box_margin = INFINITY;
  json bad = json::array();
  auto take = [&](const PeriodicSpectrum& sp, const FourierPotential& phi, std::uint64_t seed) {
    const LocalizationReport rep = localization_report(sp, phi);
    failures += rep.failures;
    checked += static_cast<int>(rep.entries.size());
    bound_margin = std::min(bound_margin, rep.worst_bound_margin);
    cap_margin = std::min(cap_margin, rep.worst_cap_margin);
    box_margin = std::min(box_margin, rep.worst_box_margin);
    if (!rep.passed()) bad.push_back(seed);
  };
  for (const auto& a : fam) take(a.sp, a.phi, a.seed);
  for (const auto& c : consts) take(c.sp, c.phi, 0);
  r.seconds = seconds_since(t0);
  r.passed = failures == 0;
  r.summary = std::to_string(failures) + " failures in " + std::to_string(checked) + " indices; margins: bound " +
              fmt("%.2e", bound_margin) + ", pi/5 " + fmt("%.2e", cap_margin) + ", box " + fmt("%.2e", box_margin);
  r.details = {{"failures", failures}, {"failed_seeds", bad}};
  return r;
}

CriterionResult in_jn(const std::vector<Analysis>& fam) {
  CriterionResult r = named(5, "two-sided action comparison");
  const auto t0 = Clock::now();
  int failures = 0, checked = 0;
  double worst = -INFINITY;
  for (const auto& a : fam)
    for (int m = 1; m <= 3; ++m) {
      const IndexCheck c = check_in_jn(a, m);
      failures += c.failures;
      checked += c.checked;
      if (c.checked > 0) worst = std::max(worst, c.worst);
    }
  r.seconds = seconds_since(t0);
  r.passed = failures == 0 && checked > 0;
  r.summary = std::to_string(failures) + " failures in " + std::to_string(checked) +
              " comparisons; largest relative excess " + fmt("%.1e", worst);
  r.details = {{"failures", failures}, {"checked", checked}};
  return r;
}

CriterionResult method_crosscheck(const std::vector<Analysis>& fam) {
  CriterionResult r = named(6, "contour vs gap integral");
  const auto t0 = Clock::now();
  int open = 0, failures = 0;
  double worst = 0;
  json bad = json::array();
  for (const auto& a : fam)
    for (const GapRecord& g : a.sp.entries) {
      if (g.collapsed) continue;
      ++open;
      const double I = a.as.action(g.n);
      const double c = action_contour(*a.ev, a.sp, g.n).value;
      // relative with an absolute floor of 1e-18 on actions below 1e-12
      const double dev = std::abs(c - I) / std::max(std::abs(I), 1e-12);
      worst = std::max(worst, dev);
      if (dev > 1e-6) {
        ++failures;
        bad.push_back({{"seed", a.seed}, {"n", g.n}, {"gap", I}, {"contour", c}});
      }
    }
  r.seconds = seconds_since(t0);
  r.passed = failures == 0 && open > 0;
  r.summary = std::to_string(open) + " open gaps, worst |contour - gap| / max(I_n, 1e-12) = " + fmt("%.1e", worst);
  r.details = {{"open", open}, {"failures", bad}};
  return r;
}

CriterionResult lyapunov_schmidt(const std::vector<Analysis>& fam) {
  CriterionResult r = named(7, "Lyapunov-Schmidt reduction");
  const auto t0 = Clock::now();
  int checked = 0, failures = 0;
  double root_err = 0, sym = 0, t_ratio = 0, t2_ratio = 0, gap_ratio = 0;
  json bad = json::array();
  for (const auto& a : fam) {
    const int N = a.sp.threshold;
    for (int n = N; n <= N + 8; ++n) {
      LsCheck c;
      try {
        c = ls_check(a.phi, n, Weight::sobolev(1.0), &a.sp);
      } catch (const Error& e) {
        ++failures;
        bad.push_back({{"seed", a.seed}, {"n", n}, {"error", e.what()}});
        continue;
      }
      ++checked;
      root_err = std::max(root_err, c.root_error);
      sym = std::max(sym, c.worst_symmetry);
      t_ratio = std::max(t_ratio, c.norms.t_norm / c.norms.t_bound);
      t2_ratio = std::max(t2_ratio, c.norms.t2_norm / c.norms.t2_bound);
      if (c.bb_sup > 0) gap_ratio = std::max(gap_ratio, c.gap_sq / c.bb_sup);
      if (!c.passed) {
        ++failures;
        bad.push_back({{"seed", a.seed}, {"n", n}, {"root_error", c.root_error}, {"symmetry", c.worst_symmetry}});
      }
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = failures == 0;
  r.summary = std::to_string(failures) + " failures in " + std::to_string(checked) + " indices; root err " +
              fmt("%.1e", root_err) + ", |a+ - a-| " + fmt("%.1e", sym) + ", ||T||/bound " + fmt("%.2f", t_ratio) +
              ", ||T^2||/bound " + fmt("%.2f", t2_ratio) + ", gap^2/|b+b-| " + fmt("%.2f", gap_ratio);
  r.details = {{"failures", bad}, {"checked", checked}};
  return r;
}

CriterionResult explicit_constants(const std::vector<Analysis>& fam, const std::vector<Weight>& weights) {
  CriterionResult r = named(8, "explicit-constant inequalities");
  const auto t0 = Clock::now();
  int gap_fail = 0, sum_fail = 0, bound_fail = 0, h3_fail = 0, unresolved = 0;
  double worst_gap = 0, worst_sum = 0, worst_bound = 0;
  json bad = json::array();
  for (const auto& a : fam) {
    for (const Weight& w : weights) {
      const GapReport g = gap_report(a.sp, a.phi, w);
      unresolved += g.unresolved;
      for (const auto& e : g.entries) {
        if (e.rhs > 0) worst_gap = std::max(worst_gap, e.lhs / e.rhs);
        if (!e.ok) ++gap_fail;
      }
      if (g.sum_rhs > 0) worst_sum = std::max(worst_sum, g.sum_lhs / g.sum_rhs);
      if (g.sum_lhs > g.sum_rhs) ++sum_fail;
      if (!g.passed()) bad.push_back({{"seed", a.seed}, {"weight", w.describe()}});
    }
    const IndexCheck b = check_action_gap_bound(a);
    bound_fail += b.failures;
    worst_bound = std::max(worst_bound, b.worst);
    const H3Record h = check_H3_lemma(a);
    if (!h.passed) {
      ++h3_fail;
      bad.push_back({{"seed", a.seed}, {"h3_slack_first", h.slack_first}, {"h3_slack_second", h.slack_second}});
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = gap_fail == 0 && sum_fail == 0 && bound_fail == 0 && h3_fail == 0;
  r.summary = "failures: gap " + std::to_string(gap_fail) + ", gap sums " + std::to_string(sum_fail) +
              ", action bound " + std::to_string(bound_fail) + ", H3 lemma " + std::to_string(h3_fail) +
              "; worst ratios " + fmt("%.2e", worst_gap) + " / " + fmt("%.2e", worst_sum) + " / " +
              fmt("%.2e", worst_bound);
  r.details = {{"failures", bad}, {"unresolved_collapsed", unresolved}};
  return r;
}

CriterionResult uniformity(const std::vector<Analysis>& all, const AcceptanceOptions& opts) {
  CriterionResult r = named(9, "uniformity of empirical constants");
  const auto t0 = Clock::now();
  const std::vector<std::string> groups{"b-est", "act-sob", "act-west"};
  const std::vector<Analysis> small(all.begin(), all.begin() + opts.uniformity_small);
  const auto a = family_estimates(small, groups, opts.weights);
  const auto b = family_estimates(all, groups, opts.weights);
  double worst_growth = 0;
  std::string worst_name;
  int failures = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ca = a[i].empirical_constant, cb = b[i].empirical_constant;
    const bool finite = std::isfinite(ca) && std::isfinite(cb);
    const double growth = ca > 0 ? cb / ca - 1.0 : (cb > 0 ? INFINITY : 0.0);
    const bool ok = finite && growth <= opts.uniformity_growth;
    if (!ok) ++failures;
    if (growth >= worst_growth) {
      worst_growth = growth;
      worst_name = a[i].theorem + " " + a[i].parameter;
    }
    rows.push_back({{"theorem", a[i].theorem}, {"parameter", a[i].parameter}, {"small", finite ? json(ca) : json()},
                    {"large", finite ? json(cb) : json()}, {"passed", ok}});
  }
  r.seconds = seconds_since(t0);
  r.passed = failures == 0;
  r.summary = std::to_string(a.size()) + " constants, " + std::to_string(opts.uniformity_small) + " vs " +
              std::to_string(all.size()) + " members; largest growth " + fmt("%.1f%%", 100.0 * worst_growth) +
              (worst_name.empty() ? "" : " (" + worst_name + ")");
  r.details = {{"constants", rows}};
  return r;
}

CriterionResult sob_rep(const std::vector<Analysis>& fam) {
  CriterionResult r = named(10, "Sobolev representation identity");
  const auto t0 = Clock::now();
  double worst = 0;
  int failures = 0;
  for (const auto& a : fam)
    for (int m = 1; m <= 2; ++m) {
      const SobRepRecord s = check_sob_rep(a, m);
      worst = std::max(worst, s.residual);
      if (!s.passed) ++failures;
    }
  r.seconds = seconds_since(t0);
  r.passed = failures == 0;
  r.summary = "worst residual " + fmt("%.1e", worst) + " for m = 1, 2";
  r.details = {{"worst", worst}};
  return r;
}

}  // namespace

AcceptanceOptions AcceptanceOptions::quick() {
  AcceptanceOptions o;
  o.family_size = 20;
  o.uniformity_small = 10;
  o.uniformity_large = 20;
  return o;
}

AcceptanceOptions AcceptanceOptions::from_json(const io::json& j) {
  AcceptanceOptions o = j.value("quick", false) ? quick() : AcceptanceOptions{};
  if (j.contains("family")) {
    const io::FamilyConfig f = io::family_from_json(j.at("family"));
    o.family = f.spec;
    o.weights = f.weights;
  }
  o.family_size = j.value("family_size", o.family_size);
  o.uniformity_small = j.value("uniformity_small", o.uniformity_small);
  o.uniformity_large = j.value("uniformity_large", o.uniformity_large);
  o.uniformity_growth = j.value("uniformity_growth", o.uniformity_growth);
  if (o.family_size < 1 || o.uniformity_small < 1 || o.uniformity_large < o.uniformity_small)
    throw Error(ErrorKind::config, "acceptance sizes need 1 <= uniformity_small <= uniformity_large");
  return o;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  auto emit = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };

  const auto suite_start = Clock::now();
  std::vector<ConstantCase> consts;
  emit(constant_oracle(consts));

  // members are analyzed once; the first family_size of them serve criteria 2-8 and 10
  FamilySpec spec = opts.family;
  spec.count = std::max(opts.family_size, opts.uniformity_large);
  const auto members = generate_family(spec);
  AnalysisOptions ao;
  ao.weights = opts.weights;
  const std::vector<FamilyMember> head(members.begin(), members.begin() + opts.family_size);
  const std::vector<FamilyMember> rest(members.begin() + opts.family_size, members.end());
  auto t0 = Clock::now();
  std::vector<Analysis> all = analyze_family(head, ao);
  const double head_seconds = seconds_since(t0);
  const std::vector<Analysis>& fam = all;

  emit(parseval(fam, head_seconds));
  emit(trace_level3(fam));
  emit(localization(fam, consts));
  emit(in_jn(fam));
  emit(method_crosscheck(fam));
  emit(lyapunov_schmidt(fam));
  emit(explicit_constants(fam, opts.weights));

  t0 = Clock::now();
  std::vector<Analysis> more = analyze_family(rest, ao);
  std::vector<Analysis> uniform(all.begin(), all.end());
  for (auto& a : more) uniform.push_back(std::move(a));
  uniform.resize(static_cast<std::size_t>(opts.uniformity_large));
  const double more_seconds = seconds_since(t0);
  CriterionResult u = uniformity(uniform, opts);
  u.seconds += more_seconds;
  const double total = seconds_since(suite_start);
  u.details["suite_seconds"] = total;
  if (total >= 600.0) {
    u.passed = false;
    u.summary += "; suite exceeded 10 min";
  }
  emit(std::move(u));

  emit(sob_rep(fam));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s %2d  ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
  return head + r.name + ": " + r.summary + tail;
}

}  // namespace birkhoff
