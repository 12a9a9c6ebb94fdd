// Serial reference against the OpenMP path for the grid, per-index and
// per-family maps. Prints wall times and confirms identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "birkhoff/estimates.hpp"

namespace {

using namespace birkhoff;
using Clock = std::chrono::steady_clock;

template <class F>
double timed(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void line(const char* what, double serial, double parallel, bool same) {
  std::printf("%-22s serial %8.3f s   parallel %8.3f s   speedup %5.2f   %s\n", what, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int members = argc > 1 ? std::atoi(argv[1]) : 6;
  std::printf("threads: %d\n", max_threads());
  bool all_same = true;

  RandomPotentialSpec rp;
  rp.seed = 17;
  const FourierPotential phi = random_potential(rp);
  const int n_max = localization_threshold(phi) + 60;
  DiscriminantOptions dopts;
  dopts.index_reach = n_max;
  const DiscriminantEvaluator ev(phi, dopts);
  std::vector<cplx> grid;
  for (int i = 0; i < 4000; ++i) grid.emplace_back(-60.0 + 0.03 * i, 0.1 * (i % 5));
  std::vector<GridEntry> a, b;
  const double gs = timed([&] { a = ev.evaluate_grid(grid, Execution::serial); });
  const double gp = timed([&] { b = ev.evaluate_grid(grid, Execution::parallel); });
  bool same = a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].sample.delta == b[i].sample.delta;
  line("evaluate_grid", gs, gp, same);
  all_same = all_same && same;

  SpectrumOptions ss, ps;
  ss.exec = Execution::serial;
  PeriodicSpectrum sa, sb;
  const double ls = timed([&] { sa = locate_spectrum(ev, n_max, ss); });
  const double lp = timed([&] { sb = locate_spectrum(ev, n_max, ps); });
  same = true;
  for (int n = -n_max; n <= n_max; ++n) same = same && sa.at(n).lambda_plus == sb.at(n).lambda_plus;
  line("locate_spectrum", ls, lp, same);
  all_same = all_same && same;

  ActionOptions sa_opt, pa_opt;
  sa_opt.exec = Execution::serial;
  ActionSpectrum aa, ab;
  const double as = timed([&] { aa = compute_actions(ev, sa, sa_opt); });
  const double ap = timed([&] { ab = compute_actions(ev, sa, pa_opt); });
  same = aa.I == ab.I;
  line("compute_actions", as, ap, same);
  all_same = all_same && same;

  FamilySpec fs;
  fs.count = members;
  const auto family = generate_family(fs);
  AnalysisOptions ao;
  std::vector<Analysis> fa, fb;
  const double fsec = timed([&] { fa = analyze_family(family, ao, Execution::serial); });
  const double fpar = timed([&] { fb = analyze_family(family, ao, Execution::parallel); });
  same = fa.size() == fb.size();
  for (std::size_t i = 0; same && i < fa.size(); ++i) same = fa[i].as.I == fb[i].as.I;
  line("analyze_family", fsec, fpar, same);
  all_same = all_same && same;
  return all_same ? 0 : 1;
}
