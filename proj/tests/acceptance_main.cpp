// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// An optional argument names a JSON config (see configs/acceptance.json).

#include <iostream>

#include "birkhoff/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace birkhoff;
  try {
    AcceptanceOptions opts;
    if (argc > 1) opts = AcceptanceOptions::from_json(io::read_json_file(argv[1]));
    bool ok = true;
    run_acceptance(opts, [&](const CriterionResult& r) {
      std::cout << format_result(r) << std::endl;
      ok = ok && r.passed;
    });
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << "\n";
    return 1;
  }
}
