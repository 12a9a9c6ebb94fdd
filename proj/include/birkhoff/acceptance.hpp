#pragma once

// The ten end-to-end acceptance criteria, shared by the acceptance test binary
// and `verify-all`.

#include <functional>
#include <string>
#include <vector>

#include "birkhoff/io.hpp"

namespace birkhoff {

struct AcceptanceOptions {
  FamilySpec family;         // count is ignored; the sizes below apply
  int family_size = 20;      // criteria 2-8 and 10
  int uniformity_small = 40; // criterion 9 compares this prefix ...
  int uniformity_large = 80; // ... against the whole family
  std::vector<Weight> weights{Weight::sobolev(1.0), Weight::abel(1.0, 0.2)};
  double uniformity_growth = 0.10;

  /// 20 / 10 / 20 members; criterion 9 then only exercises the plumbing.
  static AcceptanceOptions quick();
  static AcceptanceOptions from_json(const io::json& j);
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  double seconds = 0;
  io::json details;
};

/// Runs every criterion; `on_result` sees each one as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  trace level 3: ... (1.2 s)"
std::string format_result(const CriterionResult& r);

}  // namespace birkhoff
