#pragma once

// JSON specs for potentials, weights, grids and families; CSV/JSON emitters
// for every pipeline; atomic file output.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "birkhoff/estimates.hpp"
#include "birkhoff/lyapunov_schmidt.hpp"

namespace birkhoff::io {

using json = nlohmann::json;

/// Parse a file as JSON; config error on a missing file or malformed text.
json read_json_file(const std::filesystem::path& path);

/// {"type":"fourier","coeffs":[{"k","re","im"}]} | {"type":"constant","a"} |
/// {"type":"random","K","decay","s","a","seed","amplitude"}
FourierPotential potential_from_json(const json& j);
json potential_to_json(const FourierPotential& phi);

/// {"kind":"sobolev|abel|gevrey|custom","s","a","sigma","table":[w_0, w_1, ...]}
Weight weight_from_json(const json& j);

/// Either {"points":[[re, im], ...]} or a tensor grid
/// {"re":{"from","to","count"}, "im":{"from","to","count"}}; "im" defaults to 0.
std::vector<cplx> grid_from_json(const json& j);

/// FamilySpec fields plus an optional "weights" array for the act-west group.
struct FamilyConfig {
  FamilySpec spec;
  std::vector<Weight> weights{Weight::sobolev(1.0), Weight::abel(1.0, 0.2)};
};
FamilyConfig family_from_json(const json& j);

/// "a..b" or a single integer.
std::pair<int, int> parse_index_range(const std::string& text);
/// "1,3,5"
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

/// Shortest decimal that parses back to the same double; "inf", "-inf", "nan".
std::string format_double(double v);

/// Write through a temporary file in the target directory, then rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string discriminant_csv(const std::vector<GridEntry>& entries);
std::string spectrum_csv(const PeriodicSpectrum& sp);

struct ActionRow {
  int n = 0;
  int k = 0;
  double J = 0;
  std::string method;  // "gap" or "contour"
  double err = 0;
};
std::string actions_csv(const std::vector<ActionRow>& rows);

json hierarchy_json(const HierarchyEvaluation& h);
std::string ls_csv(const std::vector<LsCheck>& checks);
json estimates_json(const std::vector<EstimateReport>& reports);

}  // namespace birkhoff::io
