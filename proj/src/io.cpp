#include "birkhoff/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace birkhoff::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::config, what); }

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
  return number(j, key, 0.0);
}

int integer(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string text(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) bad(std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) bad(std::string(what) + " spec must be a JSON object");
}

RandomPotentialSpec::Decay decay_from(const std::string& name) {
  if (name == "sobolev") return RandomPotentialSpec::Decay::sobolev;
  if (name == "abel") return RandomPotentialSpec::Decay::abel;
  bad("unknown decay '" + name + "'");
}

std::vector<double> linspace(const json& j, const char* axis) {
  if (!j.contains(axis)) return {0.0};
  const json& a = j.at(axis);
  if (a.is_number()) return {a.get<double>()};
  require_object(a, axis);
  const double from = required_number(a, "from");
  const double to = required_number(a, "to");
  const int count = integer(a, "count", 1);
  if (count < 1) bad("grid count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? from : from + (to - from) * i / (count - 1);
  return out;
}

template <class... T>
void row(std::ostringstream& os, const T&... cells) {
  bool first = true;
  auto put = [&](const auto& c) {
    if (!first) os << ',';
    first = false;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(c)>>)
      os << format_double(c);
    else
      os << c;
  };
  (put(cells), ...);
  os << '\n';
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

FourierPotential potential_from_json(const json& j) {
  require_object(j, "potential");
  const std::string type = text(j, "type", "");
  if (type == "constant") {
    return FourierPotential::constant(required_number(j, "a"));
  }
  if (type == "fourier") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array()) bad("fourier potential needs a 'coeffs' array");
    std::map<int, cplx> psi;
    for (const json& c : j.at("coeffs")) {
      require_object(c, "coefficient");
      if (!c.contains("k")) bad("coefficient without 'k'");
      const int k = integer(c, "k", 0);
      psi[k] += cplx{number(c, "re", 0.0), number(c, "im", 0.0)};
    }
    return FourierPotential::real_type(psi);
  }
  if (type == "random") {
    RandomPotentialSpec spec;
    spec.K = integer(j, "K", spec.K);
    spec.decay = decay_from(text(j, "decay", "sobolev"));
    spec.s = number(j, "s", spec.s);
    spec.a = number(j, "a", spec.a);
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) bad("field 'seed' must be a nonnegative integer");
      spec.seed = j.at("seed").get<std::uint64_t>();
    }
    spec.amplitude = number(j, "amplitude", spec.amplitude);
    if (spec.K < 0) bad("random potential needs K >= 0");
    return random_potential(spec);
  }
  bad("unknown potential type '" + type + "'");
}

json potential_to_json(const FourierPotential& phi) {
  json coeffs = json::array();
  for (int k = -phi.band(); k <= phi.band(); ++k) {
    const cplx c = phi.psi_coeff(k);
    if (c != cplx{}) coeffs.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"type", "fourier"}, {"coeffs", coeffs}};
}

Weight weight_from_json(const json& j) {
  require_object(j, "weight");
  const std::string kind = text(j, "kind", "");
  if (kind == "sobolev") return Weight::sobolev(number(j, "s", 1.0));
  if (kind == "abel") return Weight::abel(number(j, "s", 1.0), number(j, "a", 0.0));
  if (kind == "gevrey") return Weight::gevrey(number(j, "s", 0.0), number(j, "a", 0.0), number(j, "sigma", 1.0));
  if (kind == "custom") {
    if (!j.contains("table") || !j.at("table").is_array()) bad("custom weight needs a 'table' array");
    std::vector<double> table;
    for (const json& v : j.at("table")) {
      if (!v.is_number()) bad("custom weight table entries must be numbers");
      table.push_back(v.get<double>());
    }
    return Weight::custom(std::move(table));
  }
  bad("unknown weight kind '" + kind + "'");
}

std::vector<cplx> grid_from_json(const json& j) {
  require_object(j, "grid");
  std::vector<cplx> out;
  if (j.contains("points")) {
    if (!j.at("points").is_array()) bad("'points' must be an array");
    for (const json& p : j.at("points")) {
      if (p.is_number()) {
        out.emplace_back(p.get<double>(), 0.0);
      } else if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
      } else {
        bad("grid points must be numbers or [re, im] pairs");
      }
    }
    return out;
  }
  if (!j.contains("re")) bad("grid needs 'points' or 're'");
  for (double im : linspace(j, "im"))
    for (double re : linspace(j, "re")) out.emplace_back(re, im);
  return out;
}

FamilyConfig family_from_json(const json& j) {
  require_object(j, "family");
  FamilyConfig cfg;
  FamilySpec& s = cfg.spec;
  s.count = integer(j, "count", s.count);
  if (j.contains("base_seed")) {
    if (!j.at("base_seed").is_number_unsigned()) bad("field 'base_seed' must be a nonnegative integer");
    s.base_seed = j.at("base_seed").get<std::uint64_t>();
  }
  s.K = integer(j, "K", s.K);
  s.decay = decay_from(text(j, "decay", "sobolev"));
  s.s = number(j, "s", s.s);
  s.a = number(j, "a", s.a);
  if (j.contains("norms")) {
    if (!j.at("norms").is_array()) bad("'norms' must be an array");
    s.norms.clear();
    for (const json& v : j.at("norms")) {
      if (!v.is_number()) bad("norm levels must be numbers");
      s.norms.push_back(v.get<double>());
    }
  }
  if (j.contains("weights")) {
    if (!j.at("weights").is_array()) bad("'weights' must be an array");
    cfg.weights.clear();
    for (const json& w : j.at("weights")) cfg.weights.push_back(weight_from_json(w));
  }
  return cfg;
}

std::pair<int, int> parse_index_range(const std::string& t) {
  auto to_int = [&](std::string_view part) {
    int v = 0;
    const char* end = part.data() + part.size();
    auto [p, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc{} || p != end || part.empty()) bad("bad index range '" + t + "'");
    return v;
  };
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(t);
    return {v, v};
  }
  const int a = to_int(std::string_view(t).substr(0, dots));
  const int b = to_int(std::string_view(t).substr(dots + 2));
  if (b < a) bad("empty index range '" + t + "'");
  return {a, b};
}

std::vector<std::string> split_list(const std::string& t) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(t);
  while (std::getline(is, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> parse_int_list(const std::string& t) {
  std::vector<int> out;
  for (const std::string& part : split_list(t)) out.push_back(parse_index_range(part).first);
  if (out.empty()) bad("empty list '" + t + "'");
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) bad("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) bad("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    bad("cannot move output into '" + path.string() + "': " + ec.message());
  }
}

std::string discriminant_csv(const std::vector<GridEntry>& entries) {
  std::ostringstream os;
  os << "lambda_re,lambda_im,delta_re,delta_im,delta_dot_re,delta_dot_im,err\n";
  for (const auto& e : entries) {
    const auto& s = e.sample;
    if (e.ok) {
      row(os, s.lambda.real(), s.lambda.imag(), s.delta.real(), s.delta.imag(), s.delta_dot.real(),
          s.delta_dot.imag(), s.error_estimate);
    } else {
      const double nan = std::nan("");
      row(os, s.lambda.real(), s.lambda.imag(), nan, nan, nan, nan, nan);
    }
  }
  return os.str();
}

std::string spectrum_csv(const PeriodicSpectrum& sp) {
  std::ostringstream os;
  os << "n,lambda_minus,lambda_plus,lambda_dot,tau,gamma,collapsed,residual_minus,residual_plus,residual_dot\n";
  for (const auto& g : sp.entries)
    row(os, g.n, g.lambda_minus, g.lambda_plus, g.lambda_dot, g.tau, g.gamma, g.collapsed ? 1 : 0,
        g.residual_minus, g.residual_plus, g.residual_dot);
  return os.str();
}

std::string actions_csv(const std::vector<ActionRow>& rows) {
  std::ostringstream os;
  os << "n,k,J,method,err\n";
  for (const auto& r : rows) row(os, r.n, r.k, r.J, r.method, r.err);
  return os.str();
}

json hierarchy_json(const HierarchyEvaluation& h) {
  json out = json::object();
  for (int k = 1; k <= h.k_max; ++k) {
    const cplx H = h.hamiltonian(k);
    out[std::to_string(k)] = {{"re", H.real()}, {"im", H.imag()}};
  }
  return out;
}

std::string ls_csv(const std::vector<LsCheck>& checks) {
  std::ostringstream os;
  os << "n,truncation,xi_minus_re,xi_minus_im,xi_plus_re,xi_plus_im,lambda_minus,lambda_plus,root_error,"
        "in_disc,worst_symmetry,a_sup,a_bound,b_dev_plus,b_bound_plus,b_dev_minus,b_bound_minus,"
        "coefficient_bounds_apply,gap_sq,bb_sup,t_norm,t_bound,t2_norm,t2_bound,passed\n";
  for (const auto& c : checks) {
    const auto& r = c.roots;
    row(os, c.n, c.truncation, r.xi_minus.real(), r.xi_minus.imag(), r.xi_plus.real(), r.xi_plus.imag(),
        c.lambda_minus, c.lambda_plus, c.root_error, r.in_disc ? 1 : 0, c.worst_symmetry, c.a_sup, c.a_bound,
        c.b_dev_plus, c.b_bound_plus, c.b_dev_minus, c.b_bound_minus, c.coefficient_bounds_apply ? 1 : 0,
        c.gap_sq, c.bb_sup, c.norms.t_norm, c.norms.t_bound, c.norms.t2_norm, c.norms.t2_bound,
        c.passed ? 1 : 0);
  }
  return os.str();
}

json estimates_json(const std::vector<EstimateReport>& reports) {
  // JSON has no infinity; unbounded ratios are written as null
  auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  json out = json::array();
  for (const auto& r : reports) {
    json o;
    o["theorem"] = r.theorem;
    const std::string& p = r.parameter;
    if (p.rfind("m=", 0) == 0)
      o["m"] = std::stoi(p.substr(2));
    else if (p.rfind("s=", 0) == 0)
      o["s"] = std::stod(p.substr(2));
    else
      o["weight"] = p;
    json per = json::array();
    for (const auto& rec : r.per_potential)
      per.push_back({{"seed", rec.seed}, {"lhs", num(rec.lhs)}, {"rhs", num(rec.rhs)}, {"ratio", num(rec.ratio)}});
    o["perPotential"] = per;
    o["empiricalConstant"] = num(r.empirical_constant);
    o["passed"] = r.passed;
    out.push_back(o);
  }
  return out;
}

}  // namespace birkhoff::io
