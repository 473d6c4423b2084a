#include "muskat/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "muskat/properties.hpp"

namespace muskat {

using nlohmann::json;

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ", " : std::string()) + "field '" + field +
                         "': " + message),
      line_(line),
      field_(std::move(field)) {}

bool RunConfig::wants(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

json default_config_json() {
  return {
      {"grid", {{"L", 2.0 * std::numbers::pi}, {"N", 256}}},
      {"solver",
       {{"A", nullptr},
        {"Ny", nullptr},
        {"rel_tol", 1e-10},
        {"max_iter", 2000},
        {"stencil_order", 4},
        {"linear_solver", "bicgstab"}}},
      {"time", {{"t_end", 1.0}, {"cfl", 0.5}, {"scheme", "euler"}, {"snapshot_stride", 1}}},
      {"initial_condition",
       {{"type", "fourier"}, {"offset", 1.0}, {"terms", {{{"amplitude", 0.1}, {"wavenumber", 1.0}, {"phase", 0.0}}}}}},
      {"data", nullptr},
      {"evaluate", {{"op", "H"}}},
      {"evolve", {{"which", "muskat"}}},
      {"verify",
       {{"checks", json::array()},
        {"seed", 1},
        {"gcp_pairs", 10},
        {"lipschitz_pairs", 4},
        {"t_end", 0.25},
        {"tolerances", {{"cmp_c", 1.0}, {"direct_h_c", 1.0}}}}},
      {"convolve", {{"kind", "inf"}, {"epsilon", 0.1}, {"axis", "space"}, {"input", ""}}},
      {"output", {{"directory", ""}, {"formats", {"csv", "json"}}}},
  };
}

namespace {

bool is_slot(const std::string& key) { return key == "initial_condition" || key == "data"; }

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::vector<std::string> split_path(const std::string& dotted) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', pos);
    parts.push_back(dotted.substr(pos, dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return parts;
}

/// Best-effort line of a dotted field in the source text: each key is searched after its parent.
int locate(const std::string& source, const std::string& field) {
  if (source.empty()) return 0;
  std::size_t cursor = 0;
  int line = 0;
  try {
    const json top = json::parse(source);
    if (top.is_object() && top.contains("config") && top.contains("tool")) {
      const std::size_t c = source.find("\"config\"");
      if (c != std::string::npos) cursor = c;
    }
  } catch (const json::exception&) {
  }
  for (const auto& key : split_path(field)) {
    if (key.empty() || std::isdigit(static_cast<unsigned char>(key[0]))) continue;
    const std::size_t at = source.find("\"" + key + "\"", cursor);
    if (at == std::string::npos) break;
    cursor = at;
    line = line_of_offset(source, at);
  }
  return line;
}

void merge(json& base, const json& user, const std::string& path, const std::string& source) {
  if (!user.is_object()) throw ConfigError(locate(source, path), path.empty() ? "<root>" : path, "expected an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string field = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError(locate(source, field), field, "unknown key");
    json& slot = base[it.key()];
    if (slot.is_object() && !is_slot(it.key()) && path != "initial_condition")
      merge(slot, it.value(), field, source);
    else
      slot = it.value();
  }
}

class Reader {
 public:
  Reader(const json& root, std::string source) : root_(root), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ConfigError(locate(source_, field), field, msg);
  }

  const json& at(const std::string& field) const {
    const json* node = &root_;
    for (const auto& key : split_path(field)) {
      if (!node->is_object() || !node->contains(key)) fail(field, "missing");
      node = &(*node)[key];
    }
    return *node;
  }

  double number(const std::string& field) const { return number_of(at(field), field); }

  double number_of(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number, got " + std::string(v.type_name()));
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "must be finite");
    return x;
  }

  long long integer(const std::string& field) const { return integer_of(at(field), field); }

  long long integer_of(const json& v, const std::string& field) const {
    if (!v.is_number_integer()) fail(field, "expected an integer, got " + std::string(v.type_name()));
    return v.get<long long>();
  }

  std::uint64_t seed_of(const json& v, const std::string& field) const {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
      fail(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& field) const {
    const json& v = at(field);
    if (!v.is_string()) fail(field, "expected a string, got " + std::string(v.type_name()));
    return v.get<std::string>();
  }

  template <typename T>
  T choice(const std::string& field, std::initializer_list<std::pair<const char*, T>> options) const {
    const std::string s = string(field);
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (s == name) return value;
      allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    fail(field, "must be one of {" + allowed + "}, got '" + s + "'");
  }

  InitialCondition initial_condition(const std::string& field) const {
    const json& v = at(field);
    if (!v.is_object()) fail(field, "expected an object");
    if (!v.contains("type") || !v["type"].is_string()) fail(field + ".type", "expected a string");
    const std::string type = v["type"].get<std::string>();
    auto allow = [&](std::initializer_list<const char*> keys) {
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (it.key() == "type") continue;
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
          fail(field + "." + it.key(), "unknown key for type '" + type + "'");
      }
      for (const char* k : keys)
        if (!v.contains(k)) fail(field + "." + k, "missing");
    };
    if (type == "constant") {
      allow({"value"});
      return ConstantIC{number(field + ".value")};
    }
    if (type == "fourier") {
      allow({"offset", "terms"});
      FourierIC ic;
      ic.offset = number(field + ".offset");
      const json& terms = v["terms"];
      if (!terms.is_array()) fail(field + ".terms", "expected an array");
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string tf = field + ".terms." + std::to_string(k);
        const json& t = terms[k];
        if (!t.is_object()) fail(tf, "expected an object");
        for (auto it = t.begin(); it != t.end(); ++it)
          if (it.key() != "amplitude" && it.key() != "wavenumber" && it.key() != "phase")
            fail(tf + "." + it.key(), "unknown key");
        FourierTerm term;
        if (t.contains("amplitude")) term.amplitude = number_of(t["amplitude"], tf + ".amplitude");
        if (t.contains("wavenumber")) term.wavenumber = number_of(t["wavenumber"], tf + ".wavenumber");
        if (t.contains("phase")) term.phase = number_of(t["phase"], tf + ".phase");
        ic.terms.push_back(term);
      }
      return ic;
    }
    if (type == "piecewise_linear") {
      allow({"knots"});
      const json& knots = v["knots"];
      if (!knots.is_array() || knots.empty()) fail(field + ".knots", "expected a non-empty array of [x, y]");
      PiecewiseLinearIC ic;
      for (std::size_t k = 0; k < knots.size(); ++k) {
        const std::string kf = field + ".knots." + std::to_string(k);
        if (!knots[k].is_array() || knots[k].size() != 2) fail(kf, "expected [x, y]");
        ic.knots.emplace_back(number_of(knots[k][0], kf), number_of(knots[k][1], kf));
      }
      return ic;
    }
    if (type == "random_lipschitz") {
      allow({"m", "seed", "offset"});
      return RandomLipschitzIC{number(field + ".m"), seed_of(v["seed"], field + ".seed"), number(field + ".offset")};
    }
    fail(field + ".type", "must be one of {constant, fourier, piecewise_linear, random_lipschitz}, got '" + type + "'");
  }

 private:
  const json& root_;
  std::string source_;
};

}  // namespace

json load_config_text(const std::string& text) {
  json user;
  try {
    user = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "<syntax>", e.what());
  }
  if (user.is_object() && user.contains("config") && user.contains("tool")) user = user["config"];
  json base = default_config_json();
  merge(base, user, "", text);
  return base;
}

void apply_override(json& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(0, assignment, "override must look like key=value");
  const std::string field = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json* node = &config;
  for (const auto& key : split_path(field)) {
    if (!node->is_object() || !node->contains(key)) throw ConfigError(0, field, "unknown key (from --set)");
    node = &(*node)[key];
  }
  if (node->is_object() || node->is_array()) throw ConfigError(0, field, "only scalar fields can be overridden");
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  *node = value;
}

RunConfig parse_config(const json& resolved, const std::string& source) {
  const Reader r(resolved, source);
  RunConfig c;
  const long long n = r.integer("grid.N");
  const double L = r.number("grid.L");
  if (n < 8 || n > std::numeric_limits<int>::max()) r.fail("grid.N", "must be at least 8");
  if (!(L > 0.0) || !std::isfinite(L)) r.fail("grid.L", "must be positive and finite");
  try {
    c.grid = make_grid(L, static_cast<int>(n));
  } catch (const InvalidArgument& e) {
    r.fail("grid", e.what());
  }

  c.solver = default_solver_params(c.grid);
  if (!r.at("solver.A").is_null()) c.solver.A = r.number("solver.A");
  if (!r.at("solver.Ny").is_null()) c.solver.Ny = static_cast<int>(r.integer("solver.Ny"));
  c.solver.rel_tol = r.number("solver.rel_tol");
  c.solver.max_iter = static_cast<int>(r.integer("solver.max_iter"));
  c.solver.stencil_order = static_cast<int>(r.integer("solver.stencil_order"));
  c.solver.solver = r.choice<LinearSolver>(
      "solver.linear_solver", {{"bicgstab", LinearSolver::preconditioned_bicgstab}, {"sparse_lu", LinearSolver::sparse_lu}});
  try {
    validate(c.solver);
  } catch (const InvalidArgument& e) {
    r.fail("solver", e.what());
  }

  c.time.t_end = r.number("time.t_end");
  c.time.cfl = r.number("time.cfl");
  c.time.scheme = r.choice<Scheme>("time.scheme", {{"euler", Scheme::euler}, {"rk2", Scheme::rk2}});
  c.time.snapshot_stride = static_cast<int>(r.integer("time.snapshot_stride"));
  try {
    validate(c.time);
  } catch (const InvalidArgument& e) {
    r.fail("time", e.what());
  }

  c.initial_condition = r.initial_condition("initial_condition");
  if (!r.at("data").is_null()) c.data = r.initial_condition("data");
  for (const char* slot : {"initial_condition", "data"}) {
    const bool is_ic = std::string(slot) == "initial_condition";
    if (!is_ic && !c.data) continue;
    try {
      (void)sample(is_ic ? c.initial_condition : *c.data, c.grid);
    } catch (const InvalidArgument& e) {
      r.fail(slot, e.what());
    }
  }

  c.op = r.choice<OperatorTag>("evaluate.op", {{"G", OperatorTag::G}, {"M", OperatorTag::M}, {"H", OperatorTag::H}});
  c.which = r.choice<Flow>("evolve.which", {{"muskat", Flow::muskat}, {"heleshaw", Flow::heleshaw}});

  const json& checks = r.at("verify.checks");
  if (!checks.is_array()) r.fail("verify.checks", "expected an array of check names");
  const auto known = standard_check_names();
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const std::string f = "verify.checks." + std::to_string(k);
    if (!checks[k].is_string()) r.fail(f, "expected a string");
    const std::string name = checks[k].get<std::string>();
    if (std::find(known.begin(), known.end(), name) == known.end()) r.fail(f, "unknown check '" + name + "'");
    c.verify.checks.push_back(name);
  }
  c.verify.seed = r.seed_of(r.at("verify.seed"), "verify.seed");
  c.verify.gcp_pairs = static_cast<int>(r.integer("verify.gcp_pairs"));
  c.verify.lipschitz_pairs = static_cast<int>(r.integer("verify.lipschitz_pairs"));
  c.verify.t_end = r.number("verify.t_end");
  c.verify.cmp_c = r.number("verify.tolerances.cmp_c");
  c.verify.direct_h_c = r.number("verify.tolerances.direct_h_c");
  if (c.verify.gcp_pairs < 1) r.fail("verify.gcp_pairs", "must be at least 1");
  if (c.verify.lipschitz_pairs < 3) r.fail("verify.lipschitz_pairs", "must be at least 3");
  if (!(c.verify.t_end > 0.0)) r.fail("verify.t_end", "must be positive");
  if (!(c.verify.cmp_c >= 0.0)) r.fail("verify.tolerances.cmp_c", "must be non-negative");
  if (!(c.verify.direct_h_c > 0.0)) r.fail("verify.tolerances.direct_h_c", "must be positive");

  c.convolve.kind = r.choice<std::string>("convolve.kind", {{"inf", "inf"}, {"sup", "sup"}});
  c.convolve.epsilon = r.number("convolve.epsilon");
  if (!(c.convolve.epsilon > 0.0)) r.fail("convolve.epsilon", "must be positive");
  c.convolve.axis = r.choice<ConvolutionAxis>("convolve.axis",
                                              {{"space", ConvolutionAxis::space}, {"space_time", ConvolutionAxis::space_time}});
  c.convolve.input = r.string("convolve.input");

  c.output.directory = r.string("output.directory");
  const json& formats = r.at("output.formats");
  if (!formats.is_array()) r.fail("output.formats", "expected an array");
  c.output.formats.clear();
  for (std::size_t k = 0; k < formats.size(); ++k) {
    const std::string f = "output.formats." + std::to_string(k);
    if (!formats[k].is_string()) r.fail(f, "expected a string");
    const std::string s = formats[k].get<std::string>();
    if (s != "csv" && s != "json" && s != "f64") r.fail(f, "must be one of {csv, json, f64}, got '" + s + "'");
    c.output.formats.push_back(s);
  }
  return c;
}

json to_json(const InitialCondition& ic) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantIC>) {
          return {{"type", "constant"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, FourierIC>) {
          json terms = json::array();
          for (const auto& t : v.terms)
            terms.push_back({{"amplitude", t.amplitude}, {"wavenumber", t.wavenumber}, {"phase", t.phase}});
          return {{"type", "fourier"}, {"offset", v.offset}, {"terms", terms}};
        } else if constexpr (std::is_same_v<T, PiecewiseLinearIC>) {
          json knots = json::array();
          for (const auto& [x, y] : v.knots) knots.push_back({x, y});
          return {{"type", "piecewise_linear"}, {"knots", knots}};
        } else {
          return {{"type", "random_lipschitz"}, {"m", v.m}, {"seed", v.seed}, {"offset", v.offset}};
        }
      },
      ic);
}

json to_json(const SolverParams& p) {
  return {{"A", p.A},
          {"Ny", p.Ny},
          {"rel_tol", p.rel_tol},
          {"max_iter", p.max_iter},
          {"stencil_order", p.stencil_order},
          {"linear_solver", p.solver == LinearSolver::sparse_lu ? "sparse_lu" : "bicgstab"}};
}

json to_json(const RunConfig& c) {
  json checks = json::array();
  for (const auto& s : c.verify.checks) checks.push_back(s);
  return {
      {"grid", {{"L", c.grid.L}, {"N", c.grid.N}}},
      {"solver", to_json(c.solver)},
      {"time",
       {{"t_end", c.time.t_end},
        {"cfl", c.time.cfl},
        {"scheme", to_string(c.time.scheme)},
        {"snapshot_stride", c.time.snapshot_stride}}},
      {"initial_condition", to_json(c.initial_condition)},
      {"data", c.data ? to_json(*c.data) : json(nullptr)},
      {"evaluate", {{"op", to_string(c.op)}}},
      {"evolve", {{"which", to_string(c.which)}}},
      {"verify",
       {{"checks", checks},
        {"seed", c.verify.seed},
        {"gcp_pairs", c.verify.gcp_pairs},
        {"lipschitz_pairs", c.verify.lipschitz_pairs},
        {"t_end", c.verify.t_end},
        {"tolerances", {{"cmp_c", c.verify.cmp_c}, {"direct_h_c", c.verify.direct_h_c}}}}},
      {"convolve",
       {{"kind", c.convolve.kind},
        {"epsilon", c.convolve.epsilon},
        {"axis", c.convolve.axis == ConvolutionAxis::space ? "space" : "space_time"},
        {"input", c.convolve.input}}},
      {"output", {{"directory", c.output.directory}, {"formats", c.output.formats}}},
  };
}

}  // namespace muskat
