#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "muskat/convolution.hpp"
#include "muskat/evolution.hpp"
#include "muskat/grid.hpp"
#include "muskat/harmonic.hpp"
#include "muskat/operators.hpp"

namespace muskat {

/// Config problem located at `line` (0 when unknown) and dotted `field`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct VerifyConfig {
  std::vector<std::string> checks;  // empty: the standard suite
  std::uint64_t seed = 1;
  int gcp_pairs = 10;
  int lipschitz_pairs = 4;
  double t_end = 0.25;
  double cmp_c = 1.0;
  double direct_h_c = 1.0;
};

struct ConvolveConfig {
  std::string kind = "inf";
  double epsilon = 0.1;
  ConvolutionAxis axis = ConvolutionAxis::space;
  std::string input;
};

struct OutputConfig {
  std::string directory;
  std::vector<std::string> formats{"csv", "json"};
};

struct RunConfig {
  Grid grid;
  SolverParams solver;
  TimeParams time;
  InitialCondition initial_condition;
  /// Boundary data for `evaluate --op G`; defaults to the initial condition.
  std::optional<InitialCondition> data;
  OperatorTag op = OperatorTag::H;
  Flow which = Flow::muskat;
  VerifyConfig verify;
  ConvolveConfig convolve;
  OutputConfig output;

  bool wants(const std::string& format) const;
};

/// Every field with its default value.
nlohmann::json default_config_json();

/// Parses config text (JSON; a manifest.json is accepted and its "config" is used).
/// Unknown keys, wrong types and out-of-range values raise ConfigError.
nlohmann::json load_config_text(const std::string& text);

/// Applies "a.b.c=value" to a scalar field. The value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Typed view of a resolved config; throws ConfigError. `source` locates line numbers.
RunConfig parse_config(const nlohmann::json& resolved, const std::string& source = {});

/// Fully resolved echo of a RunConfig; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const InitialCondition& ic);
nlohmann::json to_json(const SolverParams& p);

}  // namespace muskat
