#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace muskat {

/// Outcome of one named numerical check. `pass` is decided only from the
/// recorded measurements and tolerances.
struct PropertyReport {
  std::string name;
  bool pass = false;
  std::map<std::string, double> measured;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> inputs;
  std::string digest;

  nlohmann::json to_json() const;
  static PropertyReport from_json(const nlohmann::json& j);

  /// One-line human summary, e.g. "PASS gcp_check  max_violation=0 tol_gcp=3e-3".
  std::string summary_line() const;
};

/// FNV-1a 64-bit hash rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Digest of a raw array of doubles (bitwise).
std::string digest_doubles(const double* data, std::size_t count);

/// Digest over the name, inputs and tolerances of a report (not the measurements).
std::string input_digest(const PropertyReport& r);

}  // namespace muskat
