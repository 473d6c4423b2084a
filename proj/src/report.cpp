#include "muskat/report.hpp"

#include <cstdio>
#include <sstream>

namespace muskat {

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["pass"] = pass;
  j["measured"] = measured;
  j["tolerances"] = tolerances;
  j["inputs"] = inputs;
  j["digest"] = digest;
  return j;
}

PropertyReport PropertyReport::from_json(const nlohmann::json& j) {
  PropertyReport r;
  r.name = j.at("name").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  r.measured = j.at("measured").get<std::map<std::string, double>>();
  r.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
  r.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  r.digest = j.at("digest").get<std::string>();
  return r;
}

std::string PropertyReport::summary_line() const {
  std::ostringstream os;
  os << (pass ? "PASS " : "FAIL ") << name;
  os.precision(4);
  for (const auto& [k, v] : measured) os << "  " << k << "=" << v;
  for (const auto& [k, v] : tolerances) os << "  " << k << "=" << v;
  return os.str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest_doubles(const double* data, std::size_t count) {
  return fnv1a_hex(std::string_view(reinterpret_cast<const char*>(data), sizeof(double) * count));
}

std::string input_digest(const PropertyReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["inputs"] = r.inputs;
  j["tolerances"] = r.tolerances;
  return fnv1a_hex(j.dump());
}

}  // namespace muskat
