#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "muskat/evolution.hpp"
#include "muskat/grid.hpp"

namespace muskat::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Write to a sibling temp file, then rename over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// %.17g: round-trips every double.
std::string format_double(double v);

/// Header "t,v0,...,v{N-1}", then one row per snapshot.
std::string trajectory_csv(const Trajectory& traj);
std::string field_csv(const GraphFunction& f, double t = 0.0);

struct CsvTable {
  std::vector<double> times;
  std::vector<Vector> rows;
};

/// Parses the schema written above; every row must have the header's width.
CsvTable parse_csv(std::string_view text);

/// Rows of `table` as a Trajectory on a grid of period L.
Trajectory to_trajectory(const CsvTable& table, double L);

/// Little-endian float64 bytes, row-major.
std::string f64_bytes(const double* data, std::size_t count);

nlohmann::json f64_sidecar(const std::vector<std::size_t>& shape, const Grid& grid, const nlohmann::json& params,
                           const std::string& kind);

}  // namespace muskat::io
