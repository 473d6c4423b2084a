#include "muskat/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace muskat::io {

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void header(std::string& out, int n) {
  out += "t";
  for (int i = 0; i < n; ++i) out += ",v" + std::to_string(i);
  out += '\n';
}

void row(std::string& out, double t, const Vector& v) {
  out += format_double(t);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += ',';
    out += format_double(v[i]);
  }
  out += '\n';
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  if (traj.frames.empty()) throw IoError("empty trajectory");
  std::string out;
  header(out, traj.frames.front().grid.N);
  for (std::size_t k = 0; k < traj.frames.size(); ++k) row(out, traj.times[k], traj.frames[k].values);
  return out;
}

std::string field_csv(const GraphFunction& f, double t) {
  std::string out;
  header(out, f.grid.N);
  row(out, t, f.values);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0, width = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (line_no == 1) {
      if (cells.empty() || cells[0] != "t") throw IoError("csv line 1: expected header starting with 't'");
      width = cells.size();
      continue;
    }
    if (cells.size() != width)
      throw IoError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " columns");
    Vector v(static_cast<Eigen::Index>(width - 1));
    double t = 0.0;
    for (std::size_t c = 0; c < width; ++c) {
      char* stop = nullptr;
      const double x = std::strtod(cells[c].c_str(), &stop);
      if (stop == cells[c].c_str() || *stop != '\0')
        throw IoError("csv line " + std::to_string(line_no) + ": bad number '" + cells[c] + "'");
      if (c == 0)
        t = x;
      else
        v[static_cast<Eigen::Index>(c - 1)] = x;
    }
    table.times.push_back(t);
    table.rows.push_back(std::move(v));
  }
  if (table.rows.empty()) throw IoError("csv has no data rows");
  return table;
}

Trajectory to_trajectory(const CsvTable& table, double L) {
  const Grid grid = make_grid(L, static_cast<int>(table.rows.front().size()));
  Trajectory traj;
  traj.times = table.times;
  for (const auto& r : table.rows) traj.frames.emplace_back(grid, r);
  return traj;
}

std::string f64_bytes(const double* data, std::size_t count) {
  std::string out(count * sizeof(double), '\0');
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(data[k]);
    for (int b = 0; b < 8; ++b) out[k * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  return out;
}

nlohmann::json f64_sidecar(const std::vector<std::size_t>& shape, const Grid& grid, const nlohmann::json& params,
                           const std::string& kind) {
  return {{"shape", shape},
          {"dtype", "float64"},
          {"byte_order", "little"},
          {"layout", "row-major"},
          {"grid", {{"L", grid.L}, {"N", grid.N}}},
          {"params", params},
          {"kind", kind}};
}

}  // namespace muskat::io
