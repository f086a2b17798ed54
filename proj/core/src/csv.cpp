#include "nltraffic/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nltraffic/errors.hpp"

namespace nltraffic {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s, const std::string& path, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    std::ostringstream os;
    os << path << ":" << line << ": malformed number '" << s << "'";
    throw IoError(os.str());
  }
  return v;
}

std::ofstream open_for_write(const std::string& path) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_for_write(path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

void write_csv_trajectory(const Trajectory& traj, const std::string& path) {
  auto out = open_for_write(path);
  std::string buf = "t,x,rho\n";
  for (const auto& s : traj.snapshots) {
    const std::string t = format_double(s.t);
    for (std::size_t i = 0; i < s.field.size(); ++i) {
      buf += t;
      buf += ',';
      buf += format_double(s.field.center(i));
      buf += ',';
      buf += format_double(s.field.values[i]);
      buf += '\n';
    }
  }
  out << buf;
  if (!out) throw IoError("write failed: " + path);
}

Trajectory read_csv_trajectory(const std::string& path, Boundary boundary) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,x,rho") throw IoError(path + ": missing header t,x,rho");

  Trajectory traj;
  std::vector<double> xs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected three columns";
      throw IoError(os.str());
    }
    std::string_view sv(line);
    const double t = parse_double(sv.substr(0, c1), path, lineno);
    const double x = parse_double(sv.substr(c1 + 1, c2 - c1 - 1), path, lineno);
    const double rho = parse_double(sv.substr(c2 + 1), path, lineno);
    if (traj.snapshots.empty() || traj.snapshots.back().t != t) {
      traj.snapshots.push_back({t, DensityField{0.0, 1.0, {}, boundary}});
    }
    traj.snapshots.back().field.values.push_back(rho);
    if (traj.snapshots.size() == 1) xs.push_back(x);
  }
  if (traj.snapshots.empty()) throw IoError(path + ": no data rows");
  const std::size_t n = traj.snapshots.front().field.size();
  const double dx = n > 1 ? (xs.back() - xs.front()) / static_cast<double>(n - 1) : 1.0;
  const double x0 = xs.front() - 0.5 * dx;
  for (auto& s : traj.snapshots) {
    if (s.field.size() != n) throw IoError(path + ": snapshots have different cell counts");
    s.field.x0 = x0;
    s.field.dx = dx;
  }
  return traj;
}

}  // namespace nltraffic
