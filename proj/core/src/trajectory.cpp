#include "nltraffic/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nltraffic/errors.hpp"

namespace nltraffic {

const Snapshot& Trajectory::at(double t) const {
  for (const auto& s : snapshots)
    if (std::abs(s.t - t) <= 1e-12 * std::max(1.0, std::abs(t))) return s;
  std::ostringstream os;
  os << "trajectory has no snapshot at t=" << t;
  throw UsageError(os.str());
}

std::vector<double> normalize_snapshot_times(const std::vector<double>& requested, double t_end) {
  std::vector<double> out;
  for (double t : requested)
    if (t > 0.0 && t < t_end) out.push_back(t);
  out.push_back(t_end);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [t_end](double a, double b) { return std::abs(a - b) <= 1e-12 * t_end; }),
            out.end());
  out.back() = t_end;
  return out;
}

std::vector<double> uniform_snapshot_times(double t_end, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k)
    out.push_back(t_end * static_cast<double>(k) / static_cast<double>(n));
  out.back() = t_end;
  return out;
}

}  // namespace nltraffic
