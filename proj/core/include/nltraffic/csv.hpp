#pragma once

#include <string>
#include <vector>

#include "nltraffic/trajectory.hpp"

namespace nltraffic {

/// Shortest decimal form that parses back to the identical binary64 value.
std::string format_double(double v);

/// Header "t,x,rho", one row per (snapshot, cell), time-major then x ascending.
/// x is the cell center.
void write_csv_trajectory(const Trajectory& traj, const std::string& path);

/// Inverse of write_csv_trajectory. Grid spacing is recovered from the x
/// column; run metadata is not stored in the file.
Trajectory read_csv_trajectory(const std::string& path, Boundary boundary = Boundary::constant_extension);

/// Write a text file, creating parent directories. IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nltraffic
