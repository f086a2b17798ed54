#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace nltraffic {

enum class Boundary { constant_extension, periodic };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view name);

/// Cell averages on the uniform grid [x0, x0 + N dx]; cell i is
/// [x0 + i dx, x0 + (i+1) dx].
struct DensityField {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  Boundary boundary = Boundary::constant_extension;

  std::size_t size() const noexcept { return values.size(); }
  double edge(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  double center(std::size_t i) const noexcept { return x0 + (static_cast<double>(i) + 0.5) * dx; }
  double x_end() const noexcept { return edge(values.size()); }
  double mass() const noexcept;

  /// Same grid and boundary policy (values may differ).
  bool same_grid(const DensityField& other) const noexcept;
};

/// Throws UsageError unless dx > 0, N >= 1 and every value is finite.
void require_valid(const DensityField& field);

/// Throws DomainError if a value leaves [0, rho_jam] by more than slack.
void require_in_range(const DensityField& field, double rho_jam, double slack);

void require_same_grid(const DensityField& a, const DensityField& b, std::string_view what);

/// Average groups of `ratio` consecutive cells onto a grid with spacing ratio * dx.
DensityField coarsen(const DensityField& fine, std::size_t ratio);

}  // namespace nltraffic

namespace nltraffic {

/// Sum of |rho_{i+1} - rho_i|; periodic fields include the wraparound jump.
double total_variation(const DensityField& field);

}  // namespace nltraffic
