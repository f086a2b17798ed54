#include "nltraffic/field.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "nltraffic/errors.hpp"

namespace nltraffic {

std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "constant-extension";
}

Boundary parse_boundary(std::string_view name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "constant-extension") return Boundary::constant_extension;
  throw UsageError("unknown boundary policy '" + std::string(name) + "'");
}

double DensityField::mass() const noexcept {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum * dx;
}

bool DensityField::same_grid(const DensityField& other) const noexcept {
  // Grids built from the same domain along different refinement paths may
  // differ in the last bits of dx.
  const double tol = 1e-12 * (std::abs(dx) + std::abs(x0) + 1.0);
  return std::abs(x0 - other.x0) <= tol && std::abs(dx - other.dx) <= 1e-12 * dx &&
         values.size() == other.values.size() && boundary == other.boundary;
}

void require_valid(const DensityField& field) {
  if (!(field.dx > 0.0)) throw UsageError("density field needs dx > 0");
  if (field.values.empty()) throw UsageError("density field needs at least one cell");
  for (double v : field.values)
    if (!std::isfinite(v)) throw UsageError("density field contains a non-finite value");
}

void require_in_range(const DensityField& field, double rho_jam, double slack) {
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = field.values[i];
    if (v < -slack || v > rho_jam + slack) {
      std::ostringstream os;
      os << "density " << v << " at cell " << i << " outside [0, " << rho_jam << "]";
      throw DomainError(os.str());
    }
  }
}

void require_same_grid(const DensityField& a, const DensityField& b, std::string_view what) {
  if (!a.same_grid(b)) throw UsageError(std::string(what) + ": fields do not share a grid");
}

DensityField coarsen(const DensityField& fine, std::size_t ratio) {
  if (ratio == 0 || fine.size() % ratio != 0)
    throw UsageError("coarsen: cell count is not a multiple of the ratio");
  DensityField out{fine.x0, fine.dx * static_cast<double>(ratio), {}, fine.boundary};
  out.values.resize(fine.size() / ratio);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < ratio; ++k) s += fine.values[i * ratio + k];
    out.values[i] = s / static_cast<double>(ratio);
  }
  return out;
}

}  // namespace nltraffic

namespace nltraffic {

double total_variation(const DensityField& field) {
  const auto& v = field.values;
  double tv = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
  if (field.boundary == Boundary::periodic && v.size() > 1) tv += std::abs(v.front() - v.back());
  return tv;
}

}  // namespace nltraffic
