#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nltraffic/entropy_audit.hpp"
#include "nltraffic/field.hpp"
#include "nltraffic/model.hpp"
#include "nltraffic/nonlocal_solver.hpp"

namespace nltraffic {

enum class InitialKind { riemann, piecewise, sine };

struct InitialSpec {
  InitialKind kind = InitialKind::riemann;
  // riemann
  double rho_l = 0.0;
  double rho_r = 0.0;
  double x_jump = 0.0;
  // piecewise: values.size() == breakpoints.size() + 1
  std::vector<double> breakpoints;
  std::vector<double> values;
  // sine: mean + amplitude sin(wavenumber x)
  double mean = 0.0;
  double amplitude = 0.0;
  double wavenumber = 1.0;

  bool operator==(const InitialSpec&) const = default;
};

struct DomainSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  double dx = 1e-3;
  Boundary boundary = Boundary::constant_extension;

  std::size_t cells() const;
  bool operator==(const DomainSpec&) const = default;
};

enum class ErrorNorm { final_time, space_time };

/// One experiment: model, grid, initial data, eps sweep and outputs.
/// See README.md for the document schema and defaults.
struct RunConfig {
  std::string scenario = "scenario";
  ModelSpec model;
  DomainSpec domain;
  InitialSpec initial;
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  double t_end = 0.5;
  double cfl = 0.5;
  std::vector<double> snapshot_times;  // empty: snapshot_count uniform frames
  std::size_t snapshot_count = 100;
  Window window{-0.5, 0.5};
  std::string output = "out";
  double reference_dx = 2.5e-4;
  TimeIntegrator integrator = TimeIntegrator::forward_euler;
  bool allow_unresolved_kernel = false;
  int max_halvings = 20;
  ErrorNorm error_norm = ErrorNorm::final_time;
  std::vector<double> audit_times;  // empty: t_end * {0.25, 0.5, 0.75, 1}

  bool operator==(const RunConfig& o) const;
};

/// Parse and fully validate a JSON configuration document. Every problem is
/// collected into the thrown ConfigError; unknown keys are errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical document with every field explicit; parse_config inverts it.
std::string to_document(const RunConfig& config);

/// Boundary margin the error window has to keep from a non-periodic domain end.
double required_window_margin(const RunConfig& config, const VelocityModel& model);

std::vector<std::string> config_warnings(const RunConfig& config);

}  // namespace nltraffic
