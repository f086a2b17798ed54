#include "nltraffic/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nltraffic/errors.hpp"

namespace nltraffic {

using nlohmann::json;

namespace {

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::riemann:
      return "riemann";
    case InitialKind::piecewise:
      return "piecewise";
    case InitialKind::sine:
      return "sine";
  }
  return "unknown";
}

std::string_view to_string(TimeIntegrator t) {
  return t == TimeIntegrator::ssp_rk2 ? "ssp-rk2" : "forward-euler";
}

std::string_view to_string(ErrorNorm n) { return n == ErrorNorm::space_time ? "space-time" : "final-time"; }

/// Reads typed fields out of one JSON object, recording problems instead of
/// throwing, and remembering which keys were consumed.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {
    if (!obj_.is_object()) issues_.push_back(path_ + ": expected an object");
  }

  bool has(const char* key) const { return obj_.is_object() && obj_.contains(key); }

  template <class T>
  void get(const char* key, T& out, bool required = false) {
    seen_.insert(key);
    if (!has(key)) {
      if (required) issues_.push_back(name(key) + ": missing required key");
      return;
    }
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      issues_.push_back(name(key) + ": wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return has(key) ? &obj_.at(key) : nullptr;
  }

  void finish() const {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) issues_.push_back(name(key) + ": unknown key '" + key + "'");
  }

  std::string name(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void check_density(double v, double rho_jam, const std::string& what, std::vector<std::string>& issues) {
  std::ostringstream os;
  if (!std::isfinite(v) || v < 0.0) {
    os << what << "=" << v << ": density must be nonnegative";
    issues.push_back(os.str());
  } else if (v > rho_jam) {
    os << what << "=" << v << ": density exceeds rho_jam=" << rho_jam;
    issues.push_back(os.str());
  }
}

}  // namespace

std::size_t DomainSpec::cells() const {
  return static_cast<std::size_t>(std::llround((x_max - x_min) / dx));
}

bool RunConfig::operator==(const RunConfig& o) const {
  return scenario == o.scenario && model == o.model && domain == o.domain && initial == o.initial &&
         eps == o.eps && t_end == o.t_end && cfl == o.cfl && snapshot_times == o.snapshot_times &&
         snapshot_count == o.snapshot_count && window.lo == o.window.lo && window.hi == o.window.hi &&
         output == o.output && reference_dx == o.reference_dx && integrator == o.integrator &&
         allow_unresolved_kernel == o.allow_unresolved_kernel && max_halvings == o.max_halvings &&
         error_norm == o.error_norm && audit_times == o.audit_times;
}

double required_window_margin(const RunConfig& config, const VelocityModel& model) {
  const double max_eps = config.eps.empty() ? 0.0 : *std::max_element(config.eps.begin(), config.eps.end());
  return 10.0 * max_eps + config.t_end * model.max_velocity();
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError({os.str()});
  }

  std::vector<std::string> issues;
  RunConfig cfg;
  Reader top(doc, "", issues);
  top.get("scenario", cfg.scenario);

  // model
  std::string kind_name = "greenshields";
  bool delta_given = false;
  if (const json* m = top.child("model")) {
    Reader r(*m, "model", issues);
    r.get("kind", kind_name, true);
    r.get("rho_jam", cfg.model.rho_jam);
    r.get("params", cfg.model.params);
    delta_given = r.has("delta_star");
    r.get("delta_star", cfg.model.delta_star);
    r.finish();
  } else {
    issues.push_back("model: missing required key");
  }
  try {
    cfg.model.kind = parse_velocity_kind(kind_name);
  } catch (const Error& e) {
    issues.push_back(std::string("model.kind: ") + e.what());
  }
  if (!delta_given) {
    if (cfg.model.kind == VelocityKind::greenshields) {
      const double v_max = cfg.model.params.empty() ? 1.0 : cfg.model.params[0];
      cfg.model.delta_star = v_max / cfg.model.rho_jam;
    } else {
      issues.push_back("model.delta_star: missing required key for kind " + kind_name);
    }
  }

  // domain
  std::string boundary_name = "constant-extension";
  if (const json* d = top.child("domain")) {
    Reader r(*d, "domain", issues);
    r.get("x_min", cfg.domain.x_min);
    r.get("x_max", cfg.domain.x_max);
    r.get("dx", cfg.domain.dx);
    r.get("boundary", boundary_name);
    r.finish();
  }
  if (boundary_name == "periodic")
    cfg.domain.boundary = Boundary::periodic;
  else if (boundary_name == "constant-extension")
    cfg.domain.boundary = Boundary::constant_extension;
  else
    issues.push_back("domain.boundary: unknown policy '" + boundary_name + "'");

  // initial data
  if (const json* in = top.child("initial")) {
    Reader r(*in, "initial", issues);
    std::string type;
    r.get("type", type, true);
    if (type == "riemann") {
      cfg.initial.kind = InitialKind::riemann;
      r.get("rho_l", cfg.initial.rho_l, true);
      r.get("rho_r", cfg.initial.rho_r, true);
      r.get("x_jump", cfg.initial.x_jump);
    } else if (type == "piecewise") {
      cfg.initial.kind = InitialKind::piecewise;
      r.get("breakpoints", cfg.initial.breakpoints, true);
      r.get("values", cfg.initial.values, true);
    } else if (type == "sine") {
      cfg.initial.kind = InitialKind::sine;
      r.get("mean", cfg.initial.mean, true);
      r.get("amplitude", cfg.initial.amplitude, true);
      r.get("wavenumber", cfg.initial.wavenumber);
    } else if (!type.empty()) {
      issues.push_back("initial.type: unknown initial data '" + type + "'");
    }
    r.finish();
  } else {
    issues.push_back("initial: missing required key");
  }

  top.get("eps", cfg.eps);
  top.get("t_end", cfg.t_end);
  top.get("cfl", cfg.cfl);
  top.get("snapshot_times", cfg.snapshot_times);
  top.get("snapshot_count", cfg.snapshot_count);
  std::vector<double> window;
  const bool window_given = top.has("window");
  top.get("window", window);
  top.get("output", cfg.output);
  const bool ref_given = top.has("reference_dx");
  top.get("reference_dx", cfg.reference_dx);
  std::string integrator = "forward-euler";
  top.get("integrator", integrator);
  top.get("allow_unresolved_kernel", cfg.allow_unresolved_kernel);
  top.get("max_halvings", cfg.max_halvings);
  std::string norm = "final-time";
  top.get("error_norm", norm);
  top.get("audit_times", cfg.audit_times);
  top.finish();

  if (integrator == "ssp-rk2")
    cfg.integrator = TimeIntegrator::ssp_rk2;
  else if (integrator != "forward-euler")
    issues.push_back("integrator: unknown integrator '" + integrator + "'");
  if (norm == "space-time")
    cfg.error_norm = ErrorNorm::space_time;
  else if (norm != "final-time")
    issues.push_back("error_norm: unknown norm '" + norm + "'");

  // semantic checks
  const double rho_jam = cfg.model.rho_jam;
  if (!(rho_jam > 0.0)) issues.push_back("model.rho_jam: must be positive");
  if (!(cfg.model.delta_star > 0.0)) issues.push_back("model.delta_star: must be positive");

  const auto& dom = cfg.domain;
  bool grid_ok = true;
  if (!(dom.x_min < dom.x_max)) {
    issues.push_back("domain: x_min must be below x_max");
    grid_ok = false;
  }
  if (!(dom.dx > 0.0)) {
    issues.push_back("domain.dx: must be positive");
    grid_ok = false;
  }
  if (grid_ok) {
    const double ratio = (dom.x_max - dom.x_min) / dom.dx;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
      issues.push_back("domain.dx: does not divide the domain length");
      grid_ok = false;
    }
  }

  if (rho_jam > 0.0) {
    const auto& in = cfg.initial;
    switch (in.kind) {
      case InitialKind::riemann:
        check_density(in.rho_l, rho_jam, "initial.rho_l", issues);
        check_density(in.rho_r, rho_jam, "initial.rho_r", issues);
        break;
      case InitialKind::piecewise:
        if (in.values.size() != in.breakpoints.size() + 1)
          issues.push_back("initial.values: need exactly one more value than breakpoints");
        if (!std::is_sorted(in.breakpoints.begin(), in.breakpoints.end()) ||
            std::adjacent_find(in.breakpoints.begin(), in.breakpoints.end()) != in.breakpoints.end())
          issues.push_back("initial.breakpoints: must be strictly increasing");
        for (std::size_t i = 0; i < in.values.size(); ++i)
          check_density(in.values[i], rho_jam, "initial.values[" + std::to_string(i) + "]", issues);
        break;
      case InitialKind::sine:
        check_density(in.mean - std::abs(in.amplitude), rho_jam, "initial.mean-amplitude", issues);
        check_density(in.mean + std::abs(in.amplitude), rho_jam, "initial.mean+amplitude", issues);
        if (!(in.wavenumber > 0.0)) issues.push_back("initial.wavenumber: must be positive");
        break;
    }
  }

  if (cfg.eps.empty()) issues.push_back("eps: need at least one kernel scale");
  for (double e : cfg.eps)
    if (!(e > 0.0)) issues.push_back("eps: values must be positive");
  {
    auto sorted = cfg.eps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      issues.push_back("eps: values must be distinct");
    std::sort(cfg.eps.begin(), cfg.eps.end(), std::greater<>());
  }
  if (!(cfg.t_end > 0.0)) issues.push_back("t_end: must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) issues.push_back("cfl: must lie in (0, 1]");
  for (double t : cfg.snapshot_times)
    if (!(t > 0.0 && t <= cfg.t_end)) issues.push_back("snapshot_times: values must lie in (0, t_end]");
  for (double t : cfg.audit_times)
    if (!(t > 0.0 && t <= cfg.t_end)) issues.push_back("audit_times: values must lie in (0, t_end]");
  if (cfg.snapshot_count < 1) issues.push_back("snapshot_count: must be at least 1");
  if (cfg.max_halvings < 0) issues.push_back("max_halvings: must be nonnegative");

  if (grid_ok && !cfg.eps.empty() && !cfg.allow_unresolved_kernel) {
    const double min_eps = *std::min_element(cfg.eps.begin(), cfg.eps.end());
    if (dom.dx > min_eps / 10.0 * (1.0 + 1e-12))
      issues.push_back("domain.dx: exceeds min(eps)/10 (set allow_unresolved_kernel to override)");
  }
  if (!ref_given && grid_ok) cfg.reference_dx = dom.dx / 4.0;
  if (grid_ok) {
    const double r = dom.dx / cfg.reference_dx;
    if (!(cfg.reference_dx > 0.0) || std::abs(r - std::round(r)) > 1e-9 * r || std::round(r) < 1.0)
      issues.push_back("reference_dx: must divide dx");
  }

  // Error window and its boundary margin.
  double margin = 0.0;
  if (issues.empty()) {
    try {
      margin = required_window_margin(cfg, VelocityModel(cfg.model));
    } catch (const Error& e) {
      issues.push_back(std::string("model: ") + e.what());
    }
  }
  const bool periodic = dom.boundary == Boundary::periodic;
  if (window_given) {
    if (window.size() != 2 || !(window[0] < window[1])) {
      issues.push_back("window: expected [lo, hi] with lo < hi");
    } else {
      cfg.window = {window[0], window[1]};
      if (cfg.window.lo < dom.x_min || cfg.window.hi > dom.x_max) {
        issues.push_back("window: must lie inside the domain");
      } else if (!periodic && issues.empty() &&
                 (cfg.window.lo - dom.x_min < margin * (1.0 - 1e-12) ||
                  dom.x_max - cfg.window.hi < margin * (1.0 - 1e-12))) {
        std::ostringstream os;
        os << "window: must keep a boundary margin of at least " << margin;
        issues.push_back(os.str());
      }
    }
  } else if (periodic) {
    cfg.window = {dom.x_min, dom.x_max};
  } else {
    cfg.window = {dom.x_min + margin, dom.x_max - margin};
    if (issues.empty() && !(cfg.window.lo < cfg.window.hi))
      issues.push_back("window: domain too short for the required boundary margin");
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read configuration " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_document(const RunConfig& c) {
  json initial;
  initial["type"] = std::string(to_string(c.initial.kind));
  switch (c.initial.kind) {
    case InitialKind::riemann:
      initial["rho_l"] = c.initial.rho_l;
      initial["rho_r"] = c.initial.rho_r;
      initial["x_jump"] = c.initial.x_jump;
      break;
    case InitialKind::piecewise:
      initial["breakpoints"] = c.initial.breakpoints;
      initial["values"] = c.initial.values;
      break;
    case InitialKind::sine:
      initial["mean"] = c.initial.mean;
      initial["amplitude"] = c.initial.amplitude;
      initial["wavenumber"] = c.initial.wavenumber;
      break;
  }
  json doc = {
      {"scenario", c.scenario},
      {"model",
       {{"kind", std::string(to_string(c.model.kind))},
        {"rho_jam", c.model.rho_jam},
        {"params", c.model.params},
        {"delta_star", c.model.delta_star}}},
      {"domain",
       {{"x_min", c.domain.x_min},
        {"x_max", c.domain.x_max},
        {"dx", c.domain.dx},
        {"boundary", std::string(to_string(c.domain.boundary))}}},
      {"initial", initial},
      {"eps", c.eps},
      {"t_end", c.t_end},
      {"cfl", c.cfl},
      {"snapshot_times", c.snapshot_times},
      {"snapshot_count", c.snapshot_count},
      {"window", {c.window.lo, c.window.hi}},
      {"output", c.output},
      {"reference_dx", c.reference_dx},
      {"integrator", std::string(to_string(c.integrator))},
      {"allow_unresolved_kernel", c.allow_unresolved_kernel},
      {"max_halvings", c.max_halvings},
      {"error_norm", std::string(to_string(c.error_norm))},
      {"audit_times", c.audit_times},
  };
  return doc.dump(2) + "\n";
}

std::vector<std::string> config_warnings(const RunConfig& c) {
  std::vector<std::string> out;
  if (c.allow_unresolved_kernel && !c.eps.empty()) {
    const double min_eps = *std::min_element(c.eps.begin(), c.eps.end());
    if (c.domain.dx > min_eps / 10.0)
      out.push_back("dx exceeds min(eps)/10: the kernel is under-resolved");
  }
  bool vacuum = false;
  switch (c.initial.kind) {
    case InitialKind::riemann:
      vacuum = c.initial.rho_l == 0.0 || c.initial.rho_r == 0.0;
      break;
    case InitialKind::piecewise:
      vacuum = std::find(c.initial.values.begin(), c.initial.values.end(), 0.0) != c.initial.values.end();
      break;
    case InitialKind::sine:
      vacuum = c.initial.mean - std::abs(c.initial.amplitude) <= 0.0;
      break;
  }
  if (vacuum) out.push_back("initial data reaches vacuum: outside the uniformly-positive-density hypothesis");
  return out;
}

}  // namespace nltraffic
