#include "pws/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pws/schemes.hpp"

namespace pws {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(std::string_view key, const std::string& why) {
  throw Error(ErrorCode::config_error, "config key '" + std::string(key) + "': " + why);
}

double to_double(std::string_view key, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) bad(key, "trailing characters in number '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    bad(key, "not a number: '" + t + "'");
  }
}

long long to_integer(std::string_view key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad(key, "not an integer: '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

State to_state(std::string_view key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty()) bad(key, "empty vector");
  State x(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) x[static_cast<Eigen::Index>(i)] = to_double(key, parts[i]);
  return x;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys{
      "system", "surface.on_surface_tol", "scheme.minus", "scheme.plus", "x0", "t0", "T", "tau",
      "taus", "perturbation.c", "perturbation.p", "solver.fp_tol", "solver.fp_max_iter",
      "solver.newton_fallback_after", "solver.root_tol_t", "solver.root_max_iter",
      "solver.fd_jacobian_step", "engine.max_crossings_per_step", "engine.max_events",
      "engine.max_steps", "engine.crossing_scan_points", "out", "seed", "sweep.transitions",
      "sweep.tau_ref", "conserve.baseline", "classify.points"};
  return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::config_error,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_error, "cannot open config file " + path.string());
  return parse(in);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw Error(ErrorCode::config_error, "empty config key");
  values_[key] = value;
}

void KeyValueConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::config_error, "override '" + std::string(assignment) + "' is not key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

ExperimentConfig parse_experiment_config(const KeyValueConfig& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv.entries()) {
    if (key.starts_with("system.")) {
      cfg.system_params[key.substr(7)] = to_double(key, value);
    } else if (!known_keys().contains(key)) {
      bad(key, "unknown key");
    }
  }
  const auto num = [&](std::string_view key, auto& target) {
    if (const auto v = kv.get(key)) target = to_double(key, *v);
  };
  const auto integer = [&](std::string_view key, auto& target) {
    if (const auto v = kv.get(key)) {
      const long long n = to_integer(key, *v);
      if (n < 1) bad(key, "must be at least 1");
      target = static_cast<std::remove_reference_t<decltype(target)>>(n);
    }
  };

  if (const auto v = kv.get("system")) cfg.system = *v;
  const std::vector<std::string> systems = system_names();
  if (std::find(systems.begin(), systems.end(), cfg.system) == systems.end()) {
    bad("system", "unknown system '" + cfg.system + "'");
  }
  if (const auto v = kv.get("surface.on_surface_tol")) {
    cfg.on_surface_tol = to_double("surface.on_surface_tol", *v);
    if (!(*cfg.on_surface_tol > 0.0)) bad("surface.on_surface_tol", "must be positive");
  }
  const std::vector<std::string> schemes = scheme_names();
  for (const auto& [key, target] : {std::pair{"scheme.minus", &cfg.scheme_minus},
                                    std::pair{"scheme.plus", &cfg.scheme_plus}}) {
    if (const auto v = kv.get(key)) {
      if (std::find(schemes.begin(), schemes.end(), *v) == schemes.end()) {
        bad(key, "unknown scheme '" + *v + "'");
      }
      *target = *v;
    }
  }
  if (const auto v = kv.get("x0")) cfg.x0 = to_state("x0", *v);
  num("t0", cfg.t0);
  if (const auto v = kv.get("T")) cfg.T = to_double("T", *v);
  num("tau", cfg.tau);
  if (!(cfg.tau > 0.0)) bad("tau", "must be positive");
  if (const auto v = kv.get("taus")) {
    cfg.taus.clear();
    for (const auto& item : split(*v, ',')) cfg.taus.push_back(to_double("taus", item));
  }
  for (double t : cfg.taus) {
    if (!(t > 0.0)) bad("taus", "all step sizes must be positive");
  }
  // Largest step first, so rows come out in a fixed order.
  std::sort(cfg.taus.begin(), cfg.taus.end(), std::greater<>());

  if (kv.get("perturbation.p") || kv.get("perturbation.c")) {
    Perturbation p;
    num("perturbation.c", p.c);
    if (!kv.get("perturbation.p")) bad("perturbation.p", "required when perturbation.c is set");
    num("perturbation.p", p.p);
    if (!(p.p > 0.0)) bad("perturbation.p", "must be positive");
    cfg.perturbation = p;
  }

  auto& s = cfg.engine.solver;
  num("solver.fp_tol", s.fp_tol);
  integer("solver.fp_max_iter", s.fp_max_iter);
  integer("solver.newton_fallback_after", s.newton_fallback_after);
  num("solver.root_tol_t", s.root_tol_t);
  integer("solver.root_max_iter", s.root_max_iter);
  num("solver.fd_jacobian_step", s.fd_jacobian_step);
  integer("engine.max_crossings_per_step", cfg.engine.max_crossings_per_step);
  integer("engine.max_events", cfg.engine.max_events);
  integer("engine.max_steps", cfg.engine.max_steps);
  integer("engine.crossing_scan_points", cfg.engine.crossing_scan_points);
  cfg.engine.validate();

  if (const auto v = kv.get("out")) cfg.out_prefix = *v;
  if (const auto v = kv.get("seed")) cfg.seed = static_cast<std::uint64_t>(to_integer("seed", *v));
  if (const auto v = kv.get("sweep.transitions")) {
    cfg.transitions.clear();
    for (const auto& item : split(*v, ',')) {
      const long long n = to_integer("sweep.transitions", item);
      if (n < 1) bad("sweep.transitions", "transition counts start at 1");
      cfg.transitions.push_back(static_cast<int>(n));
    }
  }
  num("sweep.tau_ref", cfg.tau_ref);
  if (!(cfg.tau_ref > 0.0)) bad("sweep.tau_ref", "must be positive");
  if (const auto v = kv.get("conserve.baseline")) {
    if (std::find(schemes.begin(), schemes.end(), *v) == schemes.end()) {
      bad("conserve.baseline", "unknown scheme '" + *v + "'");
    }
    cfg.baseline_scheme = *v;
  }
  if (const auto v = kv.get("classify.points")) {
    for (const auto& item : split(*v, ';')) cfg.classify_points.push_back(to_state("classify.points", item));
  }
  return cfg;
}

}  // namespace pws
