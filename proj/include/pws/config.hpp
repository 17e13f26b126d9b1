#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pws/core_model.hpp"
#include "pws/systems.hpp"
#include "pws/transition.hpp"

namespace pws {

/// Flat `key = value` store with dotted keys. '#' starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig from_file(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  /// Applies a "key=value" command-line override.
  void apply_override(std::string_view assignment);

  [[nodiscard]] std::optional<std::string> get(std::string_view key) const;
  [[nodiscard]] const std::map<std::string, std::string, std::less<>>& entries() const {
    return values_;
  }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

struct ExperimentConfig {
  std::string system = "harmonic";
  ParamMap system_params;
  std::optional<double> on_surface_tol;
  std::string scheme_minus;  ///< empty selects the system's conservative scheme
  std::string scheme_plus;
  std::optional<State> x0;
  double t0 = 0.0;
  std::optional<double> T;
  double tau = 1e-3;
  std::vector<double> taus{2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::optional<Perturbation> perturbation;
  EngineConfig engine;
  std::string out_prefix = "pws";
  std::uint64_t seed = 0;
  std::vector<int> transitions{10, 20, 30};
  double tau_ref = 1.6e-5;
  std::string baseline_scheme = "rk2";
  std::vector<State> classify_points;
};

/// Validates names and values; throws config_error with the offending key.
[[nodiscard]] ExperimentConfig parse_experiment_config(const KeyValueConfig& kv);

}  // namespace pws
