#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pws/config.hpp"
#include "pws/diagnostics.hpp"
#include "pws/schemes.hpp"
#include "pws/systems.hpp"
#include "pws/transition.hpp"

namespace pws {

/// Everything an experiment needs, resolved from the config.
struct ExperimentSetup {
  NamedSystem system;
  DiscreteVectorField scheme_minus;
  DiscreteVectorField scheme_plus;
  State x0;
  double t0 = 0.0;
  double T = 0.0;
};

enum class Command { integrate, sweep, conserve, classify };

/// Final time used when the config leaves T unset.
[[nodiscard]] double default_final_time(const std::string& system, Command command);

[[nodiscard]] ExperimentSetup resolve_setup(const ExperimentConfig& cfg, Command command);

struct SweepRow {
  double tau = 0.0;
  std::size_t n_events = 0;
  double final_state_error = 0.0;
  /// One entry per requested transition count; empty when events do not pair up.
  std::vector<std::optional<double>> crossing_time_errors;
};

struct SweepResult {
  std::vector<int> transitions;
  std::vector<SweepRow> rows;
  std::optional<OrderEstimate> state_order;
  std::vector<std::optional<OrderEstimate>> crossing_orders;
  std::size_t reference_events = 0;
};

/// Per-tau runs against the closed form (harmonic) or an RK4 reference (others).
/// Integrations run concurrently; rows come back in config order.
[[nodiscard]] SweepResult run_sweep(const ExperimentConfig& cfg);

struct ConserveResult {
  std::vector<double> times;
  std::vector<double> psi_error_scheme;
  std::vector<double> psi_error_baseline;
};

[[nodiscard]] ConserveResult run_conserve(const ExperimentConfig& cfg);

struct ClassifyRow {
  State x;
  double g = 0.0;
  std::optional<InterfaceClassification> result;
  std::string error;
};

[[nodiscard]] std::vector<ClassifyRow> run_classify(const ExperimentConfig& cfg);

/// CSV writers. Each returns the paths it wrote.
std::vector<std::string> cmd_integrate(const ExperimentConfig& cfg);
std::vector<std::string> cmd_sweep(const ExperimentConfig& cfg);
std::vector<std::string> cmd_conserve(const ExperimentConfig& cfg);
std::vector<std::string> cmd_classify(const ExperimentConfig& cfg);

/// Entry point shared by the CLI binary and tests. Returns the process exit code:
/// 0 success, 2 config error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace pws
