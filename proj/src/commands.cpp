#include "pws/commands.hpp"

#include <algorithm>
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "pws/csv.hpp"
#include "pws/oracles.hpp"

namespace pws {

double default_final_time(const std::string& system, Command command) {
  // Long runs put at least 30 crossings in [0, T] and keep T well away from any crossing.
  const bool long_run = command == Command::sweep || command == Command::conserve;
  if (system == "harmonic") return long_run ? 78.5 : 10.0;
  if (system == "elliptic") return long_run ? 29.6 : 10.0;
  return 2.0;
}

ExperimentSetup resolve_setup(const ExperimentConfig& cfg, Command command) {
  ExperimentSetup s{make_system(cfg.system, cfg.system_params), {}, {}, {}, cfg.t0, 0.0};
  if (cfg.on_surface_tol) s.system.system.surface.on_surface_tol = *cfg.on_surface_tol;
  const std::string fallback = default_scheme(s.system);
  s.scheme_minus = make_scheme(cfg.scheme_minus.empty() ? fallback : cfg.scheme_minus, s.system,
                               RegionSide::minus);
  s.scheme_plus = make_scheme(cfg.scheme_plus.empty() ? fallback : cfg.scheme_plus, s.system,
                              RegionSide::plus);
  s.x0 = cfg.x0.value_or(s.system.default_x0);
  if (s.x0.size() != s.system.system.dim) {
    throw Error(ErrorCode::config_error, "x0 must have " + std::to_string(s.system.system.dim) +
                                             " components");
  }
  s.T = cfg.T.value_or(default_final_time(cfg.system, command));
  const bool allow_empty = command == Command::conserve || command == Command::classify;
  if (!(s.T > s.t0) && !(allow_empty && s.T == s.t0)) {
    throw Error(ErrorCode::config_error, "T must exceed t0");
  }
  return s;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  if (cfg.taus.size() < 3) {
    throw Error(ErrorCode::config_error, "a sweep needs at least 3 step sizes");
  }
  const ExperimentSetup setup = resolve_setup(cfg, Command::sweep);
  const PwsSystem& sys = setup.system.system;

  State ref_final;
  std::vector<OracleEvent> ref_events;
  if (setup.system.name == "harmonic") {
    const HarmonicOracle oracle(setup.system.params.at("omega2_minus"),
                                setup.system.params.at("omega2_plus"), setup.x0, setup.t0,
                                setup.T);
    ref_final = oracle.state(setup.T);
    ref_events = oracle.events();
  } else {
    const double smallest = *std::min_element(cfg.taus.begin(), cfg.taus.end());
    ReferenceRun ref = reference_trajectory(sys, setup.x0, setup.t0, setup.T, cfg.tau_ref,
                                            smallest, cfg.engine);
    ref_final = ref.trajectory.states.back();
    ref_events = std::move(ref.events);
  }

  std::vector<std::future<Trajectory>> runs;
  runs.reserve(cfg.taus.size());
  for (double tau : cfg.taus) {
    runs.push_back(std::async(std::launch::async, [&, tau] {
      return integrate(sys, setup.scheme_minus, setup.scheme_plus, setup.x0, setup.t0, setup.T,
                       tau, cfg.engine, cfg.perturbation);
    }));
  }

  SweepResult out;
  out.transitions = cfg.transitions;
  out.reference_events = ref_events.size();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Trajectory traj = runs[i].get();
    SweepRow row;
    row.tau = cfg.taus[i];
    row.n_events = traj.events.size();
    row.final_state_error = (traj.states.back() - ref_final).norm();
    std::vector<double> time_errors;
    try {
      time_errors = crossing_time_errors(traj, ref_events);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::event_mismatch) throw;
    }
    for (int n : cfg.transitions) {
      const auto idx = static_cast<std::size_t>(n - 1);
      row.crossing_time_errors.push_back(idx < time_errors.size() ? std::optional(time_errors[idx])
                                                                  : std::nullopt);
    }
    out.rows.push_back(std::move(row));
  }

  const auto fit = [&](auto pick) -> std::optional<OrderEstimate> {
    std::vector<double> taus;
    std::vector<double> errors;
    for (const auto& row : out.rows) {
      if (const std::optional<double> e = pick(row)) {
        taus.push_back(row.tau);
        errors.push_back(*e);
      }
    }
    try {
      return estimate_order(taus, errors);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::insufficient_data) throw;
      return std::nullopt;
    }
  };
  out.state_order = fit([](const SweepRow& r) { return std::optional(r.final_state_error); });
  for (std::size_t j = 0; j < cfg.transitions.size(); ++j) {
    out.crossing_orders.push_back(fit([j](const SweepRow& r) { return r.crossing_time_errors[j]; }));
  }
  return out;
}

ConserveResult run_conserve(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = resolve_setup(cfg, Command::conserve);
  ConserveResult out;
  if (setup.T == setup.t0) return out;
  const PwsSystem& sys = setup.system.system;
  const Trajectory main_run = integrate(sys, setup.scheme_minus, setup.scheme_plus, setup.x0,
                                        setup.t0, setup.T, cfg.tau, cfg.engine, cfg.perturbation);
  const Trajectory baseline =
      integrate(sys, make_scheme(cfg.baseline_scheme, setup.system, RegionSide::minus),
                make_scheme(cfg.baseline_scheme, setup.system, RegionSide::plus), setup.x0,
                setup.t0, setup.T, cfg.tau, cfg.engine, cfg.perturbation);
  out.times = main_run.times;
  out.psi_error_scheme = conserved_error_series(main_run, sys);
  out.psi_error_baseline = conserved_error_series(baseline, sys);
  return out;
}

std::vector<ClassifyRow> run_classify(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = resolve_setup(cfg, Command::classify);
  const PwsSystem& sys = setup.system.system;
  std::vector<ClassifyRow> rows;
  for (const State& x : cfg.classify_points) {
    ClassifyRow row;
    row.x = x;
    if (x.size() != sys.dim) {
      row.error = "config_error";
      rows.push_back(std::move(row));
      continue;
    }
    row.g = sys.surface.g(x);
    try {
      row.result = classify_interface_point(sys, x, setup.t0);
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::vector<std::string> numbered(const std::string& stem, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::vector<std::string> cmd_integrate(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = resolve_setup(cfg, Command::integrate);
  const PwsSystem& sys = setup.system.system;
  const Trajectory traj = integrate(sys, setup.scheme_minus, setup.scheme_plus, setup.x0, setup.t0,
                                    setup.T, cfg.tau, cfg.engine, cfg.perturbation);
  const int d = sys.dim;
  const int n_psi = std::max(sys.conserved_minus.count, sys.conserved_plus.count);
  const std::vector<double> psi_err = conserved_error_series(traj, sys);

  const std::string traj_path = cfg.out_prefix + "_trajectory.csv";
  {
    CsvWriter csv(traj_path, concat(concat(concat({"step", "t"}, numbered("x_", d)), {"g", "side"}),
                                    concat(numbered("psi_", n_psi), {"psi_error"})));
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const State& x = traj.states[k];
      const RegionSegment& seg = traj.segment_of(k);
      csv.field(static_cast<long long>(k)).field(traj.times[k]);
      for (int i = 0; i < d; ++i) csv.field(x[i]);
      csv.field(sys.surface.g(x)).field(to_string(seg.side));
      const State psi = conserved_for_side(sys, seg.side).psi(x);
      for (int i = 0; i < n_psi; ++i) {
        if (i < psi.size()) {
          csv.field(psi[i]);
        } else {
          csv.empty();
        }
      }
      csv.field(psi_err[k]);
      csv.end_row();
    }
  }

  const std::string events_path = cfg.out_prefix + "_events.csv";
  {
    CsvWriter csv(events_path,
                  concat(concat({"index", "t_hat"}, numbered("x_hat_", d)),
                         {"side_from", "side_to", "residual_g", "psi_level_residual",
                          "iters_locate", "iters_complete", "perturbation_applied"}));
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
      const CrossingEvent& ev = traj.events[i];
      csv.field(static_cast<long long>(i)).field(ev.t_hat);
      for (int j = 0; j < d; ++j) csv.field(ev.x_hat[j]);
      csv.field(to_string(ev.side_from))
          .field(to_string(ev.side_to))
          .field(ev.residual_g)
          .field(ev.psi_level_residual)
          .field(static_cast<long long>(ev.stats_locate.iterations))
          .field(static_cast<long long>(ev.stats_complete.iterations))
          .field(ev.perturbation_applied);
      csv.end_row();
    }
  }
  return {traj_path, events_path};
}

std::vector<std::string> cmd_sweep(const ExperimentConfig& cfg) {
  const SweepResult res = run_sweep(cfg);
  std::vector<std::string> header{"kind", "tau", "n_events", "final_state_error"};
  for (int n : res.transitions) header.push_back("crossing_time_error_" + std::to_string(n));
  const std::string path = cfg.out_prefix + "_sweep.csv";
  CsvWriter csv(path, header);
  for (const auto& row : res.rows) {
    csv.field("run").field(row.tau).field(static_cast<long long>(row.n_events)).field(
        row.final_state_error);
    for (const auto& e : row.crossing_time_errors) {
      if (e) {
        csv.field(*e);
      } else {
        csv.empty();
      }
    }
    csv.end_row();
  }
  // Summary rows: one per fitted quantity of the order estimate.
  const auto summary = [&](std::string_view kind, auto member) {
    csv.field(kind).empty().empty();
    if (res.state_order) {
      csv.field((*res.state_order).*member);
    } else {
      csv.empty();
    }
    for (const auto& fit : res.crossing_orders) {
      if (fit) {
        csv.field((*fit).*member);
      } else {
        csv.empty();
      }
    }
    csv.end_row();
  };
  summary("slope", &OrderEstimate::slope);
  summary("intercept", &OrderEstimate::intercept);
  summary("r_squared", &OrderEstimate::r_squared);
  return {path};
}

std::vector<std::string> cmd_conserve(const ExperimentConfig& cfg) {
  const ConserveResult res = run_conserve(cfg);
  const std::string path = cfg.out_prefix + "_conserve.csv";
  CsvWriter csv(path, {"t", "psi_error_dmm", "psi_error_" + cfg.baseline_scheme});
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    csv.field(res.times[k]).field(res.psi_error_scheme[k]).field(res.psi_error_baseline[k]);
    csv.end_row();
  }
  return {path};
}

std::vector<std::string> cmd_classify(const ExperimentConfig& cfg) {
  const std::vector<ClassifyRow> rows = run_classify(cfg);
  const ExperimentSetup setup = resolve_setup(cfg, Command::classify);
  const int d = setup.system.system.dim;
  const std::string path = cfg.out_prefix + "_classify.csv";
  CsvWriter csv(path, concat(concat({"index"}, numbered("x_", d)),
                             {"g", "a_minus", "a_plus", "alpha_sq", "class", "error"}));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ClassifyRow& row = rows[i];
    csv.field(static_cast<long long>(i));
    for (int j = 0; j < d; ++j) {
      if (j < row.x.size()) {
        csv.field(row.x[j]);
      } else {
        csv.empty();
      }
    }
    csv.field(row.g);
    if (row.result) {
      csv.field(row.result->a_minus)
          .field(row.result->a_plus)
          .field(row.result->alpha_sq())
          .field(to_string(row.result->kind));
    } else {
      csv.empty().empty().empty().empty();
    }
    csv.field(row.error);
    csv.end_row();
  }
  return {path};
}

namespace {

void report_error(ErrorCode code, const std::string& message, int exit_code) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c == '\n' ? ' ' : c;
  }
  std::cerr << "pws-error code=" << to_string(code) << " exit=" << exit_code << " message=\""
            << escaped << "\"\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Conservative event-driven integration of piecewise-smooth ODEs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_prefix;
  std::vector<std::string> overrides;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--out", out_prefix, "output path prefix");
    sub->add_option("--set", overrides, "override a config key (key=value), repeatable");
  };
  CLI::App* integrate_cmd = app.add_subcommand("integrate", "single run: trajectory and events CSV");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "convergence-order study over a tau list");
  CLI::App* perturb_cmd =
      app.add_subcommand("perturb", "sweep with an artificial crossing-time error c * tau^p");
  CLI::App* conserve_cmd =
      app.add_subcommand("conserve", "conserved-quantity error: configured scheme vs baseline");
  CLI::App* classify_cmd = app.add_subcommand("classify", "classify points of the switching surface");
  for (CLI::App* sub : {integrate_cmd, sweep_cmd, perturb_cmd, conserve_cmd, classify_cmd}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    KeyValueConfig kv = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::from_file(config_path);
    for (const auto& o : overrides) kv.apply_override(o);
    if (!out_prefix.empty()) kv.set("out", out_prefix);
    if (perturb_cmd->parsed() && !kv.get("perturbation.p")) {
      throw Error(ErrorCode::config_error, "perturb needs perturbation.p");
    }
    const ExperimentConfig cfg = parse_experiment_config(kv);

    std::vector<std::string> written;
    if (integrate_cmd->parsed()) {
      written = cmd_integrate(cfg);
    } else if (sweep_cmd->parsed() || perturb_cmd->parsed()) {
      written = cmd_sweep(cfg);
    } else if (conserve_cmd->parsed()) {
      written = cmd_conserve(cfg);
    } else {
      written = cmd_classify(cfg);
    }
    for (const auto& path : written) std::cout << "wrote " << path << '\n';
    return 0;
  } catch (const Error& e) {
    const int code = is_config_error(e.code()) ? 2 : 3;
    report_error(e.code(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(ErrorCode::evaluation_error, e.what(), 3);
    return 3;
  }
}

}  // namespace pws
