#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pitch/types.hpp"

namespace pitch {

enum class Scenario {
  StringBetaSweep,      // sweep: string stiffness beta
  StringNSweep,         // sweep: sample count N
  StochasticSigmaSweep, // sweep: inharmonicity variance sigma2_delta
  SnrSweep,             // sweep: SNR in dB
};

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

/// Deterministic recipe for the test signal of one experiment.
struct SignalSpec {
  std::size_t k_count = 5;
  double omega0 = 0.0;
  std::string amplitude_rule = "gaussian-bell";  // or "explicit"
  double rho = 0.2;                              // gaussian-bell width
  std::vector<double> amplitudes;                // used when rule == "explicit"
  std::string phase_rule = "random";             // "random", "zero", "explicit"
  std::vector<double> phases;                    // used when rule == "explicit"

  std::vector<double> resolve_amplitudes() const;
};

/// r_k = exp(-rho (k - K/2)^2), k = 1..k_count.
std::vector<double> gaussian_bell_amplitudes(std::size_t k_count, double rho);

struct ExperimentConfig {
  Scenario scenario = Scenario::StringBetaSweep;
  SignalSpec signal;
  std::vector<double> sweep;
  std::size_t n = 500;
  double snr_db = 10.0;
  double beta = 0.0;  // fixed stiffness for N- and SNR-sweeps
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::vector<std::string> estimators;
  std::string output_path;
  int threads = 1;

  void validate() const;  // throws ConfigError
};

/// One (trial, estimator, target) outcome. `estimator` carries the target
/// suffix "@omega1" for first-component-frequency rows in the stochastic
/// scenario.
struct TrialRecord {
  double sweep_value = 0.0;
  std::size_t trial = 0;
  std::string estimator;
  double estimate = 0.0;
  double reference = 0.0;
  double squared_error = 0.0;
  bool converged = false;
  double wall_ms = 0.0;
};

struct SummaryRow {
  double sweep_value = 0.0;
  std::string estimator;
  std::size_t n_trials = 0;
  std::size_t n_failed = 0;
  double mean_estimate = 0.0;
  double reference = 0.0;  // mean of per-trial references
  double bias2 = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  std::string bound_name;
  double bound_value = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> summary;
};

/// Runs the configured Monte Carlo study. Per-trial random streams are
/// derived from (base_seed, sweep index, trial index), so results are
/// identical for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Fixed-column CSV renderings (deterministic formatting).
std::string summary_csv(const ExperimentResult& result);
std::string trials_csv(const ExperimentResult& result);

/// Parse / serialize the JSON experiment description.
ExperimentConfig experiment_from_json(const std::string& text);

}  // namespace pitch
