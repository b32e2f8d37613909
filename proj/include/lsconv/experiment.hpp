// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_EXPERIMENT_HPP
#define LSCONV_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lsconv/step_function.hpp"
#include "lsconv/walk.hpp"

namespace lsconv {

// Which check an experiment runs. coupled_clt / decoupled_clt / heavy_tail /
// mean_identity are statistical (Monte Carlo replicas, KS or SE verdicts);
// lemma_reg / lemma_exp are deterministic convolution-asymptotics checks.
// prop_almsure dispatches to lemma_reg when growth == 0 and lemma_exp
// otherwise.
enum class Theorem {
  coupled_clt,
  decoupled_clt,
  heavy_tail,
  mean_identity,
  lemma_reg,
  lemma_exp,
  prop_almsure,
};

const char* theorem_name(Theorem t);
Theorem theorem_from_name(const std::string& name);
bool theorem_is_statistical(Theorem t);

struct ExperimentConfig {
  Theorem theorem = Theorem::coupled_clt;
  std::optional<WalkSpec> walk;

  std::vector<std::size_t> j_list = {1};
  std::vector<double> u_list = {1.0};
  double t = 1.0;              // time horizon (T for the lemma checks)
  std::size_t replicas = 0;    // N; ignored by deterministic checks
  std::uint64_t seed = 0;
  bool has_seed = false;       // statistical checks require an explicit seed

  double dt = 0.01;            // grid step (lemmas, limit-path u-grid)
  double dt_v = 1e-3;          // subordinator pre-grid for heavy_tail
  double ks_alpha = 0.001;     // per-cell KS level
  double relative_tol = 0.05;  // deterministic / mean verdicts
  std::size_t mean_replicas = 0;  // Monte Carlo centering; 0 -> 20 * replicas

  // power/exponential profile parameters for the lemma checks
  double exponent = 1.0;   // alpha in A * e^(growth*t) * t^alpha
  double growth = 0.0;     // beta; 0 means pure power
  double amplitude = 1.0;  // A

  unsigned threads = 1;  // 0 -> hardware concurrency
  std::size_t atom_cap = kDefaultAtomCap;
  std::size_t point_cap = kDefaultPointCap;
  std::size_t population_cap = kDefaultPopulationCap;

  // Throws InvalidConfig (or MeanUnavailable / OverflowGuard where those are
  // the precise failure) when the combination cannot run.
  void validate() const;
};

// One (j, u) cell of a report. Fields that do not apply to the experiment
// kind are NaN (u included); the serializers drop them.
struct CellResult {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  std::size_t j = 1;
  double u = kUnset;
  std::size_t n = 0;
  double ks_statistic = kUnset;
  double p_value = kUnset;
  double observed = kUnset;
  double expected = kUnset;
  double relative_error = kUnset;
  double std_error = kUnset;
  std::string target;  // readable description of the limit law / closed form
  bool pass = false;
  std::vector<double> samples;            // scaled statistics
  std::vector<double> reference_samples;  // limit draws (two-sample cells)
};

struct ExperimentReport {
  std::string theorem;
  std::uint64_t seed = 0;
  std::vector<CellResult> cells;
  double pass_fraction = 0.0;
  bool pass = false;        // >= 90% of cells for KS checks, all otherwise
  double runtime_ms = 0.0;  // in-memory only; never serialized
};

ExperimentReport run_coupled_clt(const ExperimentConfig& cfg);
ExperimentReport run_decoupled_clt(const ExperimentConfig& cfg);
ExperimentReport run_heavy_tail(const ExperimentConfig& cfg);
ExperimentReport run_mean_identity(const ExperimentConfig& cfg);
ExperimentReport run_lemma_reg(const ExperimentConfig& cfg);
ExperimentReport run_lemma_exp(const ExperimentConfig& cfg);

// Validates and dispatches on cfg.theorem.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// JSON config I/O. Unknown keys are rejected (ParseError) so typos fail
// loudly. Field reference is in the README.
ExperimentConfig experiment_config_from_json(const std::string& text);

// Report serializers. Both are deterministic functions of the report
// contents (runtime_ms excluded), so same-seed runs serialize identically
// regardless of thread count.
std::string report_json(const ExperimentReport& report);
std::string report_csv(const ExperimentReport& report);

}  // namespace lsconv

#endif  // LSCONV_EXPERIMENT_HPP
