// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_WALK_HPP
#define LSCONV_WALK_HPP

#include <cstdint>
#include <vector>

#include "lsconv/distributions.hpp"
#include "lsconv/grid_function.hpp"
#include "lsconv/rng.hpp"
#include "lsconv/step_function.hpp"

namespace lsconv {

inline constexpr std::size_t kDefaultPointCap = 10'000'000;
inline constexpr std::size_t kDefaultPopulationCap = 10'000'000;

// A walk whose k-th point is xi_1 + ... + xi_{k-1} + eta_k: the running sum
// of the step variables, displaced by a fresh perturbation each time. With
// eta_equals_xi the two are a single draw per step, which collapses the
// points back onto the plain partial sums.
struct WalkSpec {
  DistributionSpec xi;
  DistributionSpec eta;
  bool eta_equals_xi = false;

  void validate() const;
  bool operator==(const WalkSpec&) const = default;
};

// Samples every point of the walk that lands in [0, horizon], sorted
// ascending. Each iteration draws xi then eta (one shared draw when
// eta_equals_xi), so stream consumption is fixed and replayable.
std::vector<double> sample_prw_points(
    const WalkSpec& spec, double horizon, RngStream& rng,
    std::size_t point_cap = kDefaultPointCap);

// Unit atom at each event time; the result counts events in [0, t].
StepFunction counting_step_function(const std::vector<double>& times,
                                    double horizon);

// X, X*X, ..., up to j_max convolution factors, all truncated at horizon.
std::vector<StepFunction> coupled_counts(
    const StepFunction& x, std::size_t j_max, double horizon,
    std::size_t atom_cap = kDefaultAtomCap);

// Names the random stream for one unit of work inside one replica.
struct StreamContext {
  std::uint64_t seed = 0;
  std::uint64_t domain = kDomainSimulation;
  std::uint64_t replica = 0;

  RngStream stream(std::uint64_t generation, std::uint64_t individual) const {
    return substream(seed, domain, replica, generation, individual);
  }
};

// Branching cascade built from independent walks: generation 1 is the walk
// itself, and each individual born at time b starts a fresh walk whose
// points, shifted by b, are the next generation's births. Returns the
// counting functions Y_1, ..., Y_{j_max}. Each individual consumes a stream
// keyed by (generation, birth rank), so the cascade reproduces exactly under
// any scheduling of replicas.
std::vector<StepFunction> decoupled_generations(
    const WalkSpec& spec, std::size_t j_max, double horizon,
    const StreamContext& ctx,
    std::size_t population_cap = kDefaultPopulationCap);

// Same cascade, but returns only the counts Y_g(e) for each generation
// g = 1..j_max at the given evaluation times (ascending; the last one is the
// horizon). Consumes streams exactly like decoupled_generations and never
// materializes the final generation, which dominates the population.
std::vector<std::vector<double>> decoupled_counts_at(
    const WalkSpec& spec, std::size_t j_max,
    const std::vector<double>& eval_times, const StreamContext& ctx,
    std::size_t population_cap = kDefaultPopulationCap);

// t -> E[X(t)] for the walk. Exact in two cases: both variables exponential
// with a common rate (a straight line through the origin) and both variables
// constant (a staircase). Anything else falls back to Monte Carlo.
class MeanFunction {
 public:
  enum class Kind { linear, lattice, monte_carlo };

  Kind kind() const { return kind_; }
  bool exact() const { return kind_ != Kind::monte_carlo; }

  // Exact kinds only; throws MeanUnavailable otherwise.
  double value(double t) const;

  // Linear kind only: the mean as rate * t^1.
  PowerFunction as_power() const;

  // Lattice kind only: the staircase t -> E[X(time_scale * t)], as unit
  // atoms up to the horizon.
  StepFunction step_function(double horizon, double time_scale = 1.0) const;

  // Mean of X(t) over n fresh replicas; works for any kind.
  double estimate(double t, std::size_t n, std::uint64_t seed) const;

  const WalkSpec& spec() const { return spec_; }

 private:
  friend MeanFunction mean_function(const WalkSpec& spec);
  MeanFunction(Kind kind, WalkSpec spec, double a, double b);

  Kind kind_;
  WalkSpec spec_;
  double a_;  // linear: rate; lattice: spacing
  double b_;  // lattice: first point
};

MeanFunction mean_function(const WalkSpec& spec);

}  // namespace lsconv

#endif  // LSCONV_WALK_HPP
