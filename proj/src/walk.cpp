// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lsconv/errors.hpp"

namespace lsconv {

void WalkSpec::validate() const {
  if (eta_equals_xi && !(eta == xi))
    throw InvalidConfig("eta_equals_xi requires eta and xi to be the same");
  if (xi.kind() == DistributionSpec::Kind::constant && xi.param_a() == 0.0)
    throw DegenerateWalk("xi is the constant 0; the walk never advances");
}

std::vector<double> sample_prw_points(const WalkSpec& spec, double horizon,
                                      RngStream& rng, std::size_t point_cap) {
  spec.validate();
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw Error("sample_prw_points: horizon must be finite and >= 0");

  std::vector<double> points;
  double s = 0.0;
  while (s <= horizon) {
    double x = spec.xi.sample(rng);
    double e = spec.eta_equals_xi ? x : spec.eta.sample(rng);
    double t = s + e;
    if (t <= horizon) {
      if (points.size() >= point_cap)
        throw PointCapExceeded("walk exceeded the point cap of " +
                               std::to_string(point_cap));
      points.push_back(t);
    }
    s += x;
  }
  std::sort(points.begin(), points.end());
  return points;
}

StepFunction counting_step_function(const std::vector<double>& times,
                                    double horizon) {
  std::vector<Atom> atoms;
  atoms.reserve(times.size());
  for (double t : times) atoms.push_back({t, 1.0});
  return StepFunction(std::move(atoms), horizon);
}

std::vector<StepFunction> coupled_counts(const StepFunction& x,
                                         std::size_t j_max, double horizon,
                                         std::size_t atom_cap) {
  if (j_max == 0) throw Error("coupled_counts: j_max must be >= 1");
  std::vector<StepFunction> out;
  out.reserve(j_max);
  out.push_back(truncate(x, horizon));
  for (std::size_t j = 1; j < j_max; ++j)
    out.push_back(convolve(out.back(), x, horizon, atom_cap));
  return out;
}

std::vector<StepFunction> decoupled_generations(const WalkSpec& spec,
                                                std::size_t j_max,
                                                double horizon,
                                                const StreamContext& ctx,
                                                std::size_t population_cap) {
  if (j_max == 0) throw Error("decoupled_generations: j_max must be >= 1");
  spec.validate();

  std::vector<StepFunction> out;
  out.reserve(j_max);

  RngStream root = ctx.stream(0, 0);
  std::vector<double> births =
      sample_prw_points(spec, horizon, root, population_cap);
  out.push_back(counting_step_function(births, horizon));

  for (std::size_t g = 1; g < j_max; ++g) {
    std::vector<double> next;
    for (std::size_t i = 0; i < births.size(); ++i) {
      RngStream rng = ctx.stream(g, i);
      auto pts = sample_prw_points(spec, horizon - births[i], rng,
                                   population_cap);
      for (double p : pts) {
        if (next.size() >= population_cap)
          throw PopulationCapExceeded(
              "cascade exceeded the population cap of " +
              std::to_string(population_cap));
        next.push_back(births[i] + p);
      }
    }
    std::sort(next.begin(), next.end());
    births = std::move(next);
    out.push_back(counting_step_function(births, horizon));
  }
  return out;
}

namespace {

// counts[e] += #{p in sorted : p <= eval[e]} for ascending eval times
void add_counts(const std::vector<double>& sorted,
                const std::vector<double>& eval,
                std::vector<double>& counts) {
  std::size_t k = 0;
  for (std::size_t e = 0; e < eval.size(); ++e) {
    while (k < sorted.size() && sorted[k] <= eval[e]) ++k;
    counts[e] += static_cast<double>(k);
  }
}

}  // namespace

std::vector<std::vector<double>> decoupled_counts_at(
    const WalkSpec& spec, std::size_t j_max,
    const std::vector<double>& eval_times, const StreamContext& ctx,
    std::size_t population_cap) {
  if (j_max == 0) throw Error("decoupled_counts_at: j_max must be >= 1");
  if (eval_times.empty() ||
      !std::is_sorted(eval_times.begin(), eval_times.end()))
    throw Error("decoupled_counts_at: eval_times must be ascending, nonempty");
  spec.validate();

  double horizon = eval_times.back();
  std::vector<std::vector<double>> counts(
      j_max, std::vector<double>(eval_times.size(), 0.0));

  RngStream root = ctx.stream(0, 0);
  std::vector<double> births =
      sample_prw_points(spec, horizon, root, population_cap);
  add_counts(births, eval_times, counts[0]);

  for (std::size_t g = 1; g < j_max; ++g) {
    bool last = (g + 1 == j_max);
    std::vector<double> next;
    for (std::size_t i = 0; i < births.size(); ++i) {
      RngStream rng = ctx.stream(g, i);
      auto pts = sample_prw_points(spec, horizon - births[i], rng,
                                   population_cap);
      if (last) {
        // the final generation is only ever counted, so skip storing it
        for (double p : pts)
          for (std::size_t e = 0; e < eval_times.size(); ++e)
            if (births[i] + p <= eval_times[e]) counts[g][e] += 1.0;
      } else {
        for (double p : pts) {
          if (next.size() >= population_cap)
            throw PopulationCapExceeded(
                "cascade exceeded the population cap of " +
                std::to_string(population_cap));
          next.push_back(births[i] + p);
        }
      }
    }
    if (!last) {
      std::sort(next.begin(), next.end());
      births = std::move(next);
      add_counts(births, eval_times, counts[g]);
    }
  }
  return counts;
}

MeanFunction::MeanFunction(Kind kind, WalkSpec spec, double a, double b)
    : kind_(kind), spec_(std::move(spec)), a_(a), b_(b) {}

double MeanFunction::value(double t) const {
  switch (kind_) {
    case Kind::linear:
      return t <= 0.0 ? 0.0 : a_ * t;
    case Kind::lattice: {
      if (t < b_) return 0.0;
      // count of k >= 0 with b + k*a <= t, repaired against rounding in the
      // division so the jumps land exactly where the atoms sit
      double k = std::floor((t - b_) / a_);
      while (b_ + (k + 1.0) * a_ <= t) k += 1.0;
      while (k > 0.0 && b_ + k * a_ > t) k -= 1.0;
      return k + 1.0;
    }
    case Kind::monte_carlo:
      break;
  }
  throw MeanUnavailable("no closed-form mean for this walk; use estimate()");
}

PowerFunction MeanFunction::as_power() const {
  if (kind_ != Kind::linear)
    throw MeanUnavailable("mean is not a pure power for this walk");
  return {a_, 1.0};
}

StepFunction MeanFunction::step_function(double horizon,
                                         double time_scale) const {
  if (kind_ != Kind::lattice)
    throw MeanUnavailable("mean is not a staircase for this walk");
  if (!(time_scale > 0.0))
    throw Error("step_function: time_scale must be > 0");
  std::vector<Atom> atoms;
  for (double k = 0.0;; k += 1.0) {
    double p = (b_ + k * a_) / time_scale;
    if (p > horizon) break;
    atoms.push_back({p, 1.0});
  }
  return StepFunction(std::move(atoms), horizon);
}

double MeanFunction::estimate(double t, std::size_t n,
                              std::uint64_t seed) const {
  if (n == 0) throw Error("estimate: need at least one replica");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error("estimate: t must be finite and >= 0");
  double sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    RngStream rng = substream(seed, kDomainMean, r, 0, 0);
    sum += static_cast<double>(sample_prw_points(spec_, t, rng).size());
  }
  return sum / static_cast<double>(n);
}

MeanFunction mean_function(const WalkSpec& spec) {
  spec.validate();
  using K = DistributionSpec::Kind;
  if (spec.xi.kind() == K::exponential && spec.eta.kind() == K::exponential &&
      spec.eta.param_a() == spec.xi.param_a())
    return MeanFunction(MeanFunction::Kind::linear, spec, spec.xi.param_a(),
                        0.0);
  if (spec.xi.kind() == K::constant && spec.eta.kind() == K::constant)
    return MeanFunction(MeanFunction::Kind::lattice, spec, spec.xi.param_a(),
                        spec.eta.param_a());
  return MeanFunction(MeanFunction::Kind::monte_carlo, spec, 0.0, 0.0);
}

}  // namespace lsconv
