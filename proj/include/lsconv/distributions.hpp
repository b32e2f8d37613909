// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_DISTRIBUTIONS_HPP
#define LSCONV_DISTRIBUTIONS_HPP

#include <string>

#include "lsconv/rng.hpp"

namespace lsconv {

// Nonnegative step/displacement laws for the perturbed walks. Moments that
// do not exist are reported as +infinity.
class DistributionSpec {
 public:
  enum class Kind { constant, exponential, uniform, pareto, lognormal };

  static DistributionSpec constant(double value);
  static DistributionSpec exponential(double rate);
  static DistributionSpec uniform(double a, double b);
  // P{X > t} = (t/scale)^(-tail_index) for t >= scale.
  static DistributionSpec pareto(double tail_index, double scale);
  // exp(N(log_mean, log_var)).
  static DistributionSpec lognormal(double log_mean, double log_var);

  Kind kind() const { return kind_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  double mean() const;
  double variance() const;
  double tail(double t) const;  // P{X > t}
  double sample(RngStream& rng) const;

  std::string kind_name() const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec(Kind kind, double a, double b);

  Kind kind_ = Kind::constant;
  double a_ = 0.0;  // value / rate / lower end / tail index / log mean
  double b_ = 0.0;  // upper end / scale / log variance
};

}  // namespace lsconv

#endif  // LSCONV_DISTRIBUTIONS_HPP
