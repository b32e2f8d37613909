// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/distributions.hpp"

#include <cmath>
#include <limits>

#include "lsconv/errors.hpp"

namespace lsconv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
}  // namespace

DistributionSpec::DistributionSpec(Kind kind, double a, double b)
    : kind_(kind), a_(a), b_(b) {}

DistributionSpec DistributionSpec::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw Error("constant: value must be finite and >= 0");
  return {Kind::constant, value, 0.0};
}

DistributionSpec DistributionSpec::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw Error("exponential: rate must be > 0");
  return {Kind::exponential, rate, 0.0};
}

DistributionSpec DistributionSpec::uniform(double a, double b) {
  if (!(a >= 0.0) || !(a < b) || !std::isfinite(b))
    throw Error("uniform: need 0 <= a < b");
  return {Kind::uniform, a, b};
}

DistributionSpec DistributionSpec::pareto(double tail_index, double scale) {
  if (!(tail_index > 0.0) || !(scale > 0.0))
    throw Error("pareto: need tail_index > 0 and scale > 0");
  return {Kind::pareto, tail_index, scale};
}

DistributionSpec DistributionSpec::lognormal(double log_mean, double log_var) {
  if (!std::isfinite(log_mean) || !(log_var > 0.0))
    throw Error("lognormal: need finite log mean and log variance > 0");
  return {Kind::lognormal, log_mean, log_var};
}

double DistributionSpec::mean() const {
  switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::exponential:
      return 1.0 / a_;
    case Kind::uniform:
      return 0.5 * (a_ + b_);
    case Kind::pareto:
      return a_ > 1.0 ? b_ * a_ / (a_ - 1.0) : kInf;
    case Kind::lognormal:
      return std::exp(a_ + 0.5 * b_);
  }
  return kInf;
}

double DistributionSpec::variance() const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::exponential:
      return 1.0 / (a_ * a_);
    case Kind::uniform:
      return (b_ - a_) * (b_ - a_) / 12.0;
    case Kind::pareto:
      return a_ > 2.0
                 ? b_ * b_ * a_ / ((a_ - 1.0) * (a_ - 1.0) * (a_ - 2.0))
                 : kInf;
    case Kind::lognormal:
      return (std::exp(b_) - 1.0) * std::exp(2.0 * a_ + b_);
  }
  return kInf;
}

double DistributionSpec::tail(double t) const {
  switch (kind_) {
    case Kind::constant:
      return t < a_ ? 1.0 : 0.0;
    case Kind::exponential:
      return t <= 0.0 ? 1.0 : std::exp(-a_ * t);
    case Kind::uniform:
      if (t < a_) return 1.0;
      if (t >= b_) return 0.0;
      return (b_ - t) / (b_ - a_);
    case Kind::pareto:
      return t <= b_ ? 1.0 : std::pow(t / b_, -a_);
    case Kind::lognormal:
      return t <= 0.0 ? 1.0
                      : normal_tail((std::log(t) - a_) / std::sqrt(b_));
  }
  return 0.0;
}

double DistributionSpec::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::exponential:
      return rng.next_exponential(a_);
    case Kind::uniform:
      return a_ + (b_ - a_) * rng.next_unit();
    case Kind::pareto:
      // inverse CDF on U in (0,1]: scale * U^(-1/tail_index)
      return b_ * std::pow(rng.next_unit_positive(), -1.0 / a_);
    case Kind::lognormal:
      return std::exp(a_ + std::sqrt(b_) * rng.next_normal());
  }
  return 0.0;
}

std::string DistributionSpec::kind_name() const {
  switch (kind_) {
    case Kind::constant:
      return "constant";
    case Kind::exponential:
      return "exponential";
    case Kind::uniform:
      return "uniform";
    case Kind::pareto:
      return "pareto";
    case Kind::lognormal:
      return "lognormal";
  }
  return "?";
}

}  // namespace lsconv
