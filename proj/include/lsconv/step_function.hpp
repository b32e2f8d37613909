// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_STEP_FUNCTION_HPP
#define LSCONV_STEP_FUNCTION_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace lsconv {

struct Atom {
  double position = 0.0;  // >= 0
  double weight = 0.0;    // > 0 once stored
};

inline constexpr double kDefaultPositionQuantum = 1e-12;
inline constexpr std::size_t kDefaultAtomCap = 10'000'000;

// Nondecreasing cadlag pure-jump function on [0, inf), represented by its
// atoms. f(t) is the total weight at positions <= t; f(t) = 0 for t < 0.
// Atoms are kept sorted; positions closer than one quantum are merged, the
// smallest position in a merge group being the stored representative (this
// keeps exact inputs, e.g. integer lattices, exactly representable).
//
// An optional horizon marks the largest t up to which the function is known
// to be complete; convolutions only produce atoms at positions <= horizon,
// so evaluations beyond it are lower bounds (see beyond_horizon()).
class StepFunction {
 public:
  StepFunction() = default;

  // Sorts, validates (positions >= 0 and finite, weights > 0), quantum-merges
  // and drops atoms above the horizon.
  explicit StepFunction(std::vector<Atom> atoms,
                        std::optional<double> horizon = std::nullopt,
                        double quantum = kDefaultPositionQuantum);

  double value(double t) const;
  double total_mass() const;

  std::size_t atom_count() const { return positions_.size(); }
  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& weights() const { return weights_; }
  std::optional<double> horizon() const { return horizon_; }
  double quantum() const { return quantum_; }

  // True when t lies beyond the stored horizon, i.e. value(t) is only the
  // truncated mass. Evaluation itself is never an error.
  bool beyond_horizon(double t) const {
    return horizon_.has_value() && t > *horizon_;
  }

  std::vector<Atom> atoms() const;

  // Unit atom at zero: the convolution identity.
  static StepFunction delta_zero();

 private:
  friend StepFunction convolve(const StepFunction&, const StepFunction&,
                               double, std::size_t);
  friend StepFunction truncate(const StepFunction&, double);

  struct merged_tag {};
  StepFunction(merged_tag, std::vector<double> positions,
               std::vector<double> weights, std::optional<double> horizon,
               double quantum);

  void rebuild_cumulative();

  std::vector<double> positions_;
  std::vector<double> weights_;
  std::vector<double> cumulative_{0.0};  // cumulative_[i] = weights_[0..i-1] sum
  std::optional<double> horizon_;
  double quantum_ = kDefaultPositionQuantum;
};

// Lebesgue-Stieltjes convolution (f*g)(t) = int_{[0,t]} f(t-y) dg(y):
// one atom at x_f + x_g with weight w_f * w_g for every pair of atoms whose
// sum is <= horizon, quantum-merged. Throws AtomCapExceeded if the merged
// result would exceed atom_cap. Convolution with an empty function is empty.
StepFunction convolve(const StepFunction& f, const StepFunction& g,
                      double horizon, std::size_t atom_cap = kDefaultAtomCap);

// j-fold convolution power; j = 1 returns f truncated to the horizon.
StepFunction jfold(const StepFunction& f, std::size_t j, double horizon,
                   std::size_t atom_cap = kDefaultAtomCap);

// Copy of f with atoms above `horizon` dropped and the horizon recorded.
StepFunction truncate(const StepFunction& f, double horizon);

// Laplace-Stieltjes transform sum_i w_i exp(-s x_i).
double laplace_stieltjes(const StepFunction& f, double s);

}  // namespace lsconv

#endif  // LSCONV_STEP_FUNCTION_HPP
