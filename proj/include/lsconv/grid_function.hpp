// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_GRID_FUNCTION_HPP
#define LSCONV_GRID_FUNCTION_HPP

#include <cstddef>
#include <vector>

namespace lsconv {

// Function sampled on the uniform grid {0, dt, 2*dt, ...}. values[0] is the
// value at t = 0. monotone marks functions known to be nondecreasing, which
// is what qualifies them as integrators in stieltjes_convolve.
struct GridFunction {
  double dt = 0.0;
  std::vector<double> values;
  bool monotone = false;

  std::size_t size() const { return values.size(); }
  double t_max() const {
    return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1);
  }
};

// Validates dt > 0, nonempty values, and the monotone flag if set.
void validate(const GridFunction& f);

// Builds a GridFunction and detects monotonicity by scanning.
GridFunction make_grid(double dt, std::vector<double> values);

// Grid Lebesgue-Stieltjes convolution int_{[0,u]} f(u-y) dg(y) with the
// left-point rule: result[n] = f[n]*g[0] + sum_{k<n} f[n-k]*(g[k+1]-g[k]).
// g carries an atom of mass g.values[0] at zero. Requires matching grids
// (GridMismatch otherwise) and monotone g. Error is O(dt).
GridFunction stieltjes_convolve(const GridFunction& f, const GridFunction& g);

// C * t^alpha with C > 0, alpha > 0. Closed under convolution.
struct PowerFunction {
  double coefficient = 1.0;
  double exponent = 1.0;

  double operator()(double t) const;
};

// Exact Lebesgue-Stieltjes convolution of two power functions via the Beta
// integral: coefficient C_p C_q Gamma(1+a_p) Gamma(1+a_q) / Gamma(1+a_p+a_q),
// exponent a_p + a_q.
PowerFunction power_convolve(const PowerFunction& p, const PowerFunction& q);

// j-fold power: coefficient C^j Gamma(1+a)^j / Gamma(1+a*j), exponent a*j.
PowerFunction power_jfold(const PowerFunction& p, std::size_t j);

// Samples p on {0, dt, ..., n_cells*dt}.
GridFunction sample_power(const PowerFunction& p, double dt,
                          std::size_t n_cells);

// Gamma function used by the closed forms above; relative error well under
// 1e-12 on (0, 50] (pinned by tests).
double gamma_fn(double x);

}  // namespace lsconv

#endif  // LSCONV_GRID_FUNCTION_HPP
