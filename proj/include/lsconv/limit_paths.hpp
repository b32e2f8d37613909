// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_LIMIT_PATHS_HPP
#define LSCONV_LIMIT_PATHS_HPP

#include <vector>

#include "lsconv/grid_function.hpp"
#include "lsconv/rng.hpp"

namespace lsconv {

// Standard Brownian path on {0, dt, ..., ~T}: W[0] = 0 and independent
// N(0, dt) increments. Not monotone.
GridFunction brownian_grid(double dt, double t_total, RngStream& rng);

// Fractional integral of the path: out[n] = sum_{k<n} (t_n - t_k)^q dW[k],
// the left-point rule on the same grid. q = 0 returns the path unchanged
// (the kernel is identically 1, so the sum telescopes exactly).
GridFunction riemann_liouville(const GridFunction& w, double q);

// Hierarchy built on one driving path: out[n] =
// j * sum_{k<n} w[n-k] * (t_{k+1}^p - t_k^p) with p = alpha*(j-1).
// j = 1 returns the path unchanged (the integrator is then a unit jump at
// zero). Requires w[0] = 0.
GridFunction w_j_from_path(const GridFunction& w, double alpha, std::size_t j);

// One-sided stable variable with Laplace transform exp(-s^beta), by the
// trigonometric representation: sin(beta*U) * sin(U)^(-1/beta) *
// (sin((1-beta)*U)/E)^((1-beta)/beta) with U uniform on (0, pi), E unit
// exponential.
double standard_positive_stable(double beta, RngStream& rng);

// Increment of the subordinator with Laplace exponent Gamma(1-beta) s^beta
// over a window of length v: (Gamma(1-beta) * v)^(1/beta) times a standard
// draw.
double stable_subordinator_increment(double beta, double v, RngStream& rng);

// Subordinator path on {0, dt_v, ..., ~v_max}; monotone, starts at 0.
GridFunction simulate_stable_subordinator(double beta, double dt_v,
                                          double v_max, RngStream& rng);

// First-passage inverse of a simulated subordinator, on the time grid
// {0, dt, ..., ~t_total}: out[n] = dt_v * min{k : S(k*dt_v) > t_n}. The
// driving path is extended adaptively until it clears t_total. Monotone;
// out[0] <= dt_v.
GridFunction inverse_stable_path(double beta, double dt_v, double dt,
                                 double t_total, RngStream& rng);

}  // namespace lsconv

#endif  // LSCONV_LIMIT_PATHS_HPP
