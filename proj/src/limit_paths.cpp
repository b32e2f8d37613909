// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/limit_paths.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lsconv/errors.hpp"

namespace lsconv {

namespace {
std::size_t grid_cells(double dt, double t_total, const char* who) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(std::string(who) + ": dt must be finite and > 0");
  if (!(t_total >= 0.0) || !std::isfinite(t_total))
    throw Error(std::string(who) + ": span must be finite and >= 0");
  return static_cast<std::size_t>(std::llround(t_total / dt));
}

void check_beta(double beta, const char* who) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw Error(std::string(who) + ": beta must lie in (0, 1)");
}
}  // namespace

GridFunction brownian_grid(double dt, double t_total, RngStream& rng) {
  std::size_t n = grid_cells(dt, t_total, "brownian_grid");
  std::vector<double> values(n + 1);
  values[0] = 0.0;
  const double scale = std::sqrt(dt);
  for (std::size_t k = 1; k <= n; ++k)
    values[k] = values[k - 1] + scale * rng.next_normal();
  GridFunction g;
  g.dt = dt;
  g.values = std::move(values);
  g.monotone = false;
  return g;
}

GridFunction riemann_liouville(const GridFunction& w, double q) {
  if (w.values.empty()) throw Error("riemann_liouville: empty path");
  if (!(q >= 0.0)) throw Error("riemann_liouville: q must be >= 0");
  if (q == 0.0) return w;

  const std::size_t n = w.values.size();
  // kernel lookup: tpow[m] = (m * dt)^q, m = n - k ranging over 1..n-1
  std::vector<double> tpow(n);
  tpow[0] = 0.0;
  for (std::size_t m = 1; m < n; ++m)
    tpow[m] = std::pow(static_cast<double>(m) * w.dt, q);

  GridFunction out;
  out.dt = w.dt;
  out.monotone = false;
  out.values.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k)
      acc += tpow[i - k] * (w.values[k + 1] - w.values[k]);
    out.values[i] = acc;
  }
  return out;
}

GridFunction w_j_from_path(const GridFunction& w, double alpha,
                           std::size_t j) {
  if (w.values.empty()) throw Error("w_j_from_path: empty path");
  if (w.values[0] != 0.0) throw Error("w_j_from_path: path must start at 0");
  if (!(alpha > 0.0)) throw Error("w_j_from_path: alpha must be > 0");
  if (j == 0) throw Error("w_j_from_path: j must be >= 1");
  if (j == 1) return w;

  const std::size_t n = w.values.size();
  const double p = alpha * static_cast<double>(j - 1);
  // integrator increments d(t^p) over cells of the same grid
  std::vector<double> dpow(n - 1);
  double prev = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double cur = std::pow(static_cast<double>(k + 1) * w.dt, p);
    dpow[k] = cur - prev;
    prev = cur;
  }

  GridFunction out;
  out.dt = w.dt;
  out.monotone = false;
  out.values.assign(n, 0.0);
  const double jf = static_cast<double>(j);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k) acc += w.values[i - k] * dpow[k];
    out.values[i] = jf * acc;
  }
  return out;
}

double standard_positive_stable(double beta, RngStream& rng) {
  check_beta(beta, "standard_positive_stable");
  const double u = rng.next_unit_open() * std::numbers::pi;
  const double e = rng.next_exponential(1.0);
  double value = std::sin(beta * u) * std::pow(std::sin(u), -1.0 / beta) *
                 std::pow(std::sin((1.0 - beta) * u) / e,
                          (1.0 - beta) / beta);
  return value;
}

double stable_subordinator_increment(double beta, double v, RngStream& rng) {
  check_beta(beta, "stable_subordinator_increment");
  if (!(v > 0.0)) throw Error("stable_subordinator_increment: v must be > 0");
  double scale = std::pow(std::tgamma(1.0 - beta) * v, 1.0 / beta);
  return scale * standard_positive_stable(beta, rng);
}

GridFunction simulate_stable_subordinator(double beta, double dt_v,
                                          double v_max, RngStream& rng) {
  check_beta(beta, "simulate_stable_subordinator");
  std::size_t n = grid_cells(dt_v, v_max, "simulate_stable_subordinator");
  std::vector<double> values(n + 1);
  values[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    values[k] =
        values[k - 1] + stable_subordinator_increment(beta, dt_v, rng);
  GridFunction g;
  g.dt = dt_v;
  g.values = std::move(values);
  g.monotone = true;
  return g;
}

GridFunction inverse_stable_path(double beta, double dt_v, double dt,
                                 double t_total, RngStream& rng) {
  check_beta(beta, "inverse_stable_path");
  if (!(dt_v > 0.0)) throw Error("inverse_stable_path: dt_v must be > 0");
  std::size_t n = grid_cells(dt, t_total, "inverse_stable_path");

  // subordinator values S(k * dt_v), grown on demand past each level
  std::vector<double> s{0.0};
  auto extend = [&](double level) {
    while (s.back() <= level)
      s.push_back(s.back() + stable_subordinator_increment(beta, dt_v, rng));
  };

  GridFunction out;
  out.dt = dt;
  out.monotone = true;
  out.values.assign(n + 1, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    double level = static_cast<double>(i) * dt;
    extend(level);
    while (s[k] <= level) ++k;  // first index with S above the level
    out.values[i] = static_cast<double>(k) * dt_v;
  }
  return out;
}

}  // namespace lsconv
