// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/limit_paths.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lsconv/errors.hpp"
#include "lsconv/rng.hpp"
#include "lsconv/stats.hpp"

using namespace lsconv;

namespace {

RngStream path_stream(std::uint64_t seed, std::uint64_t replica) {
  return substream(seed, kDomainLimit, replica, 0, 0);
}

// CDF of 1/(2 Z^2) for standard normal Z; equals the beta = 1/2 stable law
// with Laplace transform exp(-sqrt(s)).
double levy_half_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::erfc(1.0 / (2.0 * std::sqrt(x)));
}

}  // namespace

TEST_SUITE("limits") {

TEST_CASE("brownian grid shape and determinism") {
  RngStream a = path_stream(1, 0);
  GridFunction w = brownian_grid(0.01, 1.0, a);
  CHECK(w.values.size() == 101);
  CHECK(w.values[0] == 0.0);
  CHECK(w.dt == 0.01);
  CHECK(!w.monotone);

  RngStream b = path_stream(1, 0);
  GridFunction w2 = brownian_grid(0.01, 1.0, b);
  CHECK(w.values == w2.values);

  RngStream c = path_stream(1, 1);
  GridFunction w3 = brownian_grid(0.01, 1.0, c);
  CHECK(w.values != w3.values);
}

TEST_CASE("brownian endpoint is standard normal") {
  const std::size_t m = 3000;
  std::vector<double> endpoints(m);
  for (std::size_t r = 0; r < m; ++r) {
    RngStream rng = path_stream(7, r);
    endpoints[r] = brownian_grid(0.01, 1.0, rng).values.back();
  }
  auto ks = ks_one_sample(endpoints, [](double x) { return normal_cdf(x); });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("fractional integral: zero order is the identity") {
  RngStream rng = path_stream(2, 0);
  GridFunction w = brownian_grid(0.02, 1.0, rng);
  GridFunction same = riemann_liouville(w, 0.0);
  CHECK(same.values == w.values);
}

TEST_CASE("fractional integral endpoint matches its exact gaussian law") {
  // The discrete sum of kernel values against independent N(0, dt)
  // increments is Gaussian with variance dt^(2q+1) * sum_{m=1..n} m^(2q).
  const double dt = 0.02;
  const std::size_t n = 50;
  for (double q : {0.5, 1.0}) {
    double var = 0.0;
    for (std::size_t mm = 1; mm <= n; ++mm)
      var += std::pow(static_cast<double>(mm), 2.0 * q);
    var *= std::pow(dt, 2.0 * q + 1.0);
    double sd = std::sqrt(var);

    const std::size_t m = 2000;
    std::vector<double> endpoints(m);
    for (std::size_t r = 0; r < m; ++r) {
      RngStream rng = path_stream(11 + static_cast<std::uint64_t>(10.0 * q), r);
      GridFunction w = brownian_grid(dt, 1.0, rng);
      endpoints[r] = riemann_liouville(w, q).values.back();
    }
    auto ks = ks_one_sample(
        endpoints, [sd](double x) { return normal_cdf(x / sd); });
    CHECK(ks.p_value > 0.001);
  }
}

TEST_CASE("hierarchy order one is the identity") {
  RngStream rng = path_stream(3, 0);
  GridFunction w = brownian_grid(0.02, 1.0, rng);
  GridFunction same = w_j_from_path(w, 0.7, 1);
  CHECK(same.values == w.values);
}

TEST_CASE("hierarchy matches the fractional integral after rearrangement") {
  // summation by parts maps j * sum w[i-k] d(t^p) onto
  // j * sum (t_i - t_k)^p dW exactly, for any order and exponent
  RngStream rng = path_stream(4, 0);
  GridFunction w = brownian_grid(0.01, 2.0, rng);
  double sup_w = 0.0;
  for (double v : w.values) sup_w = std::max(sup_w, std::abs(v));

  for (std::size_t j : {2, 3}) {
    for (double alpha : {0.5, 1.0}) {
      GridFunction lhs = w_j_from_path(w, alpha, j);
      GridFunction rl =
          riemann_liouville(w, alpha * static_cast<double>(j - 1));
      REQUIRE(lhs.values.size() == rl.values.size());
      double sup_diff = 0.0;
      for (std::size_t i = 0; i < lhs.values.size(); ++i)
        sup_diff = std::max(
            sup_diff,
            std::abs(lhs.values[i] - static_cast<double>(j) * rl.values[i]));
      CHECK(sup_diff <= 1e-11 * std::max(1.0, sup_w));
    }
  }
}

TEST_CASE("path argument validation") {
  GridFunction empty;
  empty.dt = 0.1;
  CHECK_THROWS_AS(riemann_liouville(empty, 1.0), Error);
  CHECK_THROWS_AS(w_j_from_path(empty, 1.0, 2), Error);

  GridFunction off = make_grid(0.1, {0.5, 1.0});
  CHECK_THROWS_AS(w_j_from_path(off, 1.0, 2), Error);

  GridFunction ok = make_grid(0.1, {0.0, 1.0});
  CHECK_THROWS_AS(w_j_from_path(ok, 1.0, 0), Error);
  CHECK_THROWS_AS(w_j_from_path(ok, 0.0, 2), Error);
  CHECK_THROWS_AS(riemann_liouville(ok, -1.0), Error);

  RngStream rng = path_stream(5, 0);
  CHECK_THROWS_AS(brownian_grid(0.0, 1.0, rng), Error);
  CHECK_THROWS_AS(standard_positive_stable(0.0, rng), Error);
  CHECK_THROWS_AS(standard_positive_stable(1.0, rng), Error);
  CHECK_THROWS_AS(stable_subordinator_increment(0.5, 0.0, rng), Error);
  CHECK_THROWS_AS(inverse_stable_path(1.5, 0.01, 0.1, 1.0, rng), Error);
}

TEST_CASE("stable draw at beta one half follows the inverse chi-square law") {
  const std::size_t n = 2000;
  std::vector<double> draws(n);
  RngStream rng = path_stream(6, 0);
  for (auto& d : draws) {
    d = standard_positive_stable(0.5, rng);
    CHECK(d > 0.0);
  }
  auto ks = ks_one_sample(draws, levy_half_cdf);
  CHECK(ks.p_value > 0.001);

  // and against direct draws of 1/(2 Z^2)
  std::vector<double> reference(n);
  RngStream rng2 = path_stream(6, 1);
  for (auto& d : reference) {
    double z = rng2.next_normal();
    d = 1.0 / (2.0 * z * z);
  }
  auto ks2 = ks_two_sample(draws, reference);
  CHECK(ks2.p_value > 0.001);
}

TEST_CASE("stable draws keep their defining laplace transform") {
  // E[exp(-S)] = exp(-1) for every order
  const std::size_t n = 40000;
  for (double beta : {0.3, 0.5, 0.7}) {
    RngStream rng = path_stream(8 + static_cast<std::uint64_t>(10.0 * beta), 0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = std::exp(-standard_positive_stable(beta, rng));
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - std::exp(-1.0)) < 5.0 * se);
  }
}

TEST_CASE("subordinator path accumulates the right transform") {
  // independent increments add their exponents:
  // E[exp(-S(1))] = exp(-Gamma(1/2)) at beta = 1/2
  const std::size_t m = 4000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    RngStream rng = path_stream(9, r);
    GridFunction s = simulate_stable_subordinator(0.5, 0.01, 1.0, rng);
    CHECK(s.values.size() == 101);
    CHECK(s.monotone);
    double v = std::exp(-s.values.back());
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / m;
  double se = std::sqrt((sumsq / m - mean * mean) / m);
  double target = std::exp(-std::sqrt(std::numbers::pi));
  CHECK(std::abs(mean - target) < 5.0 * se);
}

TEST_CASE("subordinator increments are monotone draws") {
  RngStream rng = path_stream(10, 0);
  GridFunction s = simulate_stable_subordinator(0.5, 0.05, 2.0, rng);
  for (std::size_t i = 1; i < s.values.size(); ++i)
    CHECK(s.values[i] > s.values[i - 1]);
}

TEST_CASE("inverse path mean at level one") {
  // E of the first-passage time at level u is
  // u^beta / (Gamma(1-beta) Gamma(1+beta)); at beta = 1/2, u = 1 this is
  // 2/pi. The grid estimate overshoots by at most one dt_v cell.
  const std::size_t m = 600;
  const double dt_v = 1e-3;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    RngStream rng = path_stream(12, r);
    GridFunction inv = inverse_stable_path(0.5, dt_v, 0.25, 1.0, rng);
    CHECK(inv.values.size() == 5);
    CHECK(inv.monotone);
    CHECK(inv.values[0] <= dt_v + 1e-15);
    for (std::size_t i = 1; i < inv.values.size(); ++i)
      CHECK(inv.values[i] >= inv.values[i - 1]);
    double v = inv.values.back();
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / m;
  double se = std::sqrt((sumsq / m - mean * mean) / m);
  double target = 2.0 / std::numbers::pi;
  CHECK(std::abs(mean - target) < 5.0 * se + dt_v);
}

TEST_CASE("inverse path marginal matches the closed-form transform") {
  // first passage at level u has the law of (u / S)^beta / Gamma(1-beta)
  // for a standard stable draw S
  const double beta = 0.5;
  const double gamma_term = std::tgamma(1.0 - beta);
  const std::size_t m = 500;
  std::vector<double> grid_vals(m), transformed(m);
  for (std::size_t r = 0; r < m; ++r) {
    RngStream rng = path_stream(13, r);
    grid_vals[r] = inverse_stable_path(beta, 1e-3, 0.5, 1.0, rng).values.back();
    RngStream rng2 = path_stream(14, r);
    transformed[r] =
        std::pow(1.0 / standard_positive_stable(beta, rng2), beta) /
        gamma_term;
  }
  auto ks = ks_two_sample(grid_vals, transformed);
  CHECK(ks.p_value > 0.001);
}

}  // TEST_SUITE
