// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/stats.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "lsconv/errors.hpp"
#include "lsconv/rng.hpp"

using namespace lsconv;

namespace {

std::vector<double> uniforms(std::uint64_t seed, std::size_t n) {
  RngStream rng(substream(seed, 99, 0, 0, 0));
  std::vector<double> v(n);
  for (auto& x : v) x = rng.next_unit();
  return v;
}

std::vector<double> normals(std::uint64_t seed, std::size_t n, double shift) {
  RngStream rng(substream(seed, 98, 0, 0, 0));
  std::vector<double> v(n);
  for (auto& x : v) x = rng.next_normal() + shift;
  return v;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("kolmogorov tail spot values") {
  // frozen from the defining series evaluated in extended precision
  CHECK(kolmogorov_cdf_complement(0.5) ==
        doctest::Approx(0.9639452436648751).epsilon(1e-12));
  CHECK(kolmogorov_cdf_complement(1.0) ==
        doctest::Approx(0.26999967167735456).epsilon(1e-12));
  CHECK(kolmogorov_cdf_complement(1.3581) ==
        doctest::Approx(0.0499996304316674).epsilon(1e-10));
  CHECK(kolmogorov_cdf_complement(2.0) ==
        doctest::Approx(0.0006709252557796953).epsilon(1e-10));
  CHECK(kolmogorov_cdf_complement(0.0) == 1.0);
  CHECK(kolmogorov_cdf_complement(-1.0) == 1.0);
  CHECK(kolmogorov_cdf_complement(10.0) < 1e-80);
}

TEST_CASE("kolmogorov tail series regimes agree") {
  // both forms are accurate near the switch point; compare directly
  auto direct = [](double z) {
    double q = 0.0, sign = 1.0;
    for (int k = 1; k <= 300; ++k) {
      q += sign * std::exp(-2.0 * k * k * z * z);
      sign = -sign;
    }
    return 2.0 * q;
  };
  for (double z = 0.55; z <= 2.0; z += 0.05)
    CHECK(kolmogorov_cdf_complement(z) ==
          doctest::Approx(direct(z)).epsilon(1e-11));
  // monotone decreasing
  double prev = 1.0;
  for (double z = 0.05; z <= 3.0; z += 0.05) {
    double q = kolmogorov_cdf_complement(z);
    CHECK(q <= prev + 1e-15);
    CHECK(q >= 0.0);
    prev = q;
  }
}

TEST_CASE("normal cdf spot values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-14));
  CHECK(normal_cdf(-1.0) ==
        doctest::Approx(0.15865525393145707).epsilon(1e-14));
  CHECK(normal_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("one-sample ks on its null is calibrated") {
  auto identity_cdf = [](double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
  };
  const double alpha = 0.05;
  int rejections = 0;
  const int trials = 200;
  for (int s = 0; s < trials; ++s) {
    auto r = ks_one_sample(uniforms(static_cast<std::uint64_t>(s), 500),
                           identity_cdf);
    CHECK(r.statistic >= 0.0);
    CHECK(r.statistic <= 1.0);
    if (r.p_value < alpha) ++rejections;
  }
  // nominal rate 5% of 200 = 10; accept [alpha/2, 2*alpha] as calibrated
  CHECK(rejections >= 5);
  CHECK(rejections <= 20);
}

TEST_CASE("one-sample ks rejects a shifted alternative") {
  auto std_normal_cdf = [](double x) { return normal_cdf(x); };
  auto r = ks_one_sample(normals(7, 500, 0.5), std_normal_cdf);
  CHECK(r.p_value < 1e-6);
  auto ok = ks_one_sample(normals(7, 500, 0.0), std_normal_cdf);
  CHECK(ok.p_value > 0.001);
}

TEST_CASE("two-sample ks basics") {
  auto a = normals(1, 400, 0.0);
  auto b = normals(2, 600, 0.0);
  auto same = ks_two_sample(a, b);
  CHECK(same.p_value > 0.01);
  CHECK(same.n_effective == 240);  // 400*600/1000

  auto c = normals(3, 400, 0.8);
  auto diff = ks_two_sample(a, c);
  CHECK(diff.p_value < 1e-6);

  auto self = ks_two_sample(a, a);
  CHECK(self.statistic == 0.0);
  CHECK(self.p_value == 1.0);
}

TEST_CASE("two-sample ks handles heavy ties") {
  // three-point lattice with identical weights on both sides
  RngStream rng(substream(11, 97, 0, 0, 0));
  std::vector<double> a(900), b(900);
  for (auto& x : a) x = std::floor(rng.next_unit() * 3.0);
  for (auto& x : b) x = std::floor(rng.next_unit() * 3.0);
  auto r = ks_two_sample(a, b);
  CHECK(r.statistic < 0.1);
  CHECK(r.p_value > 0.001);

  // all mass on one point vs spread mass must still be detected
  std::vector<double> c(900, 1.0);
  auto rr = ks_two_sample(a, c);
  CHECK(rr.p_value < 1e-6);
}

TEST_CASE("sample-size guard") {
  std::vector<double> nine(9, 0.5);
  std::vector<double> many = uniforms(5, 100);
  auto id = [](double x) { return x; };
  CHECK_THROWS_AS(ks_one_sample(nine, id), TooFewSamples);
  CHECK_THROWS_AS(ks_two_sample(nine, many), TooFewSamples);
  CHECK_THROWS_AS(ks_two_sample(many, nine), TooFewSamples);
}

}  // TEST_SUITE
