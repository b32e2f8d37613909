// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lsconv/errors.hpp"

namespace lsconv {

double kolmogorov_cdf_complement(double z) {
  if (z <= 0.0) return 1.0;
  if (z < 1.18) {
    // CDF as the theta series; one minus it is the tail
    double x = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * z * z));
    double cdf = std::sqrt(2.0 * std::numbers::pi) / z *
                 (x + std::pow(x, 9.0) + std::pow(x, 25.0) + std::pow(x, 49.0));
    return 1.0 - cdf;
  }
  double q = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * z * z);
    q += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return 2.0 * q;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {
KsResult finish(double d, double n_eff_real, std::size_t n_eff) {
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_cdf_complement(std::sqrt(n_eff_real) * d);
  r.n_effective = n_eff;
  return r;
}
}  // namespace

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
  if (samples.size() < 10)
    throw TooFewSamples("ks_one_sample: need at least 10 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    double lo = f - static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n - f;
    d = std::max(d, std::max(lo, hi));
  }
  return finish(d, n, samples.size());
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 10 || b.size() < 10)
    throw TooFewSamples("ks_two_sample: need at least 10 samples per side");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    double diff = std::abs(static_cast<double>(i) / na -
                           static_cast<double>(j) / nb);
    d = std::max(d, diff);
  }
  double n_eff = na * nb / (na + nb);
  return finish(d, n_eff, static_cast<std::size_t>(n_eff));
}

}  // namespace lsconv
