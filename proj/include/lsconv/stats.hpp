// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_STATS_HPP
#define LSCONV_STATS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace lsconv {

// P{K > z} for the Kolmogorov statistic's limiting law:
// 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 z^2). Small z switches to the
// theta-transformed series for the CDF, which converges where the
// alternating sum loses precision.
double kolmogorov_cdf_complement(double z);

// Standard normal CDF via erfc.
double normal_cdf(double x);

struct KsResult {
  double statistic = 0.0;    // sup-distance D
  double p_value = 1.0;      // asymptotic, Q(sqrt(n_eff) * D)
  std::size_t n_effective = 0;
};

// One-sample Kolmogorov-Smirnov against a continuous CDF. Throws
// TooFewSamples below 10 samples.
KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov; ties are handled by advancing both
// empirical CDFs through an equal value before the distance is read.
// n_effective = na*nb/(na+nb).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace lsconv

#endif  // LSCONV_STATS_HPP
