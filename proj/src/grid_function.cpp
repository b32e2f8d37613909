// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "lsconv/errors.hpp"

namespace lsconv {

void validate(const GridFunction& f) {
  if (!(f.dt > 0.0)) throw Error("GridFunction: dt must be > 0");
  if (f.values.empty()) throw Error("GridFunction: values must be nonempty");
  if (f.monotone) {
    for (std::size_t i = 1; i < f.values.size(); ++i)
      if (f.values[i] < f.values[i - 1])
        throw Error("GridFunction: monotone flag set on decreasing values");
  }
}

GridFunction make_grid(double dt, std::vector<double> values) {
  GridFunction f{dt, std::move(values), false};
  f.monotone = std::is_sorted(f.values.begin(), f.values.end());
  validate(f);
  return f;
}

GridFunction stieltjes_convolve(const GridFunction& f, const GridFunction& g) {
  validate(f);
  validate(g);
  if (f.dt != g.dt)
    throw GridMismatch("stieltjes_convolve: dt mismatch");
  if (f.values.size() != g.values.size())
    throw GridMismatch("stieltjes_convolve: length mismatch");
  if (!g.monotone)
    throw Error("stieltjes_convolve: integrator g must be monotone");

  const std::size_t n = f.values.size();
  std::vector<double> dg(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    dg[k] = g.values[k + 1] - g.values[k];

  std::vector<double> out(n);
  const double g0 = g.values[0];
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += f.values[m - k] * dg[k];
    out[m] = f.values[m] * g0 + acc;
  }

  GridFunction result{f.dt, std::move(out), false};
  result.monotone =
      std::is_sorted(result.values.begin(), result.values.end());
  return result;
}

double PowerFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  return coefficient * std::pow(t, exponent);
}

namespace {

void check_power(const PowerFunction& p) {
  if (!(p.coefficient > 0.0) || !std::isfinite(p.coefficient))
    throw Error("PowerFunction: coefficient must be > 0");
  if (!(p.exponent > 0.0) || !std::isfinite(p.exponent))
    throw Error("PowerFunction: exponent must be > 0");
}

// Gamma(1+a_p) Gamma(1+a_q) / Gamma(1+a_p+a_q), via lgamma when the direct
// product would overflow.
double beta_coefficient(double ap, double aq) {
  if (1.0 + ap + aq < 170.0)
    return gamma_fn(1.0 + ap) * gamma_fn(1.0 + aq) / gamma_fn(1.0 + ap + aq);
  return std::exp(std::lgamma(1.0 + ap) + std::lgamma(1.0 + aq) -
                  std::lgamma(1.0 + ap + aq));
}

}  // namespace

double gamma_fn(double x) { return std::tgamma(x); }

PowerFunction power_convolve(const PowerFunction& p, const PowerFunction& q) {
  check_power(p);
  check_power(q);
  return {p.coefficient * q.coefficient *
              beta_coefficient(p.exponent, q.exponent),
          p.exponent + q.exponent};
}

PowerFunction power_jfold(const PowerFunction& p, std::size_t j) {
  check_power(p);
  if (j == 0) throw Error("power_jfold: j must be >= 1");
  double dj = static_cast<double>(j);
  double coeff;
  if (1.0 + p.exponent * dj < 170.0 && dj * std::log(p.coefficient) < 700.0) {
    coeff = std::pow(p.coefficient, dj) *
            std::pow(gamma_fn(1.0 + p.exponent), dj) /
            gamma_fn(1.0 + p.exponent * dj);
  } else {
    coeff = std::exp(dj * std::log(p.coefficient) +
                     dj * std::lgamma(1.0 + p.exponent) -
                     std::lgamma(1.0 + p.exponent * dj));
  }
  return {coeff, p.exponent * dj};
}

GridFunction sample_power(const PowerFunction& p, double dt,
                          std::size_t n_cells) {
  check_power(p);
  if (!(dt > 0.0)) throw Error("sample_power: dt must be > 0");
  std::vector<double> v(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i)
    v[i] = p(dt * static_cast<double>(i));
  GridFunction f{dt, std::move(v), true};
  return f;
}

}  // namespace lsconv
