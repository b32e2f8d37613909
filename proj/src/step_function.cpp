// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsconv/errors.hpp"

namespace lsconv {

namespace {

struct QAtom {
  long long key;
  double position;
  double weight;
};

long long quantize(double position, double quantum) {
  return std::llround(position / quantum);
}

// Sorts a pair batch by quantized key and folds it into the accumulator,
// which is kept sorted and unique by key. Weight order within a key group is
// the generation order, so results are reproducible for identical inputs.
void fold_batch(std::vector<QAtom>& acc, std::vector<QAtom>& batch,
                std::size_t atom_cap) {
  if (batch.empty()) return;
  std::stable_sort(batch.begin(), batch.end(),
                   [](const QAtom& a, const QAtom& b) { return a.key < b.key; });

  std::vector<QAtom> merged;
  merged.reserve(acc.size() + batch.size());
  std::size_t ia = 0, ib = 0;
  auto push = [&](const QAtom& q) {
    if (!merged.empty() && merged.back().key == q.key) {
      merged.back().weight += q.weight;
      if (q.position < merged.back().position)
        merged.back().position = q.position;
    } else {
      merged.push_back(q);
    }
  };
  while (ia < acc.size() || ib < batch.size()) {
    if (ib == batch.size() ||
        (ia < acc.size() && acc[ia].key <= batch[ib].key)) {
      push(acc[ia++]);
    } else {
      push(batch[ib++]);
    }
  }
  if (merged.size() > atom_cap)
    throw AtomCapExceeded("convolve: merged result would hold " +
                          std::to_string(merged.size()) + " atoms (cap " +
                          std::to_string(atom_cap) + ")");
  acc = std::move(merged);
  batch.clear();
}

}  // namespace

StepFunction::StepFunction(std::vector<Atom> atoms,
                           std::optional<double> horizon, double quantum)
    : horizon_(horizon), quantum_(quantum) {
  if (!(quantum > 0.0)) throw Error("StepFunction: quantum must be positive");
  if (horizon_ && !(*horizon_ >= 0.0))
    throw Error("StepFunction: horizon must be >= 0");
  for (const Atom& a : atoms) {
    if (!(a.position >= 0.0) || !std::isfinite(a.position))
      throw Error("StepFunction: positions must be finite and >= 0");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw Error("StepFunction: weights must be finite and > 0");
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) {
                     return a.position < b.position;
                   });
  positions_.reserve(atoms.size());
  weights_.reserve(atoms.size());
  long long prev_key = 0;
  bool have_prev = false;
  for (const Atom& a : atoms) {
    if (horizon_ && a.position > *horizon_) continue;
    long long key = quantize(a.position, quantum_);
    if (have_prev && key == prev_key) {
      weights_.back() += a.weight;  // representative stays the smallest
    } else {
      positions_.push_back(a.position);
      weights_.push_back(a.weight);
      prev_key = key;
      have_prev = true;
    }
  }
  rebuild_cumulative();
}

StepFunction::StepFunction(merged_tag, std::vector<double> positions,
                           std::vector<double> weights,
                           std::optional<double> horizon, double quantum)
    : positions_(std::move(positions)),
      weights_(std::move(weights)),
      horizon_(horizon),
      quantum_(quantum) {
  rebuild_cumulative();
}

void StepFunction::rebuild_cumulative() {
  cumulative_.assign(positions_.size() + 1, 0.0);
  for (std::size_t i = 0; i < weights_.size(); ++i)
    cumulative_[i + 1] = cumulative_[i] + weights_[i];
}

double StepFunction::value(double t) const {
  auto it = std::upper_bound(positions_.begin(), positions_.end(), t);
  return cumulative_[static_cast<std::size_t>(it - positions_.begin())];
}

double StepFunction::total_mass() const { return cumulative_.back(); }

std::vector<Atom> StepFunction::atoms() const {
  std::vector<Atom> out(positions_.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {positions_[i], weights_[i]};
  return out;
}

StepFunction StepFunction::delta_zero() { return StepFunction({{0.0, 1.0}}); }

StepFunction convolve(const StepFunction& f, const StepFunction& g,
                      double horizon, std::size_t atom_cap) {
  if (!(horizon >= 0.0)) throw Error("convolve: horizon must be >= 0");
  double quantum = std::max(f.quantum(), g.quantum());
  if (f.atom_count() == 0 || g.atom_count() == 0)
    return StepFunction({}, horizon, quantum);

  // Pairs are generated f-major and merged in bounded batches, keeping
  // memory proportional to the merged result rather than the pair count.
  constexpr std::size_t kBatch = std::size_t{1} << 21;
  std::vector<QAtom> acc;
  std::vector<QAtom> batch;
  batch.reserve(std::min(kBatch, f.atom_count() * g.atom_count()));

  const auto& fp = f.positions();
  const auto& fw = f.weights();
  const auto& gp = g.positions();
  const auto& gw = g.weights();
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (fp[i] > horizon) break;
    for (std::size_t k = 0; k < gp.size(); ++k) {
      double p = fp[i] + gp[k];
      if (p > horizon) break;
      batch.push_back({quantize(p, quantum), p, fw[i] * gw[k]});
      if (batch.size() >= kBatch) fold_batch(acc, batch, atom_cap);
    }
  }
  fold_batch(acc, batch, atom_cap);

  std::vector<double> positions(acc.size());
  std::vector<double> weights(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    positions[i] = acc[i].position;
    weights[i] = acc[i].weight;
  }
  return StepFunction(StepFunction::merged_tag{}, std::move(positions),
                      std::move(weights), horizon, quantum);
}

StepFunction jfold(const StepFunction& f, std::size_t j, double horizon,
                   std::size_t atom_cap) {
  if (j == 0) throw Error("jfold: j must be >= 1");
  StepFunction result = truncate(f, horizon);
  for (std::size_t fold = 2; fold <= j; ++fold)
    result = convolve(result, f, horizon, atom_cap);
  return result;
}

StepFunction truncate(const StepFunction& f, double horizon) {
  if (!(horizon >= 0.0)) throw Error("truncate: horizon must be >= 0");
  auto it = std::upper_bound(f.positions().begin(), f.positions().end(),
                             horizon);
  std::size_t n = static_cast<std::size_t>(it - f.positions().begin());
  std::vector<double> positions(f.positions().begin(),
                                f.positions().begin() + n);
  std::vector<double> weights(f.weights().begin(), f.weights().begin() + n);
  return StepFunction(StepFunction::merged_tag{}, std::move(positions),
                      std::move(weights), horizon, f.quantum());
}

double laplace_stieltjes(const StepFunction& f, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.atom_count(); ++i)
    sum += f.weights()[i] * std::exp(-s * f.positions()[i]);
  return sum;
}

}  // namespace lsconv
