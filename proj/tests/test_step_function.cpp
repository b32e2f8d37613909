// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
//
// The convolution oracle here is deliberately dumb: enumerate every pair,
// quantize through a std::map, and compare atom-for-atom with the library
// result. Expected counts for the lattice cases were frozen from the pair/
// triple enumeration below before the library code was written.
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "lsconv/errors.hpp"
#include "lsconv/rng.hpp"
#include "lsconv/step_function.hpp"

using lsconv::Atom;
using lsconv::StepFunction;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent O(n*m) reference: map-based quantum merge, min position kept.
std::vector<Atom> brute_convolve(const StepFunction& f, const StepFunction& g,
                                 double horizon, double quantum) {
  std::map<long long, Atom> acc;
  for (std::size_t i = 0; i < f.atom_count(); ++i) {
    for (std::size_t k = 0; k < g.atom_count(); ++k) {
      double p = f.positions()[i] + g.positions()[k];
      if (p > horizon) continue;
      double w = f.weights()[i] * g.weights()[k];
      long long key = std::llround(p / quantum);
      auto [it, fresh] = acc.try_emplace(key, Atom{p, w});
      if (!fresh) {
        it->second.weight += w;
        if (p < it->second.position) it->second.position = p;
      }
    }
  }
  std::vector<Atom> out;
  out.reserve(acc.size());
  for (const auto& [key, atom] : acc) out.push_back(atom);
  return out;
}

double brute_lst(const StepFunction& f, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.atom_count(); ++i)
    sum += f.weights()[i] * std::exp(-s * f.positions()[i]);
  return sum;
}

StepFunction random_step(lsconv::RngStream& rng, std::size_t max_atoms) {
  std::size_t n = 1 + rng.next_u64() % max_atoms;
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    atoms.push_back({2.0 * rng.next_unit(), rng.next_unit_positive()});
  return StepFunction(std::move(atoms));
}

StepFunction unit_lattice() {
  // Counting function of {0,1,2,3}: floor(t)+1 on [0,3].
  return StepFunction({{0, 1}, {1, 1}, {2, 1}, {3, 1}});
}

bool atoms_close(const StepFunction& a, const std::vector<Atom>& b,
                 double wtol) {
  if (a.atom_count() != b.size()) return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (a.positions()[i] != b[i].position) return false;
    double diff = std::fabs(a.weights()[i] - b[i].weight);
    if (diff > wtol * std::max(1.0, std::fabs(b[i].weight))) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("stepfun") {

TEST_CASE("evaluate basics") {
  StepFunction empty;
  CHECK(empty.value(0.0) == 0.0);
  CHECK(empty.value(100.0) == 0.0);
  CHECK(empty.total_mass() == 0.0);

  StepFunction d0({{0, 1}});
  CHECK(d0.value(0.0) == 1.0);
  CHECK(d0.value(-1e-9) == 0.0);

  StepFunction f({{1, 2}, {3, 5}});
  CHECK(f.value(0.5) == 0.0);
  CHECK(f.value(1.0) == 2.0);    // right-continuous at the jump
  CHECK(f.value(2.999) == 2.0);
  CHECK(f.value(3.0) == 7.0);
  CHECK(f.value(50.0) == 7.0);
  CHECK(f.total_mass() == 7.0);
}

TEST_CASE("construction sorts, merges and validates") {
  StepFunction f({{3, 5}, {1, 2}});
  CHECK(f.positions()[0] == 1.0);
  CHECK(f.positions()[1] == 3.0);

  // Coincident-to-quantum positions merge; distinct ones stay apart.
  StepFunction merged({{1.0, 1.0}, {1.0 + 2e-13, 2.0}});
  CHECK(merged.atom_count() == 1);
  CHECK(merged.positions()[0] == 1.0);
  CHECK(merged.weights()[0] == 3.0);
  StepFunction separate({{1.0, 1.0}, {1.0 + 5e-12, 2.0}});
  CHECK(separate.atom_count() == 2);

  CHECK_THROWS_AS(StepFunction({{-1.0, 1.0}}), lsconv::Error);
  CHECK_THROWS_AS(StepFunction({{1.0, 0.0}}), lsconv::Error);
  CHECK_THROWS_AS(StepFunction({{1.0, -2.0}}), lsconv::Error);
  CHECK_THROWS_AS(StepFunction({{std::nan(""), 1.0}}), lsconv::Error);

  // Atoms above the horizon are dropped at construction.
  StepFunction cut({{1, 1}, {5, 1}}, 2.0);
  CHECK(cut.atom_count() == 1);
  CHECK(cut.beyond_horizon(3.0));
  CHECK(!cut.beyond_horizon(2.0));
}

TEST_CASE("convolve identity and single atoms") {
  StepFunction g({{0.5, 2}, {2, 1}});
  StepFunction conv = convolve(StepFunction::delta_zero(), g, 10.0);
  REQUIRE(conv.atom_count() == 2);
  CHECK(conv.positions()[0] == 0.5);
  CHECK(conv.positions()[1] == 2.0);
  CHECK(conv.weights()[0] == 2.0);
  CHECK(conv.weights()[1] == 1.0);

  StepFunction a({{1, 1}});
  StepFunction b({{2, 3}});
  StepFunction ab = convolve(a, b, 10.0);
  REQUIRE(ab.atom_count() == 1);
  CHECK(ab.positions()[0] == 3.0);
  CHECK(ab.weights()[0] == 3.0);

  CHECK(convolve(a, b, 2.5).atom_count() == 0);

  // Empty function is the zero of convolution.
  CHECK(convolve(StepFunction(), g, 10.0).atom_count() == 0);
  CHECK(convolve(g, StepFunction(), 10.0).atom_count() == 0);
}

TEST_CASE("lattice pair and triple counts") {
  // Pairs (i,k) in {0..3}^2 with i+k <= 3: frozen count 10.
  // Triples in {0..3}^3 with sum <= 3: frozen count C(6,3) = 20.
  StepFunction f = unit_lattice();
  CHECK(convolve(f, f, 3.0).value(3.0) == 10.0);
  CHECK(jfold(f, 3, 3.0).value(3.0) == 20.0);
}

TEST_CASE("jfold low orders") {
  StepFunction f({{1, 1}, {5, 1}});
  StepFunction f1 = jfold(f, 1, 2.0);
  CHECK(f1.atom_count() == 1);
  CHECK(f1.horizon().has_value());
  CHECK(*f1.horizon() == 2.0);

  StepFunction d5 = jfold(StepFunction::delta_zero(), 5, 1.0);
  REQUIRE(d5.atom_count() == 1);
  CHECK(d5.positions()[0] == 0.0);
  CHECK(d5.weights()[0] == 1.0);

  CHECK_THROWS_AS(jfold(f, 0, 2.0), lsconv::Error);
}

TEST_CASE("laplace transform spot values") {
  CHECK(laplace_stieltjes(StepFunction::delta_zero(), 0.7) == 1.0);
  StepFunction e1({{1, 1}});
  CHECK(laplace_stieltjes(e1, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  StepFunction f({{0.5, 2}, {2, 1}, {7, 0.25}});
  CHECK(laplace_stieltjes(f, 0.0) == f.total_mass());
}

TEST_CASE("brute-force equivalence on random functions") {
  lsconv::RngStream rng(lsconv::mix64(7001));
  for (int rep = 0; rep < 50; ++rep) {
    StepFunction f = random_step(rng, 50);
    StepFunction g = random_step(rng, 50);
    double horizon = 4.0 * rng.next_unit();
    StepFunction got = convolve(f, g, horizon);
    std::vector<Atom> want = brute_convolve(f, g, horizon, got.quantum());
    CHECK(atoms_close(got, want, 1e-12));
  }
}

TEST_CASE("LST homomorphism") {
  lsconv::RngStream rng(lsconv::mix64(7002));
  for (int rep = 0; rep < 40; ++rep) {
    StepFunction f = random_step(rng, 20);
    StepFunction g = random_step(rng, 20);
    StepFunction fg = convolve(f, g, kInf);
    for (double s : {0.3, 1.0, 3.0}) {
      double lhs = laplace_stieltjes(fg, s);
      double rhs = laplace_stieltjes(f, s) * laplace_stieltjes(g, s);
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
      // and the transform itself against the plain double sum
      CHECK(laplace_stieltjes(f, s) ==
            doctest::Approx(brute_lst(f, s)).epsilon(1e-13));
    }
  }
}

TEST_CASE("commutativity and associativity") {
  lsconv::RngStream rng(lsconv::mix64(7003));
  for (int rep = 0; rep < 25; ++rep) {
    StepFunction f = random_step(rng, 30);
    StepFunction g = random_step(rng, 30);
    StepFunction fg = convolve(f, g, 5.0);
    StepFunction gf = convolve(g, f, 5.0);
    REQUIRE(fg.atom_count() == gf.atom_count());
    for (std::size_t i = 0; i < fg.atom_count(); ++i) {
      CHECK(fg.positions()[i] == gf.positions()[i]);
      CHECK(fg.weights()[i] ==
            doctest::Approx(gf.weights()[i]).epsilon(1e-13));
    }
  }

  // Lattice case exercises merge groups with several members.
  StepFunction f = unit_lattice();
  StepFunction g({{0, 0.5}, {1, 0.25}, {2, 2.0}});
  StepFunction h({{0.5, 1.0}, {1, 3.0}});
  StepFunction left = convolve(convolve(f, g, 6.0), h, 6.0);
  StepFunction right = convolve(f, convolve(g, h, 6.0), 6.0);
  REQUIRE(left.atom_count() == right.atom_count());
  for (double s : {0.0, 0.5, 2.0}) {
    CHECK(laplace_stieltjes(left, s) ==
          doctest::Approx(laplace_stieltjes(right, s)).epsilon(1e-12));
  }
}

TEST_CASE("mass multiplicativity") {
  lsconv::RngStream rng(lsconv::mix64(7004));
  for (int rep = 0; rep < 25; ++rep) {
    StepFunction f = random_step(rng, 40);
    StepFunction g = random_step(rng, 40);
    StepFunction fg = convolve(f, g, kInf);
    CHECK(fg.total_mass() ==
          doctest::Approx(f.total_mass() * g.total_mass()).epsilon(1e-12));
  }
}

TEST_CASE("atom cap") {
  lsconv::RngStream rng(lsconv::mix64(7005));
  StepFunction f = random_step(rng, 100);
  while (f.atom_count() < 60) f = random_step(rng, 100);
  CHECK_THROWS_AS(convolve(f, f, kInf, 50), lsconv::AtomCapExceeded);
  // Horizon truncation can keep the result under the cap.
  StepFunction small = convolve(f, f, 0.05, 50);
  CHECK(small.atom_count() <= 50);
}

TEST_CASE("monotonicity of evaluation") {
  lsconv::RngStream rng(lsconv::mix64(7006));
  StepFunction f = random_step(rng, 50);
  double prev = -1.0;
  for (double t = -0.5; t < 5.0; t += 0.03) {
    double v = f.value(t);
    CHECK(v >= prev);
    prev = v;
  }
}

}  // TEST_SUITE
