// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Four subcommands over the library:
//
//   convolve    j-fold or pairwise convolution of step-function CSV files
//   simulate    branching-walk replicas, one counting-function CSV each
//   limit-path  limit processes sampled on a uniform grid
//   verify      run a configured experiment and write a report
//
// Exit codes: 0 success (all verdicts pass), 1 verification failure,
// 2 usage or config error, 3 resource cap exceeded. All stochastic output
// is a pure function of the arguments and the seed, for any --threads value.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsconv/errors.hpp"
#include "lsconv/experiment.hpp"
#include "lsconv/grid_function.hpp"
#include "lsconv/io.hpp"
#include "lsconv/limit_paths.hpp"
#include "lsconv/parallel.hpp"
#include "lsconv/rng.hpp"
#include "lsconv/step_function.hpp"
#include "lsconv/walk.hpp"

using namespace lsconv;

namespace {

// LSCONV_ATOM_CAP overrides the built-in default; an explicit --atom-cap or
// config value still wins over the environment.
std::size_t default_atom_cap() {
  const char* env = std::getenv("LSCONV_ATOM_CAP");
  if (env == nullptr || *env == '\0') return kDefaultAtomCap;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0' || v == 0)
    throw InvalidConfig("LSCONV_ATOM_CAP must be a positive integer, got '" +
                        std::string(env) + "'");
  return static_cast<std::size_t>(v);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string replicate_name(std::size_t r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "replicate_%04llu.csv",
                static_cast<unsigned long long>(r));
  return buf;
}

struct ConvolveArgs {
  std::string input, with, out;
  std::size_t fold = 1;
  double horizon = 0.0;
  double quantum = kDefaultPositionQuantum;
  bool quantum_given = false;
  std::size_t atom_cap = kDefaultAtomCap;
};

int run_convolve(const ConvolveArgs& a) {
  StepFunction f = step_function_from_csv(read_text_file(a.input));
  if (a.quantum_given)
    f = StepFunction(f.atoms(), std::nullopt, a.quantum);
  StepFunction result;
  if (!a.with.empty()) {
    StepFunction g = step_function_from_csv(read_text_file(a.with));
    if (a.quantum_given)
      g = StepFunction(g.atoms(), std::nullopt, a.quantum);
    result = convolve(f, g, a.horizon, a.atom_cap);
  } else {
    result = jfold(f, a.fold, a.horizon, a.atom_cap);
  }
  write_text_file(a.out, step_function_csv(result));
  return 0;
}

struct SimulateArgs {
  std::string walk_path, out_dir;
  double horizon = 0.0;
  std::size_t generations = 1;
  bool coupled = false;
  bool decoupled = false;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t atom_cap = kDefaultAtomCap;
  std::size_t point_cap = kDefaultPointCap;
  std::size_t population_cap = kDefaultPopulationCap;
};

int run_simulate(const SimulateArgs& a) {
  if (a.coupled == a.decoupled)
    throw InvalidConfig("pass exactly one of --coupled / --decoupled");
  if (!(a.horizon > 0.0) || !std::isfinite(a.horizon))
    throw InvalidConfig("--horizon must be positive and finite");
  if (a.generations == 0) throw InvalidConfig("--generations must be >= 1");
  if (a.replicas == 0) throw InvalidConfig("--replicas must be >= 1");

  WalkSpec spec = walk_spec_from_json(read_text_file(a.walk_path));
  spec.validate();
  std::string canonical = walk_spec_json(spec);

  std::vector<std::string> csv(a.replicas);
  parallel_for(a.replicas, a.threads, [&](std::size_t r) {
    StepFunction top;
    if (a.coupled) {
      RngStream rng = substream(a.seed, kDomainSimulation, r, 0, 0);
      auto points = sample_prw_points(spec, a.horizon, rng, a.point_cap);
      auto x = counting_step_function(points, a.horizon);
      auto folds = coupled_counts(x, a.generations, a.horizon, a.atom_cap);
      top = std::move(folds.back());
    } else {
      StreamContext ctx{a.seed, kDomainSimulation, r};
      auto gens = decoupled_generations(spec, a.generations, a.horizon, ctx,
                                        a.population_cap);
      top = std::move(gens.back());
    }
    csv[r] = step_function_csv(top);
  });

  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  std::vector<std::string> names(a.replicas);
  for (std::size_t r = 0; r < a.replicas; ++r) {
    names[r] = replicate_name(r);
    write_text_file((fs::path(a.out_dir) / names[r]).string(), csv[r]);
  }

  // Hand-assembled so reruns are byte-identical; no timestamps on purpose.
  std::string m;
  m += "{\n";
  m += "  \"command\": \"simulate\",\n";
  m += std::string("  \"mode\": \"") + (a.coupled ? "coupled" : "decoupled") +
       "\",\n";
  m += "  \"seed\": " + std::to_string(a.seed) + ",\n";
  m += "  \"horizon\": " + format_double(a.horizon) + ",\n";
  m += "  \"generations\": " + std::to_string(a.generations) + ",\n";
  m += "  \"replicas\": " + std::to_string(a.replicas) + ",\n";
  m += "  \"walk\": " + canonical + ",\n";
  m += "  \"walk_hash\": \"" + hex16(fnv1a64(canonical)) + "\",\n";
  m += "  \"caps\": {\n";
  m += "    \"atom_cap\": " + std::to_string(a.atom_cap) + ",\n";
  m += "    \"point_cap\": " + std::to_string(a.point_cap) + ",\n";
  m += "    \"population_cap\": " + std::to_string(a.population_cap) + "\n";
  m += "  },\n";
  m += "  \"files\": [\n";
  for (std::size_t r = 0; r < a.replicas; ++r)
    m += "    \"" + names[r] + (r + 1 < a.replicas ? "\",\n" : "\"\n");
  m += "  ]\n";
  m += "}\n";
  write_text_file((fs::path(a.out_dir) / "manifest.json").string(), m);

  std::cout << "wrote " << a.replicas << " replicate(s) and manifest.json to "
            << a.out_dir << "\n";
  return 0;
}

struct LimitPathArgs {
  std::string kind, out;
  double dt = 0.0;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  double q = 0.0;
  bool q_given = false;
  double alpha = 0.0;
  bool alpha_given = false;
  std::size_t j = 0;
  double beta = 0.0;
  bool beta_given = false;
  double dt_v = 1e-3;
};

int run_limit_path(const LimitPathArgs& a) {
  RngStream rng = substream(a.seed, kDomainLimit, a.replica, 0, 0);
  GridFunction path;
  if (a.kind == "brownian") {
    path = brownian_grid(a.dt, a.t, rng);
  } else if (a.kind == "riemann-liouville") {
    if (!a.q_given)
      throw InvalidConfig("--kind riemann-liouville needs --q");
    path = riemann_liouville(brownian_grid(a.dt, a.t, rng), a.q);
  } else if (a.kind == "wj") {
    if (!a.alpha_given || a.j == 0)
      throw InvalidConfig("--kind wj needs --alpha and --j");
    path = w_j_from_path(brownian_grid(a.dt, a.t, rng), a.alpha, a.j);
  } else if (a.kind == "inverse-stable") {
    if (!a.beta_given)
      throw InvalidConfig("--kind inverse-stable needs --beta");
    path = inverse_stable_path(a.beta, a.dt_v, a.dt, a.t, rng);
  } else {
    throw InvalidConfig("unknown --kind: " + a.kind);
  }
  write_text_file(a.out, grid_function_csv(path));
  return 0;
}

struct VerifyArgs {
  std::string config_path, out;
  unsigned threads = 0;
  bool threads_given = false;
};

int run_verify(const VerifyArgs& a) {
  std::string text = read_text_file(a.config_path);
  ExperimentConfig cfg = experiment_config_from_json(text);

  // The config already parsed, so this re-parse cannot fail; it only tells
  // which optional keys were present.
  auto raw = nlohmann::json::parse(text, nullptr, false);
  if (a.threads_given)
    cfg.threads = a.threads;
  else if (!raw.contains("threads"))
    cfg.threads = 0;  // default: available parallelism
  if (!raw.contains("atom_cap")) cfg.atom_cap = default_atom_cap();

  ExperimentReport report = run_experiment(cfg);

  write_text_file(a.out, report_json(report));
  std::string csv_path = a.out;
  if (csv_path.size() >= 5 &&
      csv_path.compare(csv_path.size() - 5, 5, ".json") == 0)
    csv_path.replace(csv_path.size() - 5, 5, ".csv");
  else
    csv_path += ".csv";
  write_text_file(csv_path, report_csv(report));

  std::size_t passed = 0;
  for (const auto& c : report.cells) passed += c.pass ? 1 : 0;
  std::cout << report.theorem << ": " << passed << "/" << report.cells.size()
            << " cells pass, verdict " << (report.pass ? "pass" : "fail")
            << "\n"
            << "wrote " << a.out << " and " << csv_path << "\n";
  return report.pass ? 0 : 1;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "lsconv: convolution of monotone step functions, branching-walk "
      "simulation, limit-process sampling, and statistical verification"};
  app.require_subcommand(1);
  std::size_t atom_cap_default = default_atom_cap();

  ConvolveArgs conv;
  conv.atom_cap = atom_cap_default;
  auto* c = app.add_subcommand(
      "convolve", "j-fold or pairwise convolution of step-function CSVs");
  c->add_option("--input", conv.input, "input step function CSV")->required();
  auto* with_opt =
      c->add_option("--with", conv.with, "second CSV for a pairwise product");
  auto* fold_opt =
      c->add_option("--fold", conv.fold, "convolution power j >= 1")
          ->check(CLI::PositiveNumber);
  fold_opt->excludes(with_opt);
  with_opt->excludes(fold_opt);
  c->add_option("--horizon", conv.horizon, "truncate results beyond this time")
      ->required()
      ->check(CLI::PositiveNumber);
  c->add_option("--out", conv.out, "output CSV path")->required();
  auto* quantum_opt = c->add_option(
      "--quantum", conv.quantum, "merge atom positions closer than this");
  c->add_option("--atom-cap", conv.atom_cap, "atom count cap");

  SimulateArgs sim;
  sim.atom_cap = atom_cap_default;
  auto* s = app.add_subcommand(
      "simulate", "sample branching-walk replicas, one CSV per replica");
  s->add_option("--walk", sim.walk_path, "walk spec JSON path")->required();
  s->add_option("--horizon", sim.horizon, "simulate on [0, horizon]")
      ->required();
  s->add_option("--generations", sim.generations, "generation depth j >= 1")
      ->required();
  auto* coupled_flag =
      s->add_flag("--coupled", sim.coupled,
                  "one walk per replica, offspring by self-convolution");
  auto* decoupled_flag =
      s->add_flag("--decoupled", sim.decoupled,
                  "independent walk per individual (branching cascade)");
  coupled_flag->excludes(decoupled_flag);
  decoupled_flag->excludes(coupled_flag);
  s->add_option("--replicas", sim.replicas, "number of replicas")->required();
  s->add_option("--seed", sim.seed, "root seed")->required();
  s->add_option("--out", sim.out_dir, "output directory")->required();
  s->add_option("--threads", sim.threads, "worker threads, 0 = all cores");
  s->add_option("--atom-cap", sim.atom_cap, "atom count cap");
  s->add_option("--point-cap", sim.point_cap, "walk point cap");
  s->add_option("--population-cap", sim.population_cap,
                "cascade population cap");

  LimitPathArgs lim;
  auto* l = app.add_subcommand("limit-path",
                               "sample a limit process on a uniform grid");
  l->add_option("--kind", lim.kind, "one of: brownian, riemann-liouville, "
                                    "wj, inverse-stable")
      ->required();
  l->add_option("--dt", lim.dt, "grid spacing")->required();
  l->add_option("--t", lim.t, "path length")->required();
  l->add_option("--seed", lim.seed, "root seed")->required();
  l->add_option("--replica", lim.replica, "replica index within the seed");
  l->add_option("--out", lim.out, "output CSV path")->required();
  auto* q_opt =
      l->add_option("--q", lim.q, "fractional-integration kernel exponent");
  auto* alpha_opt = l->add_option("--alpha", lim.alpha,
                                  "regular-variation index for --kind wj");
  l->add_option("--j", lim.j, "hierarchy level for --kind wj");
  auto* beta_opt = l->add_option("--beta", lim.beta,
                                 "stability index for --kind inverse-stable");
  l->add_option("--dt-v", lim.dt_v,
                "subordinator grid spacing for --kind inverse-stable");

  VerifyArgs ver;
  auto* v = app.add_subcommand(
      "verify", "run a configured experiment and write a report");
  v->add_option("--config", ver.config_path, "experiment config JSON path")
      ->required();
  v->add_option("--out", ver.out, "report JSON path (CSV written next to it)")
      ->required();
  auto* threads_opt =
      v->add_option("--threads", ver.threads, "worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  conv.quantum_given = quantum_opt->count() > 0;
  lim.q_given = q_opt->count() > 0;
  lim.alpha_given = alpha_opt->count() > 0;
  lim.beta_given = beta_opt->count() > 0;
  ver.threads_given = threads_opt->count() > 0;

  if (c->parsed()) return run_convolve(conv);
  if (s->parsed()) return run_simulate(sim);
  if (l->parsed()) return run_limit_path(lim);
  return run_verify(ver);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const AtomCapExceeded& e) {
    std::cerr << "lsconv: " << e.what() << "\n";
    return 3;
  } catch (const PointCapExceeded& e) {
    std::cerr << "lsconv: " << e.what() << "\n";
    return 3;
  } catch (const PopulationCapExceeded& e) {
    std::cerr << "lsconv: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "lsconv: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lsconv: " << e.what() << "\n";
    return 2;
  }
}
