// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#include "lsconv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lsconv/errors.hpp"

namespace lsconv {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  // from_chars wants no leading whitespace or plus sign
  std::size_t begin = s.find_first_not_of(" \t");
  std::size_t end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos)
    throw ParseError("empty numeric field");
  const char* first = s.data() + begin;
  const char* last = s.data() + end + 1;
  double value = 0.0;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError("not a number: '" + s + "'");
  return value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

std::pair<std::string, std::string> split_two_fields(const std::string& line) {
  std::size_t comma = line.find(',');
  if (comma == std::string::npos ||
      line.find(',', comma + 1) != std::string::npos)
    throw ParseError("expected exactly two fields: '" + line + "'");
  return {line.substr(0, comma), line.substr(comma + 1)};
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return j;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

json distribution_to_json(const DistributionSpec& d) {
  json j;
  j["kind"] = d.kind_name();
  switch (d.kind()) {
    case DistributionSpec::Kind::constant:
      j["value"] = d.param_a();
      break;
    case DistributionSpec::Kind::exponential:
      j["rate"] = d.param_a();
      break;
    case DistributionSpec::Kind::uniform:
      j["lower"] = d.param_a();
      j["upper"] = d.param_b();
      break;
    case DistributionSpec::Kind::pareto:
      j["tail_index"] = d.param_a();
      j["scale"] = d.param_b();
      break;
    case DistributionSpec::Kind::lognormal:
      j["log_mean"] = d.param_a();
      j["log_var"] = d.param_b();
      break;
  }
  return j;
}

DistributionSpec distribution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("distribution needs a string 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant")
      return DistributionSpec::constant(require_number(j, "value"));
    if (kind == "exponential")
      return DistributionSpec::exponential(require_number(j, "rate"));
    if (kind == "uniform")
      return DistributionSpec::uniform(require_number(j, "lower"),
                                       require_number(j, "upper"));
    if (kind == "pareto")
      return DistributionSpec::pareto(require_number(j, "tail_index"),
                                      require_number(j, "scale"));
    if (kind == "lognormal")
      return DistributionSpec::lognormal(require_number(j, "log_mean"),
                                         require_number(j, "log_var"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("bad distribution parameters: " + std::string(e.what()));
  }
  throw ParseError("unknown distribution kind '" + kind + "'");
}

WalkSpec walk_from_json(const json& j) {
  if (!j.is_object() || !j.contains("xi") || !j.contains("eta"))
    throw ParseError("walk needs 'xi' and 'eta' objects");
  bool same_draw = false;
  if (j.contains("eta_equals_xi")) {
    if (!j.at("eta_equals_xi").is_boolean())
      throw ParseError("'eta_equals_xi' must be a boolean");
    same_draw = j.at("eta_equals_xi").get<bool>();
  }
  return WalkSpec{distribution_from_json(j.at("xi")),
                  distribution_from_json(j.at("eta")), same_draw};
}

}  // namespace

std::string step_function_csv(const StepFunction& f) {
  std::string out = "position,weight\n";
  const auto& p = f.positions();
  const auto& w = f.weights();
  for (std::size_t i = 0; i < p.size(); ++i)
    out += format_double(p[i]) + "," + format_double(w[i]) + "\n";
  return out;
}

StepFunction step_function_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "position,weight")
    throw ParseError("step function CSV must start with 'position,weight'");
  std::vector<Atom> atoms;
  atoms.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [a, b] = split_two_fields(lines[i]);
    atoms.push_back({parse_double(a), parse_double(b)});
  }
  try {
    return StepFunction(std::move(atoms));
  } catch (const Error& e) {
    throw ParseError("invalid step function data: " + std::string(e.what()));
  }
}

std::string step_function_json(const StepFunction& f) {
  json j;
  j["atoms"] = json::array();
  const auto& p = f.positions();
  const auto& w = f.weights();
  for (std::size_t i = 0; i < p.size(); ++i)
    j["atoms"].push_back(json::array({p[i], w[i]}));
  if (f.horizon())
    j["horizon"] = *f.horizon();
  else
    j["horizon"] = nullptr;
  if (f.quantum() != kDefaultPositionQuantum) j["quantum"] = f.quantum();
  return j.dump();
}

StepFunction step_function_from_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array())
    throw ParseError("step function JSON needs an 'atoms' array");
  std::vector<Atom> atoms;
  for (const auto& e : j.at("atoms")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number())
      throw ParseError("each atom must be a [position, weight] pair");
    atoms.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  std::optional<double> horizon;
  if (j.contains("horizon") && !j.at("horizon").is_null()) {
    if (!j.at("horizon").is_number())
      throw ParseError("'horizon' must be a number or null");
    horizon = j.at("horizon").get<double>();
  }
  double quantum = kDefaultPositionQuantum;
  if (j.contains("quantum")) quantum = require_number(j, "quantum");
  try {
    return StepFunction(std::move(atoms), horizon, quantum);
  } catch (const Error& e) {
    throw ParseError("invalid step function data: " + std::string(e.what()));
  }
}

std::string grid_function_csv(const GridFunction& g) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < g.values.size(); ++i)
    out += format_double(g.dt * static_cast<double>(i)) + "," +
           format_double(g.values[i]) + "\n";
  return out;
}

GridFunction grid_function_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "t,value")
    throw ParseError("grid CSV must start with 't,value'");
  if (lines.size() < 3)
    throw ParseError("grid CSV needs at least two rows");
  std::vector<double> ts, values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [a, b] = split_two_fields(lines[i]);
    ts.push_back(parse_double(a));
    values.push_back(parse_double(b));
  }
  if (ts[0] != 0.0) throw ParseError("grid must start at t = 0");
  double dt = ts[1] - ts[0];
  if (!(dt > 0.0)) throw ParseError("grid spacing must be positive");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double expect = dt * static_cast<double>(i);
    if (std::abs(ts[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw ParseError("grid spacing is not uniform");
  }
  try {
    return make_grid(dt, std::move(values));
  } catch (const Error& e) {
    throw ParseError("invalid grid data: " + std::string(e.what()));
  }
}

std::string grid_function_json(const GridFunction& g) {
  json j;
  j["dt"] = g.dt;
  j["values"] = g.values;
  return j.dump();
}

GridFunction grid_function_from_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("values") || !j.at("values").is_array())
    throw ParseError("grid JSON needs a 'values' array");
  double dt = require_number(j, "dt");
  std::vector<double> values;
  for (const auto& e : j.at("values")) {
    if (!e.is_number()) throw ParseError("grid values must be numbers");
    values.push_back(e.get<double>());
  }
  try {
    return make_grid(dt, std::move(values));
  } catch (const Error& e) {
    throw ParseError("invalid grid data: " + std::string(e.what()));
  }
}

std::string distribution_spec_json(const DistributionSpec& d) {
  return distribution_to_json(d).dump();
}

DistributionSpec distribution_spec_from_json(const std::string& text) {
  return distribution_from_json(parse_json(text));
}

std::string walk_spec_json(const WalkSpec& w) {
  json j;
  j["xi"] = distribution_to_json(w.xi);
  j["eta"] = distribution_to_json(w.eta);
  j["eta_equals_xi"] = w.eta_equals_xi;
  return j.dump();
}

WalkSpec walk_spec_from_json(const std::string& text) {
  return walk_from_json(parse_json(text));
}

}  // namespace lsconv
