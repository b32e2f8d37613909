// Copyright (c) 2026 lsconv contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef LSCONV_IO_HPP
#define LSCONV_IO_HPP

#include <string>

#include "lsconv/grid_function.hpp"
#include "lsconv/step_function.hpp"
#include "lsconv/walk.hpp"

namespace lsconv {

// Shortest representation that parses back to the same bits.
std::string format_double(double v);
double parse_double(const std::string& s);  // ParseError on junk

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// CSV: "position,weight" header, one atom per line. Carries atoms only;
// use JSON where the horizon matters.
std::string step_function_csv(const StepFunction& f);
StepFunction step_function_from_csv(const std::string& text);

// JSON: {"atoms": [[position, weight], ...], "horizon": number|null}
// plus "quantum" when it differs from the default. Lossless.
std::string step_function_json(const StepFunction& f);
StepFunction step_function_from_json(const std::string& text);

// CSV: "t,value" header, uniform spacing starting at zero.
std::string grid_function_csv(const GridFunction& g);
GridFunction grid_function_from_csv(const std::string& text);

// JSON: {"dt": number, "values": [...]}; monotonicity is rescanned on load.
std::string grid_function_json(const GridFunction& g);
GridFunction grid_function_from_json(const std::string& text);

// JSON with one object per variable, e.g.
// {"xi": {"kind": "exponential", "rate": 1.0},
//  "eta": {"kind": "exponential", "rate": 1.0}, "eta_equals_xi": true}.
// Parameter names per kind: constant(value), exponential(rate),
// uniform(lower, upper), pareto(tail_index, scale),
// lognormal(log_mean, log_var).
std::string distribution_spec_json(const DistributionSpec& d);
DistributionSpec distribution_spec_from_json(const std::string& text);
std::string walk_spec_json(const WalkSpec& w);
WalkSpec walk_spec_from_json(const std::string& text);

}  // namespace lsconv

#endif  // LSCONV_IO_HPP
