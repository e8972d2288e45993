#pragma once

// JSON documents for distributions, interface conditions, problems and
// solution reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "pdist/ode.hpp"

namespace pdist {

using Json = nlohmann::json;

/// {breakpoints, pieces: [expr, ...], deltas: [{point_index, order, re, im}, ...]}
Json to_json(const PiecewiseDist& f);
PiecewiseDist dist_from_json(const Json& j);

/// {point, A: [[{re, im}, ...], ...], B: [...]}
Json to_json(const InterfaceSpec& spec);
InterfaceSpec interface_from_json(const Json& j, const std::string& where = "interface");

Json complex_to_json(Complex c);
/// Accepts a number, {re, im} or [re, im].
Complex complex_from_json(const Json& j, const std::string& where);

struct Problem {
  OdeSpec ode;
  std::vector<InterfaceSpec> interfaces;
  Window window;
  InitialData init;
};

/// {ode: {order, coeffs: [expr, ...], rhs}, interfaces: [...], window: [a, b],
///  init: {x, jet: [...]}}. Throws InputError naming the offending field,
/// ConstructionError when a_n vanishes on the window.
Problem problem_from_json(const Json& j);
Problem parse_problem(const std::string& path);

Json to_json(const SolutionReport& report);

Json read_json_file(const std::string& path);

}  // namespace pdist
