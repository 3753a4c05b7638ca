#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "varfrac/entropy_bounds.hpp"
#include "varfrac/order_function.hpp"

namespace varfrac::cli {

// Parsed alpha specification. `example` is set for the ex1..ex4 forms.
struct AlphaSpec {
  OrderFunction alpha;
  bool is_example = false;
  ExampleFamily family = ExampleFamily::Example1;
  ExampleParams params;
};

// const:<a> | ex1:<a0>,<l>,<g> | ex2:<a0>,<l>,<g> | ex3:<a0>,<l>,<g> | ex4:<g>
// | reclog | csv:<path>
AlphaSpec parse_alpha(const std::string& spec);

// Builtin test functions: one, ramp, cos3.
std::function<double(double)> builtin_function(const std::string& name);
bool is_builtin_function(const std::string& name);

// An integer N gives t_k = k/N, k = 0..N; anything else is a comma list of points.
std::vector<double> parse_targets(const std::string& text);

// "2^a..2^b" (integer exponents) or "2^a..2^b:step" with a fractional step.
std::vector<double> parse_n_grid(const std::string& text);

// Full command-line entry point; returns the process exit code
// (0 success, 2 usage or validation, 3 numerical failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varfrac::cli
