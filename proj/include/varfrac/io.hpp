#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "varfrac/diagnostics.hpp"
#include "varfrac/entropy_bounds.hpp"
#include "varfrac/operator_core.hpp"
#include "varfrac/order_function.hpp"
#include "varfrac/spectral.hpp"

namespace varfrac::io {

// Shortest decimal text that reads back to the same double.
std::string fmt(double v);

// Two-column CSV with a header row.
std::vector<std::vector<double>> read_csv(const std::string& path, std::size_t columns);

OrderFunction read_order_csv(const std::string& path, TableInterp interp = TableInterp::Linear);

// "<path>" holds (node, value); "<path>.meta.json" holds the interpretation.
void write_grid_function(const std::string& path, const GridFunction& g);
GridFunction read_grid_function(const std::string& path);
std::string grid_function_csv(const GridFunction& g, const std::string& value_name = "value");

// Dense row-major CSV preceded by one '#'-prefixed JSON header line.
std::string matrix_csv(const OperatorMatrix& m);
OperatorMatrix read_matrix_csv(const std::string& path);

std::string spectrum_csv(const std::vector<double>& sigma);
std::string entropy_csv(const EntropyEstimate& e);

nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const CompactnessVerdict& v);
nlohmann::json to_json(const RateFit& f);
nlohmann::json to_json(const VolumetricBound& v);
nlohmann::json to_json(const RegularityResult& r);

// Writes text to a sibling temporary file and renames it over path.
void write_atomic(const std::string& path, const std::string& text);

}  // namespace varfrac::io
