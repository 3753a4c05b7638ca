#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "varfrac/io.hpp"

using namespace varfrac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "varfrac_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  oracle::Gen g(61);
  for (int k = 0; k < 1000; ++k) {
    double v = (g.uniform() - 0.5) * std::pow(10.0, g.integer(-300, 300));
    CHECK(std::stod(io::fmt(v)) == v);
  }
  CHECK(io::fmt(0.5) == "0.5");
  CHECK(io::fmt(INFINITY) == "inf");
  CHECK(io::fmt(1e-300).find(',') == std::string::npos);
}

TEST_CASE("grid function files carry their interpretation") {
  GridFunction g{{0.0, 0.25, 1.0}, {1.0, -2.5, 3.0}, Interpretation::PiecewiseConstantLeft};
  auto p = scratch("g.csv");
  io::write_grid_function(p.string(), g);
  auto back = io::read_grid_function(p.string());
  CHECK(back.nodes == g.nodes);
  CHECK(back.values == g.values);
  CHECK(back.interp == Interpretation::PiecewiseConstantLeft);
  std::string text = slurp(p);
  CHECK(text.rfind("node,value\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST_CASE("order tables from CSV") {
  auto p = scratch("alpha.csv");
  put(p, "t,alpha\n0,0.5\n0.5,1.0\r\n1,0.75\n");
  auto a = io::read_order_csv(p.string());
  CHECK(a(0.25) == doctest::Approx(0.75));
  put(p, "t,alpha\n0,0.5\n0.5,abc\n");
  CHECK_THROWS_AS(io::read_order_csv(p.string()), std::invalid_argument);
  put(p, "t,alpha\n0,0.5,1\n");
  CHECK_THROWS_AS(io::read_order_csv(p.string()), std::invalid_argument);
  CHECK_THROWS_AS(io::read_order_csv(scratch("missing.csv").string()), std::invalid_argument);
}

TEST_CASE("matrix CSV round trip") {
  OperatorMatrix m = OperatorMatrix::diagonal({1.0, 2.0, 3.0}, 2.0, INFINITY);
  m.at(2, 0) = 0.1;
  auto p = scratch("m.csv");
  io::write_atomic(p.string(), io::matrix_csv(m));
  auto back = io::read_matrix_csv(p.string());
  CHECK(back.n == 3);
  CHECK(back.entries == m.entries);
  CHECK(std::isinf(back.q));
  CHECK(back.basis_tag == "diagonal");
  put(p, "#{\"n\":2}\n1,0\n0\n");
  CHECK_THROWS_AS(io::read_matrix_csv(p.string()), std::invalid_argument);
}

TEST_CASE("reports serialise with stable keys") {
  NormReport r{INFINITY, true, {{0.01, 1.0}, {1e-4, 2.0}}, "m"};
  auto j = io::to_json(r);
  CHECK(j["value"] == "inf");
  CHECK(j["divergent"] == true);
  CHECK(j["evidence"].size() == 2);
  CHECK(j.dump() == io::to_json(r).dump());
  CHECK(io::spectrum_csv({0.5, 0.25}) == "k,sigma_k\n1,0.5\n2,0.25\n");
  EntropyEstimate e{{64}, {0.1}, {0.2}, {0.15}, std::nullopt};
  CHECK(io::entropy_csv(e) == "n,lower,upper,predicted\n64,0.1,0.2,0.15\n");
}
