#include "varfrac/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace varfrac::io {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(const std::string& cell, const std::string& path, std::size_t line) {
  std::string s = cell;
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
  std::size_t b = s.find_first_not_of(' ');
  s = b == std::string::npos ? "" : s.substr(b);
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::vector<std::vector<double>> read_csv(const std::string& path, std::size_t columns) {
  std::istringstream in(slurp(path));
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell, path, lineno));
    if (row.size() != columns)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(columns) + " columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

OrderFunction read_order_csv(const std::string& path, TableInterp interp) {
  auto rows = read_csv(path, 2);
  std::vector<double> t, a;
  for (auto& r : rows) {
    t.push_back(r[0]);
    a.push_back(r[1]);
  }
  return OrderFunction::tabulated(std::move(t), std::move(a), interp);
}

std::string grid_function_csv(const GridFunction& g, const std::string& value_name) {
  std::string s = "node," + value_name + "\n";
  for (std::size_t i = 0; i < g.size(); ++i) s += fmt(g.nodes[i]) + "," + fmt(g.values[i]) + "\n";
  return s;
}

void write_grid_function(const std::string& path, const GridFunction& g) {
  g.validate();
  json meta;
  meta["interpretation"] =
      g.interp == Interpretation::PiecewiseLinear ? "piecewise-linear" : "piecewise-constant-left";
  write_atomic(path + ".meta.json", meta.dump(2) + "\n");
  write_atomic(path, grid_function_csv(g));
}

GridFunction read_grid_function(const std::string& path) {
  auto rows = read_csv(path, 2);
  GridFunction g;
  for (auto& r : rows) {
    g.nodes.push_back(r[0]);
    g.values.push_back(r[1]);
  }
  std::string meta_path = path + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    json meta = json::parse(slurp(meta_path));
    std::string tag = meta.value("interpretation", "piecewise-linear");
    if (tag == "piecewise-constant-left")
      g.interp = Interpretation::PiecewiseConstantLeft;
    else if (tag != "piecewise-linear")
      throw std::invalid_argument(meta_path + ": unknown interpretation '" + tag + "'");
  }
  g.validate();
  return g;
}

std::string matrix_csv(const OperatorMatrix& m) {
  json h;
  h["n"] = m.n;
  h["r"] = m.r;
  h["p"] = std::isinf(m.p) ? json("inf") : json(m.p);
  h["q"] = std::isinf(m.q) ? json("inf") : json(m.q);
  h["basis_tag"] = m.basis_tag;
  std::string s = "#" + h.dump() + "\n";
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      if (j) s += ",";
      s += fmt(m(i, j));
    }
    s += "\n";
  }
  return s;
}

OperatorMatrix read_matrix_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#')
    throw std::invalid_argument(path + ": missing JSON header line");
  json h = json::parse(line.substr(1));
  auto exponent = [](const json& v) {
    return v.is_string() && v.get<std::string>() == "inf" ? INFINITY : v.get<double>();
  };
  OperatorMatrix m;
  m.n = h.at("n").get<int>();
  m.r = h.value("r", 1.0);
  m.p = h.contains("p") ? exponent(h["p"]) : 2.0;
  m.q = h.contains("q") ? exponent(h["q"]) : 2.0;
  m.basis_tag = h.value("basis_tag", std::string("unknown"));
  if (m.n < 1) throw std::invalid_argument(path + ": n must be >= 1");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) m.entries.push_back(parse_number(cell, path, lineno));
  }
  if (m.entries.size() != static_cast<std::size_t>(m.n) * m.n)
    throw std::invalid_argument(path + ": expected n*n entries");
  return m;
}

std::string spectrum_csv(const std::vector<double>& sigma) {
  std::string s = "k,sigma_k\n";
  for (std::size_t k = 0; k < sigma.size(); ++k) s += std::to_string(k + 1) + "," + fmt(sigma[k]) + "\n";
  return s;
}

std::string entropy_csv(const EntropyEstimate& e) {
  std::string s = "n,lower,upper,predicted\n";
  for (std::size_t i = 0; i < e.n_values.size(); ++i)
    s += fmt(e.n_values[i]) + "," + fmt(e.lower[i]) + "," + fmt(e.upper[i]) + "," + fmt(e.predicted[i]) + "\n";
  return s;
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json evidence(const std::vector<EvidencePoint>& ev) {
  json a = json::array();
  for (const auto& e : ev) a.push_back({{"parameter", number(e.parameter)}, {"value", number(e.value)}});
  return a;
}

}  // namespace

json to_json(const NormReport& r) {
  return {{"value", number(r.value)},
          {"divergent", r.divergent},
          {"method", r.method},
          {"evidence", evidence(r.evidence)}};
}

json to_json(const CompactnessVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"endpoint", to_string(v.endpoint)},
          {"compact_tol", v.options.compact_tol},
          {"noncompact_floor", v.options.noncompact_floor},
          {"limit_evidence", evidence(v.limit_evidence)},
          {"phi_evidence", evidence(v.phi_evidence)}};
}

json to_json(const RateFit& f) {
  return {{"model", to_string(f.model)},
          {"intercept", number(f.intercept)},
          {"power_exponent", number(f.power_exponent)},
          {"log_exponent", number(f.log_exponent)},
          {"max_residual", number(f.max_residual)},
          {"ill_conditioned", f.ill_conditioned}};
}

json to_json(const VolumetricBound& v) {
  return {{"bound", number(v.bound)},
          {"volume_ratio_root", number(v.volume_ratio_root)},
          {"diagonal_geomean", number(v.diagonal_geomean)},
          {"half", v.half}};
}

json to_json(const RegularityResult& r) {
  return {{"holds", r.holds},
          {"worst_s", r.worst_s},
          {"worst_t", r.worst_t},
          {"worst_ratio", number(r.worst_ratio)}};
}

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace varfrac::io
