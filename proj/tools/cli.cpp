#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "varfrac/diagnostics.hpp"
#include "varfrac/errors.hpp"
#include "varfrac/io.hpp"
#include "varfrac/operator_core.hpp"
#include "varfrac/random.hpp"
#include "varfrac/spectral.hpp"

namespace varfrac::cli {

using nlohmann::ordered_json;

namespace {

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument(what + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, what));
  return out;
}

double exponent_value(const std::string& s) {
  if (s == "inf") return INFINITY;
  double v = to_double(s, "exponent");
  if (!(v >= 1.0)) throw std::invalid_argument("exponents p, q must be >= 1 or 'inf'");
  return v;
}

// Writes to the file when a path is given, else to the stream.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    io::write_atomic(path, text);
}

void emit_fit(const ordered_json& j, const std::string& fit_path, const std::string& out_path,
              std::ostream& err) {
  std::string text = j.dump(2) + "\n";
  if (!fit_path.empty())
    io::write_atomic(fit_path, text);
  else if (!out_path.empty())
    io::write_atomic(out_path + ".fit.json", text);
  else
    err << text;
}

ordered_json fit_json(const RateFit& f) {
  nlohmann::json src = io::to_json(f);
  ordered_json j;
  for (auto& [k, v] : src.items()) j[k] = v;
  return j;
}

}  // namespace

AlphaSpec parse_alpha(const std::string& spec) {
  AlphaSpec out{OrderFunction::constant(1.0)};
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto args = [&](std::size_t n) {
    auto v = split_numbers(rest, "alpha spec '" + spec + "'");
    if (v.size() != n)
      throw std::invalid_argument("alpha spec '" + spec + "' expects " + std::to_string(n) + " parameters");
    return v;
  };
  if (head == "const") {
    out.alpha = OrderFunction::constant(args(1)[0]);
  } else if (head == "ex1" || head == "ex2" || head == "ex3") {
    auto v = args(3);
    out.is_example = true;
    out.family = head == "ex1" ? ExampleFamily::Example1
                 : head == "ex2" ? ExampleFamily::Example2
                                 : ExampleFamily::Example3;
    out.params = {v[0], v[1], v[2]};
    out.alpha = example_profile(out.family, out.params);
  } else if (head == "ex4") {
    out.is_example = true;
    out.family = ExampleFamily::Example4;
    out.params.gamma = args(1)[0];
    out.alpha = example_profile(out.family, out.params);
  } else if (head == "reclog" && colon == std::string::npos) {
    out.alpha = OrderFunction::reciprocal_log();
  } else if (head == "csv" && !rest.empty()) {
    out.alpha = io::read_order_csv(rest);
  } else {
    throw std::invalid_argument("unknown alpha spec '" + spec + "'");
  }
  return out;
}

bool is_builtin_function(const std::string& name) {
  return name == "one" || name == "ramp" || name == "cos3";
}

std::function<double(double)> builtin_function(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "ramp") return [](double s) { return s; };
  if (name == "cos3") return [](double s) { return std::cos(3.0 * s); };
  throw std::invalid_argument("unknown builtin function '" + name + "'");
}

std::vector<double> parse_targets(const std::string& text) {
  bool integer = !text.empty() && text.find_first_not_of("0123456789") == std::string::npos;
  std::vector<double> t;
  if (integer) {
    long n = std::stol(text);
    if (n < 1 || n > 10000000) throw std::invalid_argument("--targets: N must lie in [1, 1e7]");
    for (long k = 0; k <= n; ++k) t.push_back(k == n ? 1.0 : static_cast<double>(k) / n);
  } else {
    t = split_numbers(text, "--targets");
    if (t.empty()) throw std::invalid_argument("--targets: empty list");
  }
  for (double x : t)
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("--targets: points must lie in [0,1]");
  return t;
}

std::vector<double> parse_n_grid(const std::string& text) {
  auto bad = [&] { return std::invalid_argument("--n-grid: expected 2^a..2^b[:step], got '" + text + "'"); };
  auto dots = text.find("..");
  if (dots == std::string::npos) throw bad();
  std::string lo = text.substr(0, dots), hi = text.substr(dots + 2), step = "1";
  if (auto c = hi.find(':'); c != std::string::npos) {
    step = hi.substr(c + 1);
    hi = hi.substr(0, c);
  }
  if (lo.rfind("2^", 0) != 0 || hi.rfind("2^", 0) != 0) throw bad();
  double a = to_double(lo.substr(2), "--n-grid"), b = to_double(hi.substr(2), "--n-grid");
  double s = to_double(step, "--n-grid");
  if (!(s > 0.0) || !(b >= a) || !(a >= 1.0) || b > 1000.0) throw bad();
  std::vector<double> out;
  int count = static_cast<int>(std::floor((b - a) / s + 1e-9));
  if (count > 100000) throw bad();
  for (int k = 0; k <= count; ++k) out.push_back(std::exp2(a + k * s));
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"varfrac: variable-order fractional integration operators"};
  app.require_subcommand(1);
  app.footer(
      "Alpha specs: const:<a>, ex1:<a0>,<lambda>,<gamma>, ex2:<a0>,<lambda>,<gamma>,\n"
      "  ex3:<a0>,<lambda>,<gamma>, ex4:<gamma>, reclog, csv:<path> (header t,alpha).\n"
      "Exit codes: 0 success, 2 usage or validation error, 3 numerical failure.\n"
      "VARFRAC_THREADS caps internal parallelism.");

  std::string alpha_text, output, fit_output;
  int n_cells = 1024;
  double grading = 2.0;

  // apply
  std::string f_text = "one", targets_text = "256", side = "left";
  auto* apply = app.add_subcommand("apply", "Evaluate R^alpha f (or the right-sided Q^alpha f)");
  apply->add_option("--alpha", alpha_text, "order profile")->required();
  apply->add_option("--f", f_text, "builtin one|ramp|cos3 or a CSV path (node,value)");
  apply->add_option("--targets", targets_text, "N for t_k = k/N, or a comma list of points");
  apply->add_option("--n-cells", n_cells, "cells of the source mesh for builtin f");
  apply->add_option("--grading", grading, "mesh grading exponent for builtin f");
  apply->add_option("--side", side, "left (R) or right (Q)")->check(CLI::IsMember({"left", "right"}));
  apply->add_option("--output", output, "output CSV (stdout when omitted)");

  // diagnose
  std::string check = "l1norm", p_text = "2";
  int s_points = 64;
  auto* diagnose = app.add_subcommand("diagnose", "Boundedness and compactness diagnostics (JSON)");
  diagnose->add_option("--alpha", alpha_text, "order profile")->required();
  diagnose->add_option("--check", check, "l1norm|l1criterion|lp-linf|compact-zero|compact-one")
      ->check(CLI::IsMember({"l1norm", "l1criterion", "lp-linf", "compact-zero", "compact-one"}));
  diagnose->add_option("--p", p_text, "source exponent for lp-linf");
  diagnose->add_option("--s-points", s_points, "uniform probes of s for l1norm");
  diagnose->add_option("--output", output, "output JSON (stdout when omitted)");

  // spectrum
  std::string matrix_path, q_text = "2";
  int n = 128, n_disc = 0;
  double r = 1.0;
  bool do_fit = false, volumetric = false;
  auto* spectrum = app.add_subcommand("spectrum", "Singular values of the assembled matrix (CSV)");
  auto* sp_alpha = spectrum->add_option("--alpha", alpha_text, "order profile");
  auto* sp_matrix = spectrum->add_option("--matrix", matrix_path, "matrix CSV with JSON header line");
  sp_alpha->excludes(sp_matrix);
  spectrum->add_option("--n", n, "matrix dimension (or number of approximation numbers)");
  spectrum->add_option("--n-disc", n_disc, "discretisation size for approximation numbers");
  spectrum->add_option("--r", r, "interval [0, r]");
  spectrum->add_option("--p", p_text, "source exponent");
  spectrum->add_option("--q", q_text, "target exponent");
  spectrum->add_flag("--fit", do_fit, "fit log sigma_k against log k over k in [8, n/8]");
  spectrum->add_flag("--volumetric", volumetric, "also report the volumetric entropy lower bound");
  spectrum->add_option("--output", output, "output CSV (stdout when omitted)");
  spectrum->add_option("--fit-output", fit_output, "fit JSON (default <output>.fit.json, else stderr)");

  // entropy
  std::string n_grid_text = "2^6..2^20", model_text;
  auto* entropy = app.add_subcommand("entropy", "Entropy-number bracket for ex1..ex4 (CSV)");
  entropy->add_option("--alpha", alpha_text, "ex1|ex2|ex3|ex4 profile")->required();
  entropy->add_option("--n-grid", n_grid_text, "2^a..2^b[:step]");
  entropy->add_option("--p", p_text, "source exponent");
  entropy->add_option("--q", q_text, "target exponent");
  entropy->add_option("--fit", model_text, "power|power_log|power_loglog");
  entropy->add_option("--output", output, "output CSV (stdout when omitted)");
  entropy->add_option("--fit-output", fit_output, "fit JSON (default <output>.fit.json, else stderr)");

  // verify
  std::string suite = "identities";
  std::uint64_t seed = 1;
  int trials = 100, n_max = 20;
  auto* verify = app.add_subcommand("verify", "Numerical checks of the structural identities (JSON)");
  verify->add_option("--suite", suite, "identities|witness|maxbound")
      ->check(CLI::IsMember({"identities", "witness", "maxbound"}));
  verify->add_option("--alpha", alpha_text, "order profile")->required();
  verify->add_option("--seed", seed, "seed for random test functions");
  verify->add_option("--trials", trials, "random test functions for maxbound");
  verify->add_option("--n-max", n_max, "witness levels");
  verify->add_option("--n-cells", n_cells, "target grid cells");
  verify->add_option("--p", p_text, "exponent for the witness norms");
  verify->add_option("--output", output, "output JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    QuadratureConfig cfg;
    cfg.n_cells = n_cells;
    cfg.grading = grading;
    cfg.validate();

    if (*apply) {
      AlphaSpec a = parse_alpha(alpha_text);
      auto targets = parse_targets(targets_text);
      GridFunction res;
      if (is_builtin_function(f_text)) {
        auto fn = builtin_function(f_text);
        res = side == "left" ? rl_apply(a.alpha, fn, 0.0, targets, cfg)
                             : q_apply(a.alpha, fn, 1.0, targets, cfg);
      } else {
        GridFunction f = io::read_grid_function(f_text);
        res = side == "left" ? rl_apply(a.alpha, f, targets, cfg) : q_apply(a.alpha, f, targets, cfg);
      }
      for (double v : res.values)
        if (!std::isfinite(v)) throw NumericalError("apply: non-finite result");
      emit(io::grid_function_csv(res), output, out);
      return 0;
    }

    if (*diagnose) {
      AlphaSpec a = parse_alpha(alpha_text);
      double p = exponent_value(p_text);
      if (s_points < 1) throw std::invalid_argument("--s-points must be >= 1");
      ordered_json j;
      j["alpha"] = a.alpha.describe();
      j["check"] = check;
      nlohmann::json body;
      if (check == "l1norm") {
        std::vector<double> s;
        for (int k = 0; k < s_points; ++k) s.push_back(static_cast<double>(k) / s_points);
        body = io::to_json(l1_operator_norm(a.alpha, s, cfg));
      } else if (check == "l1criterion") {
        body = io::to_json(l1_criterion_integral(a.alpha, cfg));
      } else if (check == "lp-linf") {
        j["p"] = p_text;
        body = io::to_json(lp_to_linf_norm(a.alpha, p));
      } else {
        body = io::to_json(classify_compactness(
            a.alpha, check == "compact-zero" ? Endpoint::Zero : Endpoint::One));
      }
      for (auto& [k, v] : body.items()) j[k] = v;
      emit(j.dump(2) + "\n", output, out);
      return 0;
    }

    if (*spectrum) {
      double p = exponent_value(p_text), q = exponent_value(q_text);
      if (n < 1) throw std::invalid_argument("--n must be >= 1");
      if (matrix_path.empty() && alpha_text.empty())
        throw std::invalid_argument("spectrum needs --alpha or --matrix");
      std::vector<double> sigma;
      OperatorMatrix m;
      bool have_matrix = false;
      if (!matrix_path.empty()) {
        m = io::read_matrix_csv(matrix_path);
        have_matrix = true;
        sigma = singular_values(m);
      } else {
        AlphaSpec a = parse_alpha(alpha_text);
        if (n_disc > 0) {
          if (!(p == 2.0 && q == 2.0 && r == 1.0))
            throw std::invalid_argument("--n-disc uses p = q = 2 on [0,1]");
          auto an = approximation_numbers(a.alpha, n, n_disc, cfg);
          if (!an.converged) err << "warning: approximation numbers changed by " << an.max_rel_change
                                 << " under refinement\n";
          sigma = an.values;
        } else {
          m = assemble_matrix(a.alpha, n, r, p, q, cfg);
          have_matrix = true;
          sigma = singular_values(m);
        }
      }
      if (do_fit || volumetric) {
        ordered_json j;
        if (do_fit) {
          int hi = static_cast<int>(sigma.size()) / 8, lo = 8;
          if (hi - lo + 1 < 6) {
            lo = 1;
            hi = static_cast<int>(sigma.size());
          }
          if (hi - lo + 1 < 3) throw std::invalid_argument("--fit needs at least 3 singular values");
          std::vector<double> x, y;
          for (int k = lo; k <= hi; ++k) {
            if (!(sigma[k - 1] > 0.0)) throw NumericalError("--fit: zero singular value");
            x.push_back(std::log(k));
            y.push_back(std::log(sigma[k - 1]));
          }
          auto lf = fit_line(x, y);
          j["fit_range"] = {lo, hi};
          j["slope"] = lf.slope;
          j["intercept"] = lf.intercept;
          j["max_residual"] = lf.max_residual;
        }
        if (volumetric) {
          if (!have_matrix) throw std::invalid_argument("--volumetric needs an assembled matrix");
          nlohmann::json vb = io::to_json(volumetric_entropy_lower(m));
          for (auto& [k, v] : vb.items()) j["volumetric"][k] = v;
        }
        emit_fit(j, fit_output, output, err);
      }
      emit(io::spectrum_csv(sigma), output, out);
      return 0;
    }

    if (*entropy) {
      AlphaSpec a = parse_alpha(alpha_text);
      if (!a.is_example) throw std::invalid_argument("entropy needs an ex1..ex4 alpha spec");
      double p = exponent_value(p_text), q = exponent_value(q_text);
      auto grid = parse_n_grid(n_grid_text);
      std::optional<RateModel> model;
      if (!model_text.empty()) model = parse_rate_model(model_text);
      auto est = estimate_example(a.family, a.params, grid, p, q);
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (!std::isfinite(est.upper[i]) || !std::isfinite(est.lower[i]))
          throw NumericalError("entropy: non-finite bound");
      if (model) {
        est.fit = fit_rate(est.n_values, est.upper, *model);
        ordered_json j;
        j["alpha"] = alpha_text;
        j["model"] = to_string(*model);
        j["upper"] = fit_json(*est.fit);
        j["lower"] = fit_json(fit_rate(est.n_values, est.lower, *model));
        auto pr = predict_rate(a.family, a.params, est.n_values.back(), p, q);
        if (a.family == ExampleFamily::Example2) {
          j["example2_upper_exp_const"] = pr.upper_exp_const;
          j["example2_lower_exp_const"] = pr.lower_exp_const;
        }
        if (p != q) j["note"] = "constants for p != q may depend on p and q";
        emit_fit(j, fit_output, output, err);
      }
      emit(io::entropy_csv(est), output, out);
      return 0;
    }

    if (*verify) {
      AlphaSpec a = parse_alpha(alpha_text);
      double p = exponent_value(p_text);
      if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
      if (n_max < 10) throw std::invalid_argument("--n-max must be >= 10");
      ordered_json j;
      j["suite"] = suite;
      j["alpha"] = a.alpha.describe();
      ordered_json checks = ordered_json::array();
      bool all = true;
      auto add = [&](const std::string& name, double value, double threshold, bool pass) {
        checks.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
        all = all && pass;
      };
      if (suite == "identities") {
        auto f = GridFunction::uniform([](double s) { return std::cos(3.0 * s); }, 0.0, 1.0, 4096);
        QuadratureConfig c1 = cfg, c2 = cfg;
        c1.n_cells = std::max(8, cfg.n_cells / 2);
        double s1 = verify_semigroup(a.alpha, 0.5, f, c1), s2 = verify_semigroup(a.alpha, 0.5, f, c2);
        add("semigroup", s2, 5e-3, s2 <= 5e-3);
        add("semigroup_decay", s1 / s2, 1.7, s1 / s2 >= 1.7 || s2 <= 1e-12);
        double d1 = verify_scaling(a.alpha, 0.5, 2.0, 2.0, f, c1);
        double d2 = verify_scaling(a.alpha, 0.5, 2.0, 2.0, f, c2);
        add("scaling", d2, 5e-3, d2 <= 5e-3);
        add("scaling_decay", d1 / d2, 1.7, d1 / d2 >= 1.7 || d2 <= 1e-12);
      } else if (suite == "witness") {
        auto w = witness_separation(a.alpha, p, n_max, cfg);
        double mn = INFINITY, mx = 0.0;
        for (std::size_t k = w.size() - 10; k < w.size(); ++k) {
          mn = std::min(mn, w[k]);
          mx = std::max(mx, w[k]);
        }
        double ratio = mx > 0.0 ? mn / mx : 0.0;
        bool positive = mn > 0.0 && ratio >= 0.5;
        j["witness"] = w;
        j["liminf_positive"] = positive;
        Verdict v = classify_compactness(a.alpha, Endpoint::Zero).verdict;
        j["verdict"] = to_string(v);
        // A positive liminf should pair with a non-compact verdict and a
        // vanishing tail with a compact one.
        bool consistent = v == Verdict::Indeterminate || positive == (v == Verdict::NonCompact);
        add("tail_min_over_max", ratio, 0.5, consistent);
      } else {
        Rng rng(seed);
        double K0 = gamma_min();
        auto targets = parse_targets(std::to_string(std::max(1, cfg.n_cells / 4)));
        targets.erase(targets.begin());
        int violations = 0;
        double worst = -INFINITY;
        for (int trial = 0; trial < trials; ++trial) {
          auto f = random_step(rng, rng.integer(4, 64), 0.0, 1.0);
          auto lhs = rl_apply(a.alpha, f, targets, cfg);
          auto mf = maximal_function(f, targets);
          for (std::size_t k = 0; k < targets.size(); ++k) {
            double t = targets[k];
            double rhs = (2.0 / K0) * std::pow(t, a.alpha(t)) * mf.values[k] + cfg.abs_tol;
            worst = std::max(worst, lhs.values[k] - rhs);
            if (lhs.values[k] > rhs) ++violations;
          }
        }
        j["seed"] = seed;
        j["trials"] = trials;
        j["violations"] = violations;
        add("max_margin", worst, 0.0, violations == 0);
      }
      j["checks"] = checks;
      j["pass"] = all;
      emit(j.dump(2) + "\n", output, out);
      return 0;
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace varfrac::cli
