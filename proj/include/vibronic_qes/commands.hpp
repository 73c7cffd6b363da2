#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bethe.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "report.hpp"
#include "sl2.hpp"

namespace vibronic_qes::cli {

using report::Cell;
using report::Table;

enum class Command { exceptional, couplings, bethe, verify, oracle, sweep };
enum class OutputFormat { table, csv, json };

inline Command parse_command(const std::string& s) {
  if (s == "exceptional") return Command::exceptional;
  if (s == "couplings") return Command::couplings;
  if (s == "bethe") return Command::bethe;
  if (s == "verify") return Command::verify;
  if (s == "oracle") return Command::oracle;
  if (s == "sweep") return Command::sweep;
  throw std::invalid_argument("unknown command: " + s);
}

inline std::string command_name(Command c) {
  switch (c) {
    case Command::exceptional: return "exceptional";
    case Command::couplings: return "couplings";
    case Command::bethe: return "bethe";
    case Command::verify: return "verify";
    case Command::oracle: return "oracle";
    case Command::sweep: return "sweep";
  }
  return "?";
}

inline OutputFormat parse_format(const std::string& s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format: " + s);
}

struct NRange {
  int first = 0;
  int last = 3;
};

/// "A..B" or a single level "A".
inline NRange parse_n_range(const std::string& s) {
  NRange r;
  try {
    const auto dots = s.find("..");
    std::size_t pos = 0;
    if (dots == std::string::npos) {
      r.first = r.last = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
    } else {
      r.first = std::stoi(s.substr(0, dots), &pos);
      if (pos != dots) throw std::invalid_argument(s);
      const auto tail = s.substr(dots + 2);
      r.last = std::stoi(tail, &pos);
      if (pos != tail.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad n range '" + s + "', expected A..B");
  }
  if (r.first < 0 || r.last < r.first) throw std::invalid_argument("n range must satisfy 0 <= A <= B");
  return r;
}

/// Evenly spaced values; "start,stop,count".
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    return v;
  }
};

inline Grid parse_grid(const std::string& s) {
  Grid g;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> g.start >> c1 >> g.stop >> c2 >> g.count) || c1 != ',' || c2 != ',' || g.count < 1)
    throw std::invalid_argument("bad grid '" + s + "', expected start,stop,count");
  return g;
}

struct RunConfig {
  Command command = Command::exceptional;
  std::optional<PhysicalParams> physical;
  std::optional<ModelParams> model;
  NRange n;
  int basis = 200;
  double match_tolerance = 1e-7;
  OutputFormat format = OutputFormat::table;
  std::string out_path;
  bool include_unphysical = false;
  bool inject_fault = false;
  bool list_eigenvalues = false;
  bool other_half = false;  ///< channel-swapped parameters: the ψ₁-side exceptional levels
  std::optional<Grid> f_grid;
  std::optional<Grid> b_grid;

  void validate() const {
    if (physical && model) throw std::invalid_argument("give either physical or dimensionless parameters, not both");
    if (n.first < 0 || n.last < n.first) throw std::invalid_argument("n range is empty");
    if (basis < 8) throw std::invalid_argument("basis must be at least 8");
    if (physical) physical->validate();
    if (model) model->validate();
  }

  /// Dimensionless parameters of the run; default F = 0.8, b = 0.3, v = 0.
  ModelParams model_params() const {
    if (physical) return to_dimensionless(other_half ? channel_swap(*physical) : *physical);
    ModelParams mp = model.value_or(ModelParams{0.8, 0.3, 0.0});
    if (other_half) mp = ModelParams{-mp.F, mp.b - mp.F, mp.v};
    mp.v = std::abs(mp.v);
    return mp;
  }

  OracleConfig oracle_config() const { return OracleConfig{basis, match_tolerance}; }
};

/// Values given on the command line. Anything set here replaces the
/// corresponding value from the configuration file.
struct Overrides {
  std::optional<std::string> command;
  std::optional<double> F, b, v;
  std::optional<double> m, hbar, Omega, F1, F2, V;
  std::optional<std::string> n;
  std::optional<int> basis;
  std::optional<double> match_tolerance;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> f_grid, b_grid;
  bool include_unphysical = false;
  bool inject_fault = false;
  bool list_eigenvalues = false;
  bool other_half = false;
};

/// Reads a configuration file:
///   {"command": "...", "model": {"F":..,"b":..,"v":..} | "physical": {"m":..,"hbar":..,"Omega":..,
///    "F1":..,"F2":..,"V":..}, "n": "0..3", "basis": 200, "format": "table", "out": "...",
///    "include_unphysical": false, "f_grid": "a,b,k", "b_grid": "a,b,k"}
inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("command")) c.command = parse_command(j["command"].get<std::string>());
  if (j.contains("model")) {
    const auto& m = j["model"];
    c.model = ModelParams{m.value("F", 0.0), m.value("b", 0.0), m.value("v", 0.0)};
  }
  if (j.contains("physical")) {
    const auto& p = j["physical"];
    c.physical = PhysicalParams{p.value("m", 1.0),  p.value("hbar", 1.0), p.value("Omega", 1.0),
                                p.value("F1", 0.0), p.value("F2", 0.0),   p.value("V", 0.0)};
  }
  if (j.contains("n")) {
    if (j["n"].is_string())
      c.n = parse_n_range(j["n"].get<std::string>());
    else if (j["n"].is_number_integer())
      c.n = NRange{j["n"].get<int>(), j["n"].get<int>()};
    else
      c.n = NRange{j["n"].at(0).get<int>(), j["n"].at(1).get<int>()};
  }
  c.basis = j.value("basis", c.basis);
  c.match_tolerance = j.value("match_tolerance", c.match_tolerance);
  if (j.contains("format")) c.format = parse_format(j["format"].get<std::string>());
  c.out_path = j.value("out", std::string{});
  c.include_unphysical = j.value("include_unphysical", false);
  c.other_half = j.value("other_half", false);
  if (j.contains("f_grid")) c.f_grid = parse_grid(j["f_grid"].get<std::string>());
  if (j.contains("b_grid")) c.b_grid = parse_grid(j["b_grid"].get<std::string>());
  return c;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return config_from_json(nlohmann::json::parse(in));
}

inline void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.command) c.command = parse_command(*o.command);
  const bool dimless = o.F || o.b || o.v;
  const bool phys = o.m || o.hbar || o.Omega || o.F1 || o.F2 || o.V;
  if (dimless && phys) throw std::invalid_argument("give either physical or dimensionless parameters, not both");
  if (dimless) {
    if (c.physical) throw std::invalid_argument("dimensionless flags conflict with the physical block of the config");
    ModelParams mp = c.model.value_or(ModelParams{0.8, 0.3, 0.0});
    if (o.F) mp.F = *o.F;
    if (o.b) mp.b = *o.b;
    if (o.v) mp.v = *o.v;
    c.model = mp;
  }
  if (phys) {
    if (c.model) throw std::invalid_argument("physical flags conflict with the dimensionless block of the config");
    PhysicalParams p = c.physical.value_or(PhysicalParams{});
    if (o.m) p.m = *o.m;
    if (o.hbar) p.hbar = *o.hbar;
    if (o.Omega) p.Omega = *o.Omega;
    if (o.F1) p.F1 = *o.F1;
    if (o.F2) p.F2 = *o.F2;
    if (o.V) p.V = *o.V;
    c.physical = p;
  }
  if (o.n) c.n = parse_n_range(*o.n);
  if (o.basis) c.basis = *o.basis;
  if (o.match_tolerance) c.match_tolerance = *o.match_tolerance;
  if (o.format) c.format = parse_format(*o.format);
  if (o.out) c.out_path = *o.out;
  if (o.f_grid) c.f_grid = parse_grid(*o.f_grid);
  if (o.b_grid) c.b_grid = parse_grid(*o.b_grid);
  c.include_unphysical |= o.include_unphysical;
  c.inject_fault |= o.inject_fault;
  c.list_eigenvalues |= o.list_eigenvalues;
  c.other_half |= o.other_half;
  c.validate();
}

namespace detail {

inline std::string format_complex(std::complex<double> z, int digits = 17) {
  if (z.imag() == 0.0) return report::format_double(z.real(), digits);
  std::string s = report::format_double(z.real(), digits);
  s += z.imag() < 0 ? "-" : "+";
  s += report::format_double(std::abs(z.imag()), digits) + "i";
  return s;
}

inline std::string format_roots(const std::vector<std::complex<double>>& roots) {
  std::string s;
  for (std::size_t i = 0; i < roots.size(); ++i) s += (i ? ";" : "") + format_complex(roots[i]);
  return s;
}

inline void add_model_meta(Table& t, const RunConfig& cfg, const ModelParams& mp) {
  t.meta.emplace_back("F", mp.F);
  t.meta.emplace_back("b", mp.b);
  t.meta.emplace_back("v", mp.v);
  if (cfg.other_half) t.meta.emplace_back("other_half", true);
}

inline const char* kFlatSlopeWarning =
    "F = 0: the algebraization conditions are degenerate (all reduce to 0 = 0); E2 = n is imposed, not derived";

/// Ĥ₄ y for a possibly complex v², relative to the size of y.
inline double h4_relative_residual(const RealOperator& h4_without_coupling, std::complex<double> v_squared,
                                   const ComplexPolynomial& y) {
  const auto r = vibronic_qes::apply(h4_without_coupling, y) - v_squared * y;
  return r.max_abs_coeff() / std::max(1.0, y.max_abs_coeff());
}

}  // namespace detail

inline Table cmd_exceptional(const RunConfig& cfg) {
  Table t;
  t.command = "exceptional";
  const ModelParams mp = cfg.model_params();
  detail::add_model_meta(t, cfg, mp);
  t.columns = {"n", "epsilon", "E_over_hbar_omega"};
  const bool phys = cfg.physical.has_value();
  if (phys) t.columns.push_back("E");
  for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
    std::vector<Cell> row{std::int64_t{n}};
    if (phys) {
      const auto p = cfg.other_half ? channel_swap(*cfg.physical) : *cfg.physical;
      const auto ee = exceptional_energy(n, p);
      row.push_back(ee.epsilon);
      row.push_back(ee.epsilon - 0.5);
      row.push_back(ee.E);
    } else {
      const double eps = exceptional_epsilon(n, mp.b);
      row.push_back(eps);
      row.push_back(eps - 0.5);
    }
    t.add_row(std::move(row));
  }
  return t;
}

inline Table cmd_couplings(const RunConfig& cfg) {
  Table t;
  t.command = "couplings";
  const ModelParams mp = cfg.model_params();
  detail::add_model_meta(t, cfg, mp);
  t.columns = {"n", "v_squared", "v_squared_imag", "physical", "degree_deficient", "multiplicity", "h4_residual",
               "roots"};
  if (mp.F == 0.0) t.warnings.emplace_back(detail::kFlatSlopeWarning);
  for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
    const auto lp = level_params(n, mp);
    const auto h4 = build_h4(lp, ModelParams{mp.F, mp.b, 0.0});
    for (const auto& a : allowed_couplings(n, mp)) {
      const double res = detail::h4_relative_residual(h4, a.v_squared, a.kernel_poly);
      if (!(res <= 1e-9)) {
        t.ok = false;
        t.warnings.push_back("n=" + std::to_string(n) + ": kernel polynomial residual " +
                             report::format_double(res, 3) + " exceeds 1e-9");
      }
      if (!a.physical && !cfg.include_unphysical) continue;
      t.add_row({std::int64_t{n}, a.v_squared.real(), a.v_squared.imag(), a.physical, a.degree_deficient,
                 std::int64_t{a.multiplicity}, res, detail::format_roots(a.roots())});
    }
  }
  return t;
}

inline Table cmd_bethe(const RunConfig& cfg) {
  Table t;
  t.command = "bethe";
  const ModelParams mp = cfg.model_params();
  detail::add_model_meta(t, cfg, mp);
  t.columns = {"n",           "solution",      "roots",     "max_residue",  "implied_v_squared",
               "implied_v_squared_imag", "constraint_residual", "converged", "physical", "iterations"};
  if (mp.F == 0.0) t.warnings.emplace_back(detail::kFlatSlopeWarning);
  for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
    const auto search = solve_bethe(n, level_params(n, mp), mp);
    if (search.solutions.empty())
      t.warnings.push_back("n=" + std::to_string(n) + ": no converged root set (" +
                           std::to_string(search.seeds_tried) + " seeds)");
    std::int64_t idx = 0;
    for (const auto& s : search.solutions)
      t.add_row({std::int64_t{n}, idx++, detail::format_roots(s.roots), s.max_residue, s.implied_v_squared.real(),
                 s.implied_v_squared.imag(), s.constraint_residual, s.converged, s.physical(),
                 std::int64_t{s.iterations}});
  }
  return t;
}

inline Table cmd_oracle(const RunConfig& cfg) {
  Table t;
  t.command = "oracle";
  const ModelParams mp = cfg.model_params();
  detail::add_model_meta(t, cfg, mp);
  const auto oc = cfg.oracle_config();
  const auto rep = spectrum(mp, oc);
  t.meta.emplace_back("basis", std::int64_t{cfg.basis});
  t.meta.emplace_back("trusted_limit", rep.trusted_limit);
  if (cfg.list_eigenvalues) {
    t.columns = {"index", "lambda", "trusted"};
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
      t.add_row({static_cast<std::int64_t>(i), rep.eigenvalues[i], rep.eigenvalues[i] <= rep.trusted_limit});
    return t;
  }
  t.columns = {"n", "target", "nearest", "gap", "matched"};
  for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
    try {
      const auto m = match_exceptional(rep, n, oc);
      t.add_row({std::int64_t{n}, m.target, m.nearest, m.gap, m.matched});
    } catch (const std::out_of_range& e) {
      t.warnings.push_back("n=" + std::to_string(n) + ": " + e.what());
    }
  }
  return t;
}

/// Runs every internal consistency check for the configured parameters.
/// With inject_fault the vibronic operator is perturbed by 1e-3 z so that
/// the operator-level checks must fail.
inline Table cmd_verify(const RunConfig& cfg) {
  Table t;
  t.command = "verify";
  const ModelParams mp = cfg.model_params();
  detail::add_model_meta(t, cfg, mp);
  t.columns = {"check", "passed", "metric", "tolerance", "detail"};
  if (mp.F == 0.0) t.warnings.emplace_back(detail::kFlatSlopeWarning);
  if (cfg.inject_fault) t.warnings.emplace_back("fault injected into the fourth-order operator");

  auto h4 = [&](const LevelParams& lp, const ModelParams& p) {
    auto op = build_h4(lp, p);
    if (cfg.inject_fault) op += RealOperator::multiply(RealPolynomial{0.0, 1e-3});
    return op;
  };
  auto record = [&](const std::string& name, double metric, double tol, const std::string& detail) {
    const bool pass = metric <= tol;
    t.ok = t.ok && pass;
    t.add_row({name, pass, metric, tol, detail});
  };

  double worst = 0.0;
  for (int n = 0; n <= 10; ++n) {
    const auto g = make_generators(n);
    worst = std::max(worst, relative_distance(commutator(g.jplus, g.jminus), -2.0 * g.jzero));
    worst = std::max(worst, relative_distance(commutator(g.jplus, g.jzero), -1.0 * g.jplus));
    worst = std::max(worst, relative_distance(commutator(g.jminus, g.jzero), g.jminus));
  }
  record("sl2_commutators", worst, 1e-12, "n=0..10");

  worst = 0.0;
  const RealOperator zd3({RealPolynomial{}, RealPolynomial{}, RealPolynomial{}, RealPolynomial{0.0, 1.0}});
  for (int n = 0; n <= 10; ++n) {
    const auto g = make_generators(n);
    const auto rhs = compose(g.jzero, compose(g.jminus, g.jminus)) + (n / 2.0) * RealOperator::derivative(2);
    worst = std::max(worst, relative_distance(rhs, zd3));
  }
  record("third_derivative_identity", worst, 1e-12, "n=0..10");

  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    QesCoefficients k{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    try {
      (void)build_general_qes(k, trial % 11);
    } catch (const std::logic_error&) {
      ++failures;
    }
  }
  record("general_qes_closed_form", failures, 0, "100 random coefficient sets");

  worst = 0.0;
  std::string energies;
  for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
    const auto rep = qes_condition_check(h4(level_params(n, mp), mp), n);
    for (const auto& c : rep.conditions)
      worst = std::max(worst, c.residual / std::max({1.0, std::abs(c.lhs), std::abs(c.rhs)}));
    if (const auto e2 = solve_exceptional_e2(n, mp)) worst = std::max(worst, std::abs(*e2 - n) / std::max(1, n));
  }
  record("algebraization_conditions", worst, 1e-12, "E2 = n at every level");

  worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(trial % 7) + 1);
    for (auto& x : c) x = u(rng);
    const RealPolynomial y(c);
    const auto lp = LevelParams{0, u(rng), u(rng)};
    const auto my = vibronic_qes::apply(channel2_operator(lp), y);
    const auto expected = vibronic_qes::apply(channel1_operator(lp, mp), my) - (mp.v * mp.v) * y;
    worst = std::max(worst, relative_distance(vibronic_qes::apply(h4(lp, mp), y), expected));
  }
  record("decoupling_identity", worst, 1e-10, "H4 y = L1(M y) - v^2 y on 50 random polynomials");

  worst = 0.0;
  double bethe_worst = 0.0, constraint_worst = 0.0, gap_worst = 0.0;
  int bethe_checked = 0, oracle_checked = 0;
  const auto oc = cfg.oracle_config();
  for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
    const auto lp = level_params(n, mp);
    const auto op = h4(lp, ModelParams{mp.F, mp.b, 0.0});
    for (const auto& a : allowed_couplings(n, mp)) {
      worst = std::max(worst, detail::h4_relative_residual(op, a.v_squared, a.kernel_poly));
      if (!a.physical) continue;
      ModelParams at = mp;
      at.v = std::sqrt(a.v_squared.real());
      if (n >= 1 && !a.degree_deficient) {
        ++bethe_checked;
        double best = 1e300, cres = 1e300;
        for (const auto& s : solve_bethe(n, lp, at).solutions) {
          const double d = relative_distance(s.ansatz, a.kernel_poly);
          if (d < best) best = d, cres = s.constraint_residual;
        }
        bethe_worst = std::max(bethe_worst, best);
        constraint_worst = std::max(constraint_worst, cres);
      }
      if (n + 20 <= oc.basis_size) {
        ++oracle_checked;
        gap_worst = std::max(gap_worst, match_exceptional(spectrum(at, oc), n, oc).gap);
      }
    }
  }
  record("kernel_polynomials", worst, 1e-9, "H4 annihilates every projection eigenvector");
  record("bethe_vs_kernel", bethe_worst, 1e-7, std::to_string(bethe_checked) + " physical kernels");
  record("restriction", constraint_worst, 1e-9, "v^2 from projection satisfies the parameter restriction");
  record("oracle_match", gap_worst, oc.match_tolerance,
         std::to_string(oracle_checked) + " couplings, basis " + std::to_string(oc.basis_size));
  return t;
}

/// Worker count for sweeps: VIBRONIC_QES_THREADS if set, else hardware.
inline unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VIBRONIC_QES_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

inline Table cmd_sweep(const RunConfig& cfg) {
  Table t;
  t.command = "sweep";
  const ModelParams base = cfg.model_params();
  const Grid fg = cfg.f_grid.value_or(Grid{base.F, base.F, 1});
  const Grid bg = cfg.b_grid.value_or(Grid{base.b, base.b, 1});
  t.meta.emplace_back("basis", std::int64_t{cfg.basis});
  t.columns = {"F", "b", "n", "v_squared", "lambda_gap", "matched", "status"};

  struct Point {
    double F, b;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> warnings;
    bool ok = true;
  };
  std::vector<Point> points;
  for (double F : fg.values())
    for (double b : bg.values()) points.push_back(Point{F, b, {}, {}, true});

  const auto oc = cfg.oracle_config();
  auto work = [&](Point& p) {
    const ModelParams mp{p.F, p.b, 0.0};
    if (p.F == 0.0) p.warnings.push_back("F=0, b=" + report::format_double(p.b, 6) + ": " + detail::kFlatSlopeWarning);
    for (int n = cfg.n.first; n <= cfg.n.last; ++n) {
      try {
        for (const auto& a : allowed_couplings(n, mp)) {
          if (!a.physical && !cfg.include_unphysical) continue;
          if (!a.physical) {
            p.rows.push_back({p.F, p.b, std::int64_t{n}, a.v_squared.real(), -1.0, false, std::string("unphysical")});
            continue;
          }
          ModelParams at = mp;
          at.v = std::sqrt(a.v_squared.real());
          const auto m = match_exceptional(spectrum(at, oc), n, oc);
          p.rows.push_back({p.F, p.b, std::int64_t{n}, a.v_squared.real(), m.gap, m.matched, std::string("ok")});
          if (!m.matched) p.ok = false;
        }
      } catch (const std::exception& e) {
        p.ok = false;
        p.rows.push_back({p.F, p.b, std::int64_t{n}, 0.0, -1.0, false, std::string("error: ") + e.what()});
      }
    }
  };

  const unsigned workers = std::min<unsigned>(sweep_threads(), static_cast<unsigned>(points.size()));
  if (workers <= 1) {
    for (auto& p : points) work(p);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) work(points[i]);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& p : points) {
    for (auto& r : p.rows) t.add_row(std::move(r));
    for (auto& w : p.warnings) t.warnings.push_back(std::move(w));
    t.ok = t.ok && p.ok;
  }
  return t;
}

inline Table run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case Command::exceptional: return cmd_exceptional(cfg);
    case Command::couplings: return cmd_couplings(cfg);
    case Command::bethe: return cmd_bethe(cfg);
    case Command::verify: return cmd_verify(cfg);
    case Command::oracle: return cmd_oracle(cfg);
    case Command::sweep: return cmd_sweep(cfg);
  }
  throw std::logic_error("unhandled command");
}

inline std::string render(const Table& t, OutputFormat f) {
  switch (f) {
    case OutputFormat::table: return report::to_text(t);
    case OutputFormat::csv: return report::to_csv(t);
    case OutputFormat::json: return report::to_json(t).dump(2) + "\n";
  }
  return {};
}

}  // namespace vibronic_qes::cli
