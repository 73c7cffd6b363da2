#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vibronic_qes/commands.hpp"

using namespace vibronic_qes;

int main(int argc, char** argv) {
  CLI::App app{"Quasi-exactly-solvable levels of the two-channel harmonic vibronic model"};
  app.set_help_all_flag("--help-all");

  cli::Overrides o;
  std::string command;
  std::string config_path;
  app.add_option("command", command, "exceptional | couplings | bethe | verify | oracle | sweep")->required();
  auto opt = [&](const char* name, std::optional<double>& target, const char* help) {
    app.add_option_function<double>(name, [&target](double x) { target = x; }, help);
  };
  opt("--f", o.F, "dimensionless slope difference F");
  opt("--b", o.b, "dimensionless channel-2 shift b");
  opt("--v", o.v, "dimensionless coupling v");
  opt("--m", o.m, "mass (physical input)");
  opt("--hbar", o.hbar, "Planck constant (physical input)");
  opt("--omega", o.Omega, "oscillator frequency (physical input)");
  opt("--f1", o.F1, "channel-1 slope (physical input)");
  opt("--f2", o.F2, "channel-2 slope (physical input)");
  opt("--V", o.V, "coupling (physical input)");
  app.add_option_function<std::string>("--n", [&](const std::string& s) { o.n = s; }, "level range A..B");
  app.add_option_function<int>("--basis", [&](int x) { o.basis = x; }, "oscillator basis size per channel");
  app.add_option_function<double>("--match-tol", [&](double x) { o.match_tolerance = x; },
                                  "oracle match tolerance");
  app.add_option_function<std::string>("--format", [&](const std::string& s) { o.format = s; },
                                       "table | csv | json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option_function<std::string>("--out", [&](const std::string& s) { o.out = s; }, "write output to PATH");
  app.add_option("--config", config_path, "JSON configuration file; flags override its values");
  app.add_option_function<std::string>("--f-grid", [&](const std::string& s) { o.f_grid = s; },
                                       "sweep grid start,stop,count for F");
  app.add_option_function<std::string>("--b-grid", [&](const std::string& s) { o.b_grid = s; },
                                       "sweep grid start,stop,count for b");
  app.add_flag("--include-unphysical", o.include_unphysical, "keep complex or negative v^2 solutions");
  app.add_flag("--inject-fault", o.inject_fault, "perturb the operator so that verify must fail");
  app.add_flag("--list-eigenvalues", o.list_eigenvalues, "oracle: print the full spectrum");
  app.add_flag("--other-half", o.other_half, "use channel-swapped parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    o.command = command;
    cli::RunConfig cfg = config_path.empty() ? cli::RunConfig{} : cli::load_config_file(config_path);
    cli::apply_overrides(cfg, o);
    const auto table = cli::run(cfg);
    const auto text = cli::render(table, cfg.format);
    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out_path);
      if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
      out << text;
    }
    if (cfg.format == cli::OutputFormat::csv)
      for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
    return table.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
