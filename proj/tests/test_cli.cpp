#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "vibronic_qes/commands.hpp"

using namespace vibronic_qes;
using namespace vibronic_qes::cli;

namespace {

RunConfig dimensionless(Command c, double F, double b, double v, int n0, int n1) {
  RunConfig cfg;
  cfg.command = c;
  cfg.model = ModelParams{F, b, v};
  cfg.n = NRange{n0, n1};
  return cfg;
}

std::size_t column(const report::Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  throw std::out_of_range(name);
}

double as_double(const report::Cell& c) { return std::get<double>(c); }

}  // namespace

TEST(Cli, ParseRanges) {
  EXPECT_EQ(parse_n_range("0..3").first, 0);
  EXPECT_EQ(parse_n_range("0..3").last, 3);
  EXPECT_EQ(parse_n_range("4").first, 4);
  EXPECT_EQ(parse_n_range("4").last, 4);
  EXPECT_THROW(parse_n_range("3..1"), std::invalid_argument);
  EXPECT_THROW(parse_n_range("a..b"), std::invalid_argument);
  EXPECT_THROW(parse_n_range("-1..2"), std::invalid_argument);
  EXPECT_THROW(parse_n_range("1..2x"), std::invalid_argument);
  const auto g = parse_grid("0.5,1.5,3").values();
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
  EXPECT_THROW(parse_grid("1,2"), std::invalid_argument);
  EXPECT_THROW(parse_command("solve"), std::invalid_argument);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}

TEST(Cli, ExceptionalDimensionless) {
  const auto t = run(dimensionless(Command::exceptional, 0.8, 0.6, 0.0, 0, 3));
  ASSERT_EQ(t.rows.size(), 4u);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(std::get<std::int64_t>(t.rows[n][0]), n);
    EXPECT_DOUBLE_EQ(as_double(t.rows[n][1]), n + 1 - 0.18);
  }
}

TEST(Cli, ExceptionalPhysical) {
  RunConfig cfg;
  cfg.command = Command::exceptional;
  cfg.physical = PhysicalParams{1, 1, 1, 0.2, 1.0, 0.3};
  cfg.n = NRange{0, 2};
  const auto t = run(cfg);
  ASSERT_EQ(t.columns.back(), "E");
  EXPECT_NEAR(as_double(t.rows[2][column(t, "E")]), 2.5 - 0.5, 1e-14);
  EXPECT_NEAR(as_double(t.rows[2][column(t, "epsilon")]), 3.0 - 0.5, 1e-14);
}

TEST(Cli, CouplingsMatchClosedFormAtFirstLevel) {
  // Rows reproduce the library kernels one for one, with Ĥ₄ annihilating each.
  const double F = 1.0, b = 0.0;
  auto cfg = dimensionless(Command::couplings, F, b, 0.0, 1, 1);
  cfg.include_unphysical = true;
  const auto t = run(cfg);
  EXPECT_TRUE(t.ok);
  ASSERT_EQ(t.rows.size(), 2u);
  const auto ref = allowed_couplings(1, ModelParams{F, b, 0});
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(as_double(t.rows[i][column(t, "v_squared")]), ref[i].v_squared.real());
    EXPECT_LT(as_double(t.rows[i][column(t, "h4_residual")]), 1e-12);
  }
}

TEST(Cli, CouplingsFilterUnphysical) {
  auto cfg = dimensionless(Command::couplings, 1.3, 0.4, 0.0, 0, 5);
  const auto phys = run(cfg);
  cfg.include_unphysical = true;
  const auto all = run(cfg);
  EXPECT_LE(phys.rows.size(), all.rows.size());
  for (const auto& r : phys.rows) EXPECT_TRUE(std::get<bool>(r[column(phys, "physical")]));
  std::size_t total = 0;
  for (int n = 0; n <= 5; ++n) total += allowed_couplings(n, ModelParams{1.3, 0.4, 0}).size();
  EXPECT_EQ(all.rows.size(), total);
}

TEST(Cli, FlatSlopeWarns) {
  for (auto c : {Command::couplings, Command::bethe, Command::verify}) {
    const auto t = run(dimensionless(c, 0.0, 0.5, 0.2, 0, 2));
    ASSERT_FALSE(t.warnings.empty()) << command_name(c);
    EXPECT_NE(t.warnings.front().find("F = 0"), std::string::npos);
  }
}

TEST(Cli, BetheRowsSatisfyEquations) {
  const auto t = run(dimensionless(Command::bethe, 0.9, 0.2, 0.5, 1, 3));
  EXPECT_TRUE(t.ok);
  EXPECT_FALSE(t.rows.empty());
  for (const auto& r : t.rows) {
    EXPECT_LT(as_double(r[column(t, "max_residue")]), 1e-9);
    EXPECT_TRUE(std::get<bool>(r[column(t, "converged")]));
  }
}

TEST(Cli, OracleMatchesAndLists) {
  auto cfg = dimensionless(Command::oracle, 1.0, 0.0, 1.0, 1, 1);
  const auto t = run(cfg);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_TRUE(std::get<bool>(t.rows[0][column(t, "matched")]));
  cfg.list_eigenvalues = true;
  cfg.basis = 30;
  const auto l = run(cfg);
  EXPECT_EQ(l.rows.size(), 60u);
}

TEST(Cli, VerifyPassesAndDetectsFault) {
  auto cfg = dimensionless(Command::verify, 0.9, 0.35, 0.0, 0, 2);
  const auto good = run(cfg);
  EXPECT_TRUE(good.ok) << report::to_text(good);
  cfg.inject_fault = true;
  const auto bad = run(cfg);
  EXPECT_FALSE(bad.ok);
  int failed = 0;
  for (const auto& r : bad.rows)
    if (!std::get<bool>(r[1])) ++failed;
  EXPECT_GE(failed, 2);
}

TEST(Cli, JsonRoundTripIsExact) {
  auto cfg = dimensionless(Command::couplings, 1.1, -0.3, 0.0, 0, 3);
  cfg.include_unphysical = true;
  const auto t = run(cfg);
  const auto back = report::from_json(nlohmann::json::parse(render(t, OutputFormat::json)));
  EXPECT_EQ(back, t);
}

TEST(Cli, CsvRoundTripPreservesDoubles) {
  const auto t = run(dimensionless(Command::bethe, 0.7, 0.45, 0.0, 1, 3));
  const auto parsed = report::parse_csv(render(t, OutputFormat::csv));
  ASSERT_EQ(parsed.size(), t.rows.size() + 1);
  EXPECT_EQ(parsed[0], t.columns);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      if (const auto* d = std::get_if<double>(&t.rows[i][j]))
        EXPECT_EQ(std::stod(parsed[i + 1][j]), *d);
      else
        EXPECT_EQ(parsed[i + 1][j], report::format_cell(t.rows[i][j], 17));
    }
}

TEST(Cli, CsvEscaping) {
  EXPECT_EQ(report::csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  const auto rows = report::parse_csv("x,\"a,b\",\"q\"\"\"\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], "a,b");
  EXPECT_EQ(rows[0][2], "q\"");
}

TEST(Cli, TextOutputShowsStatus) {
  const auto t = run(dimensionless(Command::exceptional, 0.5, 0.5, 0.0, 0, 1));
  const auto text = render(t, OutputFormat::table);
  EXPECT_NE(text.find("status: ok"), std::string::npos);
  EXPECT_NE(text.find("epsilon"), std::string::npos);
}

TEST(Cli, ConfigFileAndOverrides) {
  const auto path = std::filesystem::temp_directory_path() / "vibronic_qes_cfg_test.json";
  {
    std::ofstream out(path);
    out << R"({"command": "couplings", "model": {"F": 0.5, "b": 0.25, "v": 0.1}, "n": "1..2", "basis": 150})";
  }
  RunConfig cfg = load_config_file(path.string());
  Overrides o;
  o.b = 0.75;
  o.n = "0..4";
  apply_overrides(cfg, o);
  EXPECT_EQ(cfg.command, Command::couplings);
  EXPECT_DOUBLE_EQ(cfg.model->F, 0.5);
  EXPECT_DOUBLE_EQ(cfg.model->b, 0.75);
  EXPECT_EQ(cfg.n.last, 4);
  EXPECT_EQ(cfg.basis, 150);

  Overrides phys;
  phys.F2 = 1.0;
  EXPECT_THROW(apply_overrides(cfg, phys), std::invalid_argument);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config_file(path.string()), std::invalid_argument);
}

TEST(Cli, PhysicalAndDimensionlessAgree) {
  RunConfig a;
  a.command = Command::couplings;
  a.physical = PhysicalParams{2.0, 1.0, 1.5, 0.4, 1.2, 0.0};
  a.n = NRange{0, 3};
  a.include_unphysical = true;
  const auto mp = to_dimensionless(*a.physical);
  auto b = dimensionless(Command::couplings, mp.F, mp.b, 0.0, 0, 3);
  b.include_unphysical = true;
  EXPECT_EQ(run(a).rows, run(b).rows);
}

TEST(Cli, OtherHalfSwapsChannels) {
  RunConfig cfg;
  cfg.physical = PhysicalParams{1, 1, 1, 0.3, 1.1, 0.0};
  cfg.other_half = true;
  const auto mp = cfg.model_params();
  const auto ref = to_dimensionless(channel_swap(*cfg.physical));
  EXPECT_DOUBLE_EQ(mp.F, ref.F);
  EXPECT_DOUBLE_EQ(mp.b, ref.b);

  RunConfig d;
  d.model = ModelParams{0.8, 1.1, 0.0};
  d.other_half = true;
  EXPECT_DOUBLE_EQ(d.model_params().F, -0.8);
  EXPECT_NEAR(d.model_params().b, 0.3, 1e-15);
}

TEST(Cli, SweepIsDeterministicAcrossThreadCounts) {
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.f_grid = Grid{0.5, 1.5, 3};
  cfg.b_grid = Grid{-0.5, 0.5, 2};
  cfg.n = NRange{0, 2};
  cfg.basis = 120;
  ::setenv("VIBRONIC_QES_THREADS", "1", 1);
  EXPECT_EQ(sweep_threads(), 1u);
  const auto serial = run(cfg);
  ::setenv("VIBRONIC_QES_THREADS", "4", 1);
  const auto parallel = run(cfg);
  ::unsetenv("VIBRONIC_QES_THREADS");
  EXPECT_EQ(serial.rows, parallel.rows);
  EXPECT_TRUE(serial.ok);
  EXPECT_FALSE(serial.rows.empty());
  for (const auto& r : serial.rows) EXPECT_EQ(std::get<std::string>(r[column(serial, "status")]), "ok");
}

TEST(Cli, SweepRecordsFlatSlopeWarning) {
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.f_grid = Grid{0.0, 0.0, 1};
  cfg.b_grid = Grid{0.3, 0.3, 1};
  cfg.n = NRange{0, 1};
  cfg.basis = 60;
  const auto t = run(cfg);
  EXPECT_FALSE(t.warnings.empty());
}

TEST(Cli, ExceptionalLinearLadder) {
  const auto t = run(dimensionless(Command::exceptional, 0.5, 0.0, 0.0, 0, 3));
  for (int n = 0; n <= 3; ++n) EXPECT_DOUBLE_EQ(as_double(t.rows[n][column(t, "epsilon")]), n + 1.0);
  const auto s = run(dimensionless(Command::exceptional, 0.5, 2.0, 0.0, 0, 0));
  EXPECT_DOUBLE_EQ(as_double(s.rows[0][column(s, "epsilon")]), -1.0);
}

TEST(Cli, CouplingsExamples) {
  const auto first = run(dimensionless(Command::couplings, 1.0, 0.0, 0.0, 1, 1));
  ASSERT_EQ(first.rows.size(), 2u);
  EXPECT_NEAR(as_double(first.rows[0][column(first, "v_squared")]), 0.0, 1e-14);
  EXPECT_NEAR(std::stod(std::get<std::string>(first.rows[0][column(first, "roots")])), 0.0, 1e-14);
  EXPECT_NEAR(as_double(first.rows[1][column(first, "v_squared")]), 1.0, 1e-14);
  EXPECT_NEAR(std::stod(std::get<std::string>(first.rows[1][column(first, "roots")])), -1.0, 1e-14);

  const auto ground = run(dimensionless(Command::couplings, 1.0, 0.0, 0.0, 0, 0));
  ASSERT_EQ(ground.rows.size(), 1u);
  EXPECT_EQ(as_double(ground.rows[0][column(ground, "v_squared")]), 0.0);

  auto cfg = dimensionless(Command::couplings, 0.5, 0.2, 0.0, 2, 2);
  cfg.include_unphysical = true;
  const auto second = run(cfg);
  EXPECT_TRUE(second.ok);
  ASSERT_EQ(second.rows.size(), 3u);
  for (const auto& r : second.rows) EXPECT_LT(as_double(r[column(second, "h4_residual")]), 1e-9);
}

TEST(Cli, VerifyDefaultsAndFlatSlopePass) {
  RunConfig cfg;
  cfg.command = Command::verify;
  const auto t = run(cfg);
  EXPECT_TRUE(t.ok) << report::to_text(t);
  const auto flat = run(dimensionless(Command::verify, 0.0, 0.4, 0.3, 0, 3));
  EXPECT_TRUE(flat.ok) << report::to_text(flat);
  EXPECT_FALSE(flat.warnings.empty());
}

TEST(Cli, SinglePointSweepMatchesCouplingsAndOracle) {
  const double F = 0.9, b = 0.35;
  RunConfig cfg;
  cfg.command = Command::sweep;
  cfg.f_grid = Grid{F, F, 1};
  cfg.b_grid = Grid{b, b, 1};
  cfg.n = NRange{0, 3};
  const auto sweep = run(cfg);
  const auto couplings = run(dimensionless(Command::couplings, F, b, 0.0, 0, 3));
  ASSERT_EQ(sweep.rows.size(), couplings.rows.size());
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    EXPECT_EQ(sweep.rows[i][column(sweep, "n")], couplings.rows[i][column(couplings, "n")]);
    const double v2 = as_double(couplings.rows[i][column(couplings, "v_squared")]);
    EXPECT_EQ(as_double(sweep.rows[i][column(sweep, "v_squared")]), v2);
    const int n = static_cast<int>(std::get<std::int64_t>(sweep.rows[i][column(sweep, "n")]));
    const auto oracle = run(dimensionless(Command::oracle, F, b, std::sqrt(v2), n, n));
    EXPECT_EQ(as_double(sweep.rows[i][column(sweep, "lambda_gap")]), as_double(oracle.rows[0][column(oracle, "gap")]));
  }
}
