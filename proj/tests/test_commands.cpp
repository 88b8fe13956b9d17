#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treslev/app/cli.hpp"

using namespace treslev;
using namespace treslev::app;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string kConfig = TRESLEV_DATA_DIR "/projects.json";

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), {"--config", kConfig});
  return run(args);
}

nlohmann::json json_of(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "json"});
  const CliResult r = cli(std::move(args));
  REQUIRE(r.exit_code == 0);
  return nlohmann::json::parse(r.out);
}

const nlohmann::json& table(const nlohmann::json& report, std::string_view key) {
  for (const auto& t : report["tables"]) {
    if (t["key"] == key) return t;
  }
  FAIL("no table " << key);
  return report;
}

const nlohmann::json& row(const nlohmann::json& t, std::string_view key) {
  for (const auto& r : t["rows"]) {
    if (r["key"] == key) return r["values"];
  }
  FAIL("no row " << key);
  return t;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("display rounding", "[report]") {
  CHECK(display_round(0.075, 2) == 0.08);
  CHECK(display_round(0.18666, 2) == 0.19);
  CHECK(display_round(-0.125, 2) == -0.13);
  CHECK(display_round(307692.3077, 0) == 307692);
  CHECK(display_round(2.5, 0) == 3);
  CHECK(format_cell(fixed2(-0.001)) == "0.00");
  CHECK(format_cell(fixed3(1.0588235)) == "1.059");
  CHECK(format_cell(integer(1e6)) == "1000000");
  CHECK(format_cell(significant(-1e-6)) == "-1e-06");
  CHECK(format_cell(Cell::empty()) == "-");
}

TEST_CASE("report renderers", "[report]") {
  Report r{"x", {{"t", "Titre", {"a", "b,c"}, {{"k", "Libellé", {fixed2(1.234), Cell::empty()}}}}}};
  CHECK(render(r, OutputFormat::Csv) == "table,row,column,value\nt,k,a,1.234\n");
  const auto j = nlohmann::json::parse(render(r, OutputFormat::Json));
  CHECK(j["tables"][0]["rows"][0]["values"][1].is_null());
  const std::string text = render(r, OutputFormat::Table);
  CHECK_THAT(text, ContainsSubstring("Libellé  1.23    -"));
}

TEST_CASE("analyze projet 1", "[cli]") {
  const auto j = json_of({"analyze", "projet 1"});
  const auto& brk = table(j, "liquidity_break");
  CHECK(row(brk, "immediate")[0] == 250'000);
  CHECK(row(brk, "term")[0] == 1'000'000);
  CHECK(row(brk, "immediate")[1].get<double>() == Catch::Approx(0.8333).margin(1e-4));
  CHECK(row(brk, "term")[1].get<double>() == Catch::Approx(3.3333).margin(1e-4));
  const auto& lev = table(j, "leverage");
  CHECK(row(lev, "immediate")[0].get<double>() == Catch::Approx(1.116).margin(5e-4));
  CHECK(row(lev, "term")[0].get<double>() == Catch::Approx(1.714).margin(5e-4));
}

TEST_CASE("analyze projet 2 thresholds", "[cli]") {
  const auto j = json_of({"analyze", "projet 2"});
  const auto& brk = table(j, "liquidity_break");
  CHECK(row(brk, "immediate")[0] == 300'000);
  CHECK(row(brk, "term")[0] == 1'500'000);
}

TEST_CASE("analyze exit codes", "[cli][errors]") {
  CHECK(cli({"analyze", "projet 9"}).exit_code == kExitConfig);
  CHECK(run({"--config", "/nonexistent.json", "analyze", "x"}).exit_code == kExitConfig);
  CHECK(run({"analyze", "x"}).exit_code == kExitConfig);

  const auto dir = std::filesystem::temp_directory_path();
  const std::string bad = (dir / "treslev_nonviable.json").string();
  std::ofstream(bad) << R"({"projects": [
    {"name": "loss", "unit_price": 10, "unit_variable_cost": 12, "fixed_cash": 1, "fixed_noncash": 1, "capacity": 10},
    {"name": "edge", "unit_price": 20, "unit_variable_cost": 12, "fixed_cash": 80, "fixed_noncash": 0, "capacity": 20,
     "reference_volume": 10},
    {"name": "flat", "unit_price": 20, "unit_variable_cost": 12, "fixed_cash": 80, "fixed_noncash": 0, "capacity": 20}
  ]})";
  CHECK(run({"--config", bad, "analyze", "loss"}).exit_code == kExitNonViable);
  CHECK(run({"--config", bad, "analyze", "edge"}).exit_code == kExitSingular);
  const CliResult flat = run({"--config", bad, "--format", "json", "analyze", "flat"});
  REQUIRE(flat.exit_code == kExitOk);
  const auto parsed = nlohmann::json::parse(flat.out);
  const auto& brk = table(parsed, "liquidity_break");
  CHECK(row(brk, "immediate") == row(brk, "term"));
  std::filesystem::remove(bad);
}

TEST_CASE("config falls back to the environment value", "[cli]") {
  CHECK(run({"analyze", "projet 1"}, kConfig).exit_code == kExitOk);
}

TEST_CASE("compare reproduces the performance table", "[cli]") {
  const CliResult r = cli({"compare", "projet 1", "projet 2", "projet 3"});
  REQUIRE(r.exit_code == 0);
  for (const char* cell : {"60000000", "120000000", "144000000", "0.19", "0.08", "1.12", "1.14", "1.09", "1.71",
                           "2.67", "2.40"}) {
    CHECK_THAT(r.out, ContainsSubstring(cell));
  }

  const auto j = json_of({"compare", "projet 1", "projet 3"});
  const auto& perf = table(j, "performances");
  CHECK(row(perf, "profit") == nlohmann::json::array({11'200'000, 12'000'000}));
  CHECK(json_of({"compare", "projet 2"})["tables"][0]["columns"].size() == 1);
}

TEST_CASE("transform with the variable cost solved", "[cli]") {
  const auto j = json_of({"transform", "projet 1"});
  const auto& v = table(j, "verdicts");
  CHECK(row(v, "immediate")[2] == "Unchanged");
  CHECK(row(v, "term")[2] == "Improved");
  const auto& opt = table(j, "optimal_elasticity");
  CHECK(row(opt, "immediate")[7].get<double>() == Catch::Approx(4).epsilon(1e-12));
  CHECK(row(opt, "term")[7].get<double>() == Catch::Approx(7).epsilon(1e-12));
}

TEST_CASE("transform on the total-cost path", "[cli]") {
  const auto j = json_of({"transform", "projet 1", "--new-v", "7"});
  const auto& v = table(j, "verdicts");
  CHECK(row(v, "immediate")[2] == "Deteriorated");
  CHECK(row(v, "term")[2] == "Unchanged");
  CHECK(row(v, "immediate")[1].get<double>() == Catch::Approx(307'692.3).margin(0.1));
}

TEST_CASE("transform with zero deltas", "[cli]") {
  const auto j = json_of({"transform", "projet 2", "--delta-fixed-cash", "0", "--delta-fixed-noncash", "0"});
  const auto& v = table(j, "verdicts");
  CHECK(row(v, "immediate")[2] == "Unchanged");
  CHECK(row(v, "term")[2] == "Unchanged");
}

TEST_CASE("transform infeasible drop", "[cli][errors]") {
  CHECK(cli({"transform", "projet 1", "--delta-fixed-cash", "5000000"}).exit_code == kExitComputation);
  CHECK(cli({"transform", "projet 1", "--new-v", "4", "--solve-v"}).exit_code == kExitConfig);
}

TEST_CASE("expand reproduces the indicators and prices", "[cli]") {
  const auto j = json_of({"expand", "projet 1"});
  const auto& ind = table(j, "indicators");
  CHECK(row(ind, "q_star_immediate") == nlohmann::json::array({250'000, 200'000}));
  CHECK(row(ind, "q_star_term") == nlohmann::json::array({1'000'000, 1'700'000}));
  CHECK(row(ind, "leverage_immediate")[1].get<double>() == Catch::Approx(1.058).margin(5e-3));
  CHECK(row(ind, "leverage_term")[1].get<double>() == Catch::Approx(1.894).margin(5e-3));
  const auto& prices = table(j, "prices");
  CHECK(row(prices, "term")[1].get<double>() == Catch::Approx(21.60).margin(1e-2));
  CHECK(row(prices, "immediate")[1].get<double>() == Catch::Approx(14.41).margin(0.02));
  CHECK(row(prices, "immediate")[3].get<double>() == Catch::Approx(14.41).margin(5e-3));

  const CliResult text = cli({"expand", "projet 1"});
  CHECK_THAT(text.out, ContainsSubstring("21.60"));
  CHECK_THAT(text.out, ContainsSubstring("14.41"));
}

TEST_CASE("no-op expansion gives identical columns", "[cli]") {
  const auto j = json_of({"expand", "projet 2"});
  for (const auto& r : table(j, "indicators")["rows"]) CHECK(r["values"][0] == r["values"][1]);
}

TEST_CASE("expand exit codes", "[cli][errors]") {
  CHECK(cli({"expand", "projet 1", "--new-v", "25"}).exit_code == kExitNonViable);
  CHECK(cli({"expand", "projet 1", "--new-capacity", "100"}).exit_code == kExitConfig);
}

TEST_CASE("fit-costs", "[cli]") {
  const auto two = json_of({"fit-costs", "--points", "1000000:20,15000000:6"});
  const auto& model = table(two, "model");
  CHECK(row(model, "a")[0].get<double>() == Catch::Approx(-1e-6).epsilon(1e-12));
  CHECK(row(model, "b")[0].get<double>() == Catch::Approx(21).epsilon(1e-12));
  CHECK(row(model, "unit_crossover")[0].get<double>() == Catch::Approx(10'500'000).epsilon(1e-12));

  const auto one = json_of({"fit-costs", "--point", "8000000:12", "--intercept", "20"});
  CHECK(row(table(one, "model"), "a")[0].get<double>() == Catch::Approx(-1e-6).epsilon(1e-12));

  CHECK(run({"fit-costs", "--points", "5:3,5:4"}).exit_code == kExitComputation);
  CHECK(run({"fit-costs", "--points", "5:3"}).exit_code == kExitConfig);
  CHECK(run({"fit-costs", "--points", "a:b,1:2"}).exit_code == kExitConfig);
}

TEST_CASE("curves to stdout and to a file", "[cli][curves]") {
  const CliResult r = cli({"curves", "projet 1", "--kind", "elasticity-q", "--samples", "2"});
  REQUIRE(r.exit_code == 0);
  CHECK_THAT(r.out, ContainsSubstring("2400000,1.1162790697674418,1.7142857142857142\n"));

  const std::string path = temp_path("treslev_indiff.json");
  const CliResult w = cli({"curves", "--kind", "indifference", "--levels", "8000000", "--q-min", "1000000",
                           "--q-max", "2400000", "--m-min", "0.1", "--m-max", "100", "--samples", "8", "--out", path});
  REQUIRE(w.exit_code == 0);
  CHECK_THAT(w.out, ContainsSubstring("wrote"));
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["kind"] == "indifference");
  CHECK(j["rows"][0] == nlohmann::json::array({8'000'000, 1'000'000, 8}));
  std::filesystem::remove(path);
}

TEST_CASE("curves kinds and errors", "[cli][curves][errors]") {
  for (const char* kind : {"elasticity-m", "cost-behavior", "relative-elasticity", "absolute-lines"}) {
    INFO(kind);
    CHECK(cli({"curves", "projet 1", "--kind", kind, "--samples", "16"}).exit_code == kExitOk);
  }
  CHECK(cli({"curves", "projet 1", "--kind", "bogus"}).exit_code == kExitConfig);
  CHECK(cli({"curves", "projet 1", "--kind", "elasticity-q", "--out", "/nonexistent-dir/x.csv"}).exit_code ==
        kExitIo);
  CHECK(cli({"curves", "projet 2", "--kind", "cost-behavior"}).exit_code == kExitConfig);
}

TEST_CASE("usage errors and help", "[cli][errors]") {
  CHECK(run({}).exit_code == kExitConfig);
  CHECK(run({"frobnicate"}).exit_code == kExitConfig);
  CHECK(run({"--format", "xml", "analyze", "x"}).exit_code == kExitConfig);
  const CliResult help = run({"--help"});
  CHECK(help.exit_code == kExitOk);
  CHECK_THAT(help.out, ContainsSubstring("Subcommands"));
  CHECK(run({"expand", "--help"}).exit_code == kExitOk);
}

TEST_CASE("every command is deterministic", "[cli]") {
  const std::vector<std::vector<std::string>> commands{
      {"analyze", "projet 1"},
      {"compare"},
      {"transform", "projet 1"},
      {"expand", "projet 1"},
      {"fit-costs", "--points", "1000000:20,15000000:6"},
      {"curves", "projet 1", "--kind", "elasticity-q"},
  };
  for (const char* format : {"table", "json", "csv"}) {
    for (auto args : commands) {
      args.insert(args.begin(), {"--format", format});
      const CliResult a = cli(args);
      const CliResult b = cli(args);
      CHECK(a.exit_code == b.exit_code);
      CHECK(a.out == b.out);
    }
  }
}
