#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "ichain/config.hpp"
#include "ichain/scenario.hpp"

using namespace ichain;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::filesystem::path config_dir() { return ICHAIN_CONFIG_DIR; }

}  // namespace

TEST_CASE("config parsing happy path") {
  const auto cfg = ConfigFile::parse(
      "# comment\n"
      "[alpha]\n"
      "x = 1.5    # trailing comment\n"
      "name = hello\n"
      "flags = 1 2 3\n"
      "on = true\n"
      "[alpha.sub]\n"
      "y = 2\n",
      "test.cfg");
  CHECK(cfg.get_double("alpha", "x") == 1.5);
  CHECK(cfg.get_string("alpha", "name") == "hello");
  CHECK(cfg.get_double_list("alpha", "flags") == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(cfg.get_bool("alpha", "on"));
  CHECK(cfg.get_double("alpha.sub", "y") == 2.0);
  CHECK(cfg.get_double_or("alpha", "missing", 7.0) == 7.0);
  CHECK(cfg.has_section("alpha.sub"));
  CHECK_FALSE(cfg.has_key("alpha", "unknown"));
}

TEST_CASE("config parse errors carry line context") {
  try {
    ConfigFile::parse("[a]\nx = 1\nbroken line\n", "bad.cfg");
    FAIL("expected ConfigParseError");
  } catch (const ConfigParseError& err) {
    CHECK(err.line == 3);
    CHECK(std::string(err.what()).find("bad.cfg:3") != std::string::npos);
  }
  CHECK_THROWS_AS(ConfigFile::parse("x = 1\n"), ConfigParseError);       // outside section
  CHECK_THROWS_AS(ConfigFile::parse("[a\nx = 1\n"), ConfigParseError);   // unterminated
  CHECK_THROWS_AS(ConfigFile::parse("[a]\nx = 1\nx = 2\n"), ConfigParseError);  // duplicate
}

TEST_CASE("typed getters reject malformed values") {
  const auto cfg = ConfigFile::parse("[a]\nx = notanumber\nn = 1.5\n");
  CHECK_THROWS_AS(cfg.get_double("a", "x"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get_int("a", "n"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get_double("a", "missing"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get_bool("a", "x"), std::invalid_argument);
}

TEST_CASE("every bundled config parses and validates") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(config_dir())) {
    if (entry.path().extension() != ".cfg") continue;
    ++count;
    INFO("config: ", entry.path().string());
    const auto cfg = ConfigFile::load(entry.path().string());
    CHECK_NOTHROW(parse_scenario(cfg));
  }
  CHECK(count >= 6);
}

TEST_CASE("sum signals come from numbered subsections") {
  const auto cfg = ConfigFile::parse(
      "[scenario]\nkind = estimate\n"
      "[differentiator]\nvariant = integral-chain-linear\ngains = 1 2\nepsilon = 0.1\n"
      "[signal]\nkind = sum\nterms = 2\n"
      "[signal.1]\nkind = sinusoid\namplitude = 1\nomega = 2\n"
      "[signal.2]\nkind = constant\nlevel = 0.5\n"
      "[sim]\nt_end = 0.1\nh = 0.01\n");
  const auto scenario = parse_scenario(cfg);
  const auto& payload = std::get<EstimateScenario>(scenario.payload);
  CHECK(payload.signal.eval(0.0, 0) == doctest::Approx(0.5));
  CHECK(payload.signal.eval(0.0, 1) == doctest::Approx(2.0));
}

TEST_CASE("validation diagnostics name the violated invariant") {
  const auto cfg = ConfigFile::parse(
      "[scenario]\nkind = estimate\n"
      "[differentiator]\nvariant = integral-chain-linear\ngains = -1 1 1\nepsilon = 0.01\n"
      "[signal]\nkind = constant\nlevel = 1\n"
      "[sim]\nt_end = 1\nh = 0.01\n");
  try {
    parse_scenario(cfg);
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& err) {
    CHECK(std::string(err.what()).find("Hurwitz") != std::string::npos);
  }
}

TEST_CASE("compare scenario differs only in the estimator wiring") {
  const auto cfg = ConfigFile::load((config_dir() / "closed_loop_compare.cfg").string());
  const auto scenario = parse_scenario(cfg);
  const auto& compare = std::get<CompareScenario>(scenario.payload);

  CHECK(compare.run_a.plant.b == compare.run_b.plant.b);
  CHECK(compare.run_a.plant.damping == compare.run_b.plant.damping);
  CHECK(compare.run_a.controller.k_u == compare.run_b.controller.k_u);
  CHECK(compare.run_a.controller.l == compare.run_b.controller.l);
  CHECK(compare.run_a.noise.seed == compare.run_b.noise.seed);
  CHECK(compare.run_a.noise.bound == compare.run_b.noise.bound);
  CHECK(compare.run_a.sim.t_end == compare.run_b.sim.t_end);
  CHECK(compare.run_a.sim.h == compare.run_b.sim.h);
  CHECK(compare.run_a.theta0 == compare.run_b.theta0);
  CHECK(compare.run_a.omega0 == compare.run_b.omega0);

  CHECK(compare.run_a.estimator->variant == DiffVariant::IntegralChainLinear);
  CHECK(compare.run_b.estimator->variant == DiffVariant::HighGainLinear);
}

TEST_CASE("emit_plotdata writes commented headers and plain columns") {
  TimeSeries series(std::vector<std::string>{"t", "e1", "e2"});
  series.add_row(std::vector<double>{0.0, 1.0, -1.0});
  series.add_row(std::vector<double>{0.5, 0.25, 2.0});

  std::ostringstream os;
  const std::vector<std::string> cols{"t", "e1"};
  emit_plotdata(series, cols, os);
  const std::string text = os.str();
  CHECK(text.find("# t e1") == 0);
  CHECK(text.find("0.5 0.25") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + two rows

  std::ostringstream ignored;
  CHECK_THROWS_AS(emit_plotdata(series, std::vector<std::string>{}, ignored),
                  std::invalid_argument);
  CHECK_THROWS_AS(emit_plotdata(series, std::vector<std::string>{"nope"}, ignored),
                  std::invalid_argument);
}

TEST_CASE("rerunning a scenario with the same seed is byte-identical") {
  const auto cfg = ConfigFile::parse(
      "[scenario]\nkind = estimate\nout = ignored\n"
      "[differentiator]\nvariant = integral-chain-linear\ngains = 10 10 10\nepsilon = 0.01\n"
      "[signal]\nkind = sinusoid\namplitude = 1\nomega = 1\n"
      "[noise]\nkind = uniform\nbound = 0.05\nseed = 42\n"
      "[sim]\nt_end = 0.5\nh = 1e-4\nrecord_stride = 5\n");
  const auto scenario = parse_scenario(cfg);

  RunOptions options;
  options.quiet = true;
  options.out_dir = "cli_test_out/run1";
  run_scenario(scenario, options);
  options.out_dir = "cli_test_out/run2";
  run_scenario(scenario, options);

  for (const char* name : {"estimate.csv", "estimate_errors.dat", "summary.txt"}) {
    CHECK(read_file(std::filesystem::path("cli_test_out/run1") / name) ==
          read_file(std::filesystem::path("cli_test_out/run2") / name));
  }

  // A different seed changes the noisy trajectory.
  options.out_dir = "cli_test_out/run3";
  options.seed = 43;
  run_scenario(scenario, options);
  CHECK(read_file("cli_test_out/run1/estimate.csv") !=
        read_file("cli_test_out/run3/estimate.csv"));

  std::filesystem::remove_all("cli_test_out");
}

#ifdef ICHAIN_CLI_PATH

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ICHAIN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

}  // namespace

TEST_CASE("CLI exit codes map parse/validation/integration failures") {
  CHECK(run_cli("list-scenarios") == 0);
  CHECK(run_cli("validate " + (config_dir() / "closed_loop_compare.cfg").string() +
                " --quiet") == 0);

  const std::filesystem::path dir = "cli_exit_codes";
  std::filesystem::create_directories(dir);

  write_file(dir / "broken.cfg", "[scenario\nkind = estimate\n");
  CHECK(run_cli("validate " + (dir / "broken.cfg").string()) == 2);

  write_file(dir / "invalid.cfg",
             "[scenario]\nkind = estimate\n"
             "[differentiator]\nvariant = integral-chain-linear\ngains = -1 1 1\n"
             "epsilon = 0.01\n"
             "[signal]\nkind = constant\nlevel = 1\n"
             "[sim]\nt_end = 1\nh = 0.01\n");
  CHECK(run_cli("validate " + (dir / "invalid.cfg").string()) == 3);

  // Step size far beyond the estimator's stability limit: blows up loudly.
  write_file(dir / "stiff.cfg",
             "[scenario]\nkind = estimate\n"
             "[differentiator]\nvariant = integral-chain-linear\ngains = 1 2\n"
             "epsilon = 0.001\n"
             "[signal]\nkind = sinusoid\namplitude = 1\nomega = 1\n"
             "[init]\nx = 0 1\n"
             "[sim]\nt_end = 20\nh = 0.1\n");
  CHECK(run_cli("validate " + (dir / "stiff.cfg").string()) == 0);
  CHECK(run_cli("run " + (dir / "stiff.cfg").string() + " --quiet --out " +
                (dir / "out").string()) == 4);

  write_file(dir / "ok.cfg",
             "[scenario]\nkind = estimate\n"
             "[differentiator]\nvariant = integral-chain-linear\ngains = 1 2\n"
             "epsilon = 0.1\n"
             "[signal]\nkind = constant\nlevel = 1\n"
             "[sim]\nt_end = 0.5\nh = 0.001\n");
  CHECK(run_cli("run " + (dir / "ok.cfg").string() + " --quiet --out " +
                (dir / "out").string()) == 0);
  CHECK(std::filesystem::exists(dir / "out" / "estimate.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "summary.txt"));

  std::filesystem::remove_all(dir);
}

#endif  // ICHAIN_CLI_PATH

TEST_CASE("the bundled equivalence scenario reports a pass") {
  const auto cfg = ConfigFile::load((config_dir() / "equivalence_n3.cfg").string());
  RunOptions options;
  options.quiet = true;
  options.out_dir = "cli_equiv_out";
  const auto summary = run_scenario(parse_scenario(cfg), options);
  bool found = false;
  for (const auto& [key, value] : summary)
    if (key == "pass") {
      found = true;
      CHECK(value == "true");
    }
  CHECK(found);
  std::filesystem::remove_all("cli_equiv_out");
}

TEST_CASE("scenario kind names round-trip") {
  for (const auto kind :
       {ScenarioKind::Estimate, ScenarioKind::Equivalence, ScenarioKind::EpsilonSweep,
        ScenarioKind::ConvergenceRace, ScenarioKind::ClosedLoop,
        ScenarioKind::ClosedLoopCompare}) {
    CHECK(scenario_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(scenario_kind_from_string("bogus"), std::invalid_argument);
}
