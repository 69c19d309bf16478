#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cylab/errors.hpp"
#include "cylab/experiment.hpp"
#include "cylab/rng.hpp"
#include "doctest.h"

using namespace cylab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cylab-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(
      "# comment\nexperiment = ball-pair\nd = 4\nu=0.5\nseed = 9\nr-list = 8, 16,32\nthreads = 2 # trailing\n");
  CHECK(c.experiment == "ball-pair");
  CHECK(c.d == 4);
  CHECK(c.u == 0.5);
  CHECK(c.seed == 9);
  CHECK(c.threads == 2);
  CHECK(c.r_list == std::vector<double>{8.0, 16.0, 32.0});
  CHECK_THROWS_AS(parse_config("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("d = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("d = 4.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("replicas = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just text\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("r-list = 1,,2\n"), ConfigError);

  ExperimentConfig bad = c;
  bad.experiment = "nope";
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.r_list = {2.0};
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.experiment = "x-positive";
  bad.d = 6;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config text round trip") {
  ExperimentConfig c;
  c.experiment = "lattice-sum";
  c.d = 5;
  c.n = 3;
  c.u = 0.1 + 0.2;
  c.r_list = {8.0, 16.0};
  c.rho_list = {1.0 / 3.0};
  c.R = 64.0;
  c.out = "some/dir";
  const std::string text = config_text(c);
  CHECK(config_text(parse_config(text)) == text);
  CHECK(parse_config(text).u == c.u);
  CHECK(parse_config(text).rho_list[0] == c.rho_list[0]);
}

TEST_CASE("threads default") {
  ::unsetenv("CYLAB_THREADS");
  CHECK(default_threads() == 1);
  ::setenv("CYLAB_THREADS", "3", 1);
  CHECK(default_threads() == 3);
  CHECK(parse_config("experiment = rhombus\n").threads == 3);
  CHECK(parse_config("threads = 2\n").threads == 2);
  ::setenv("CYLAB_THREADS", "zero", 1);
  CHECK_THROWS_AS(default_threads(), ConfigError);
  ::unsetenv("CYLAB_THREADS");
}

TEST_CASE("power law fit") {
  std::vector<std::pair<double, double>> exact;
  for (double x : {2.0, 4.0, 8.0, 16.0}) exact.emplace_back(x, 5.0 / (x * x));
  const FitResult f = fit_power_law(exact);
  CHECK(f.exponent == doctest::Approx(-2.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(5.0));
  CHECK(f.std_error == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.points == 4);

  CounterRng rng(61, 0);
  std::vector<std::pair<double, double>> noisy;
  for (int i = 0; i < 12; ++i) {
    const double x = 4.0 * std::pow(1.3, i);
    noisy.emplace_back(x, std::pow(x, -3.0) * std::exp(0.05 * rng.normal()));
  }
  const FitResult g = fit_power_law(noisy);
  CHECK(g.std_error > 0.0);
  CHECK(std::abs(g.exponent + 3.0) < 3.0 * g.std_error + 1e-12);

  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, -1.0}}), InvalidInput);
  CHECK_THROWS_AS(fit_power_law({{2.0, 1.0}, {2.0, 3.0}}), InvalidInput);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(InvalidInput("x")) == 2);
  CHECK(exit_code_for(OutOfDomain("x")) == 2);
  CHECK(exit_code_for(NumericFailure("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 3);
}

TEST_CASE("outputs are written and reproducible") {
  ExperimentConfig c = parse_config("experiment = ball-pair\nd = 3\nr-list = 8,16,32\nsamples = 20000\nseed = 5\n");
  const fs::path dir = scratch("repro");
  c.out = (dir / "a").string();
  c.threads = 1;
  const ExperimentOutput a = run_experiment(c);
  c.out = (dir / "b").string();
  c.threads = 3;
  run_experiment(c);
  const std::string csv = slurp(dir / "a" / "results.csv");
  CHECK(csv == slurp(dir / "b" / "results.csv"));
  CHECK(csv.rfind("r,quadrature,mc,mc_stderr,lower,upper\n", 0) == 0);
  CHECK(format_csv(a) == csv);
  CHECK(a.rows.size() == 3);
  CHECK(a.get("quadrature_exponent") == doctest::Approx(-2.0).epsilon(0.05));
  CHECK_THROWS_AS(a.get("missing"), InvalidInput);
  CHECK(a.column("r") == std::vector<double>{8.0, 16.0, 32.0});

  // The manifest reloads to the same configuration.
  const ExperimentConfig back = load_config((dir / "b" / "manifest.json").string());
  CHECK(config_text(back) == config_text(c));
  const ExperimentOutput again = run_experiment(back);
  CHECK(format_csv(again) == csv);
  fs::remove_all(dir);
}

TEST_CASE("failed runs leave no outputs") {
  const fs::path dir = scratch("fail");
  fs::create_directories(dir);
  std::ofstream(dir / "results.csv") << "stale\n";
  std::ofstream(dir / "manifest.json") << "{}\n";
  ExperimentConfig c = parse_config("experiment = x-positive\nd = 4\nR = 200\nreplicas = 2\n");
  c.out = dir.string();
  bool threw = false;
  try {
    run_experiment(c);
  } catch (const std::exception& e) {
    threw = true;
    CHECK(exit_code_for(e) == 2);
  }
  CHECK(threw);
  CHECK_FALSE(fs::exists(dir / "results.csv"));
  CHECK_FALSE(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("experiment registry") {
  const auto& names = list_experiments();
  CHECK(names.size() == 13);
  for (const std::string& n : names) CHECK_FALSE(n.empty());
  CHECK_FALSE(version().empty());
}
