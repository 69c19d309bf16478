#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cylab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Poisson cylinder model experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment and write results.csv and manifest.json");
  std::string config_path;
  run->add_option("--config", config_path, "key = value config file or a previous manifest.json");
  const std::vector<std::string> keys = {"experiment", "d", "u", "seed", "replicas", "samples", "threads",
                                         "out", "r-list", "rho-list", "R", "m", "n"};
  std::vector<std::string> values(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) run->add_option("--" + keys[i], values[i], "override " + keys[i]);

  auto* list = app.add_subcommand("list-experiments", "Print the experiment names");
  auto* ver = app.add_subcommand("version", "Print the version string");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*ver) {
    std::printf("cylab %s\n", cylab::version().c_str());
    return 0;
  }
  if (*list) {
    for (const auto& name : cylab::list_experiments()) std::printf("%s\n", name.c_str());
    return 0;
  }
  try {
    cylab::ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = cylab::load_config(config_path);
    } else {
      cfg.threads = cylab::default_threads();
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (run->count("--" + keys[i]) > 0) cylab::apply_setting(cfg, keys[i], values[i]);
    }
    const auto out = cylab::run_experiment(cfg);
    std::printf("%s: %zu rows written to %s\n", cfg.experiment.c_str(), out.rows.size(), cfg.out.c_str());
    for (const auto& [k, v] : out.summary) std::printf("  %s = %.10g\n", k.c_str(), v);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cylab: %s\n", e.what());
    return cylab::exit_code_for(e);
  }
}
