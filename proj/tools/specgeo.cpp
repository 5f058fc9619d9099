// specgeo <experiment> --config <path> [--out <dir>] [--jobs N]
//
// Runs one experiment from a JSON config and writes <out>/<experiment>.csv,
// <out>/summary.json and SVG plots. SPECGEO_SEED overrides the config seed.
// Exit status: 0 when all configured checks pass, 1 on check failure,
// 2 on usage/config errors.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "specgeo/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral-geometry experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int jobs = 1;
  const std::vector<std::string> kinds = {
      "spectrum",         "doubling",      "three-sphere",
      "carleman",         "critical-measure", "nodal-measure",
      "growth",           "df-check",      "fit"};
  std::vector<CLI::App*> subs;
  for (const auto& k : kinds) {
    CLI::App* sub = app.add_subcommand(k);
    sub->add_option("--config", config_path, "JSON config path")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);
  std::string experiment = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config " << config_path << "\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    specgeo::ExperimentConfig cfg = specgeo::parse_config_string(ss.str());
    if (cfg.experiment != experiment) {
      std::cerr << "error: config is for experiment \"" << cfg.experiment
                << "\", invoked as \"" << experiment << "\"\n";
      return 2;
    }
    if (const char* env = std::getenv("SPECGEO_SEED"))
      cfg.seed = static_cast<unsigned>(std::strtoul(env, nullptr, 10));

    std::filesystem::create_directories(out_dir);
    auto start = std::chrono::steady_clock::now();
    specgeo::ExperimentResult result = specgeo::run_experiment(cfg, jobs);
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    specgeo::emit_report(cfg, result, out_dir, wall);

    for (const auto& c : result.checks)
      std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name << " value="
                << c.value << (c.less_is_pass ? " <= " : " >= ")
                << c.threshold << "\n";
    std::cout << (result.pass ? "OK" : "FAILED") << " " << experiment
              << " (wall " << wall << " s)\n";
    return result.pass ? 0 : 1;
  } catch (const specgeo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
