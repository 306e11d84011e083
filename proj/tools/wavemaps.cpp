// wavemaps run --config <path> [--jobs N] [--output DIR]
// wavemaps validate --config <path>
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "wavemaps/config.hpp"
#include "wavemaps/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"self-similar wave maps: experiments and checks"};
  app.require_subcommand(1);
  std::string config_path, output;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--output", output, "output directory");
  auto* val = app.add_subcommand("validate", "parse and validate a config");
  val->add_option("--config", config_path, "config file")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  wm::RunConfig cfg;
  try {
    cfg = wm::load_config(config_path);
  } catch (const wm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (*val) {
    std::printf("%s: ok (%s)\n", config_path.c_str(), wm::to_string(cfg.experiment).c_str());
    return 0;
  }
  std::string outdir = cfg.output_dir;
  if (!output.empty()) outdir = output;
  if (const char* env = std::getenv("WAVEMAPS_OUTPUT"); env && *env) outdir = env;
  try {
    const int rc = wm::experiments::run(cfg, jobs, outdir);
    std::printf("%s: %s (%s/manifest.json)\n", wm::to_string(cfg.experiment).c_str(), rc == 0 ? "pass" : "fail",
                outdir.c_str());
    return rc;
  } catch (const wm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
