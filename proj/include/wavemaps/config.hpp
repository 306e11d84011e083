// Run configuration: flat key = value file with [section] headers.
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wavemaps/cauchy.hpp"
#include "wavemaps/grid.hpp"

namespace wm {

struct ConfigError : Error {
  using Error::Error;
};

enum class Experiment {
  exact_residuals,
  transport_decay,
  descent_roundtrip,
  spectrum_scan,
  stability_run,
  energy_monotonicity
};
std::string to_string(Experiment e);

struct Tolerances {
  double T_tol = 1e-13;          // select_T bracket width
  double match = 1e-10;          // linspec Newton stop
  double shoot = 1e-12;          // adaptive RK tolerance
  double energy = 1e-8;          // per-step energy increase, relative to E(0)
  double finite_speed = 1e-10;   // outside the influence cone
};

struct RunConfig {
  Experiment experiment = Experiment::exact_residuals;
  int n_points = 513;
  double r_max = 0;  // Cauchy grid radius; 0 picks one from epsilon
  double b = 0.5;
  double epsilon = 0.05;
  cauchy::PerturbationSpec perturbation;
  double s_max = 8;
  Tolerances tol;
  std::string output_dir = "output";
  std::uint64_t seed = 42;
};

// Parse and validate.  ConfigError names the line or field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);

// config echo for manifests, grouped by section
nlohmann::ordered_json config_json(const RunConfig& c);

}  // namespace wm
