// The six experiment families behind `wavemaps run`, and the individual
// checks they are made of (shared with the acceptance binary).
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wavemaps/config.hpp"
#include "wavemaps/hscflow.hpp"
#include "wavemaps/linspec.hpp"

namespace wm::experiments {

using json = nlohmann::ordered_json;

struct Check {
  std::string name;
  bool pass = false;
  json measured;
};

// FD residuals of u_T^* and psi_T^* at random points, h = 1/256, 1/512, 1/1024
Check exact_residuals(std::uint64_t seed);
// ||L f1* - f1*|| / ||f1*|| on 257, 513, 1025 nodes
Check gauge_eigenpair(double b);
// N(0) = 0 and quadratic scaling of N over two decades
Check nonlinearity_contract(double b, std::uint64_t seed);

struct SpectrumOutcome {
  Check check;
  std::vector<linspec::EigenCandidate> box, strip;
  double strip_re_min = -0.4;
  // -max Re over strip candidates, or -strip_re_min when the strip is empty
  double gap = 0.4;
};
SpectrumOutcome spectrum(const Tolerances& tol, int jobs);

// characteristic-variable growth and energy decay of the 1D transport
Check transport_decay();

// round trip, intertwining, norm equivalence over random even pairs
Check descent_roundtrip(std::uint64_t seed);

struct StabilityOutcome {
  Check check;
  hscflow::FlowResult flow;
  double fit_start = 0;
  double support = 0;  // eta extent of the initial trace
};
// select_T for the configured perturbation; the fitted rate is compared
// with -gap
StabilityOutcome stability(const RunConfig& c, double gap);

// perturbed against unperturbed Cauchy runs outside the influence cone,
// and against u_1^* there, on n and 2n - 1 radial nodes
Check finite_speed(const RunConfig& c, int n);

// lightcone energy along random free waves and the embedding inequality
Check energy_monotonicity(std::uint64_t seed, double tol);

struct Outcome {
  std::vector<Check> checks;
  json results;  // extra top-level manifest entries
  bool all_pass() const;
};

// Runs the configured experiment, writing CSV/JSON artifacts to outdir.
Outcome run_experiment(const RunConfig& c, int jobs, const std::string& outdir);

// run_experiment plus manifest.json and timing.json; returns the exit code
// (0 all pass, 1 some verdict failed).
int run(const RunConfig& c, int jobs, const std::string& outdir);

json manifest_json(const RunConfig& c, const Outcome& o);

}  // namespace wm::experiments
