// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// acceptance [--jobs N] [--workdir DIR]
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>

#include "wavemaps/config.hpp"
#include "wavemaps/experiments.hpp"

namespace ex = wm::experiments;
using json = ex::json;

namespace {

int failures = 0;

std::string num(const json& v, int prec = 4) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  char b[40];
  std::snprintf(b, sizeof b, "%.*g", prec, v.get<double>());
  return b;
}

std::string fx(const json& v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.3f", v.get<double>());
  return b;
}

void report(int k, const std::string& title, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] %2d %-22s %s (%.1fs)\n", pass ? "PASS" : "FAIL", k, title.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int jobs = 4;
  std::string workdir = "acceptance_runs";
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--workdir", workdir, "scratch directory for repeated runs");
  CLI11_PARSE(app, argc, argv);
  std::filesystem::create_directories(workdir);
  const wm::Tolerances tol;
  using clock = std::chrono::steady_clock;

  auto t0 = clock::now();
  {
    const auto c = ex::exact_residuals(42);
    const auto& m = c.measured;
    report(1, "exact residuals", c.pass,
           "u orders " + fx(m["u_orders"][0]) + "/" + fx(m["u_orders"][1]) + ", psi orders " +
               fx(m["psi_orders"][0]) + "/" + fx(m["psi_orders"][1]),
           since(t0));
  }

  t0 = clock::now();
  {
    const auto c = ex::gauge_eigenpair(0.5);
    const auto& m = c.measured;
    report(2, "gauge eigenpair", c.pass,
           "rel error at 1025 nodes " + num(m["levels"][2]["rel_error"]) + ", orders " + fx(m["orders"][0]) + "/" +
               fx(m["orders"][1]),
           since(t0));
  }

  t0 = clock::now();
  const ex::SpectrumOutcome spec = ex::spectrum(tol, jobs);
  {
    const auto& m = spec.check.measured;
    std::string lam = "none";
    if (spec.box.size() == 1)
      lam = num(spec.box[0].lambda.real(), 15) + (spec.box[0].lambda.imag() < 0 ? "" : "+") +
            num(spec.box[0].lambda.imag(), 3) + "i";
    report(3, "spectrum", spec.check.pass,
           std::to_string(spec.box.size()) + " eigenvalue(s), lambda " + lam + ", eigenfunction error " +
               num(m["eigenfunction_rel_error"]) + ", strip candidates " + std::to_string(spec.strip.size()) +
               ", gap >= " + num(spec.gap),
           since(t0));
  }

  t0 = clock::now();
  {
    const auto c = ex::transport_decay();
    const auto& m = c.measured;
    report(4, "transport rates", c.pass,
           "v- growth " + num(m["vminus_growth"]["rate"]) + ", energy l=1 " + num(m["energy_l1"]["rate"]) +
               ", energy l=2 " + num(m["energy_l2"]["rate"]) + " (targets 0.5, -0.5, -0.5 +- 0.05)",
           since(t0));
  }

  t0 = clock::now();
  {
    const auto c = ex::descent_roundtrip(42);
    const auto& m = c.measured;
    report(5, "descent round trip", c.pass,
           "worst rt/fd " + num(m["worst_roundtrip_over_fd"]) + " over " + num(m["pairs"]) +
               " pairs, intertwining orders " + num(m["intertwining_orders"][0]) + "/" +
               num(m["intertwining_orders"][1]) + ", C(k=2) " + num(m["norm_equivalence"]["2"]["C"]) +
               ", C(k=3) " + num(m["norm_equivalence"]["3"]["C"]),
           since(t0));
  }

  // 6 and 7 together: two stability runs and the finite speed check
  t0 = clock::now();
  {
    wm::RunConfig sc;
    sc.experiment = wm::Experiment::stability_run;
    sc.b = 0.1;
    sc.epsilon = 0.1;
    sc.s_max = 6;
    sc.n_points = 513;
    sc.perturbation.eps = sc.epsilon;
    sc.perturbation.width = sc.epsilon / 6;
    wm::RunConfig a = sc, b = sc;
    a.perturbation.amplitude = 1e-3;
    b.perturbation.amplitude = 3e-3;
    wm::RunConfig fc;
    fc.perturbation.eps = fc.epsilon;
    fc.perturbation.width = fc.epsilon / 6;
    fc.perturbation.amplitude = 1e-3;
    const double gap = spec.gap;
    auto fa = std::async(std::launch::async, [&] { return ex::stability(a, gap); });
    auto fb = std::async(std::launch::async, [&] { return ex::stability(b, gap); });
    auto t7 = clock::now();
    const auto c7 = ex::finite_speed(fc, 1025);
    const double s7 = since(t7);
    const auto ra = fa.get(), rb = fb.get();
    std::string d;
    for (const auto* r : {&ra, &rb}) {
      const auto& m = r->check.measured;
      if (!d.empty()) d += "; ";
      if (m.contains("error")) {
        d += "amp " + num(m["amplitude"]) + " error: " + m["error"].get<std::string>();
        continue;
      }
      d += "amp " + num(m["amplitude"]) + ": T-1 " + num(r->flow.selected_T - 1.0, 3) + ", " +
           m["verdict"].get<std::string>() + ", rate " + num(m["fitted_rate"]) + ", residual " +
           num(m["fit_residual"]) + ", rate/-gap " + num(m["rate_over_minus_gap"]);
    }
    report(6, "stability", ra.check.pass && rb.check.pass, d, since(t0));
    const auto& m = c7.measured;
    report(7, "finite speed", c7.pass,
           "outside-cone diff " + num(m["levels"][0]["outside_cone_difference"]) + "/" +
               num(m["levels"][1]["outside_cone_difference"]) + ", u1 error " + num(m["levels"][0]["u1_error"]) +
               " -> " + num(m["levels"][1]["u1_error"]) + " (n " + num(m["levels"][0]["n"]) + ", " +
               num(m["levels"][1]["n"]) + ")",
           s7);
  }

  t0 = clock::now();
  {
    const auto c = ex::energy_monotonicity(42, tol.energy);
    const auto& m = c.measured;
    double worst = -1e300;
    for (const auto& w : m["waves"]) worst = std::max(worst, w["max_rel_increase"].get<double>());
    report(8, "energy monotonicity", c.pass,
           "worst per-step increase/E0 " + num(worst) + " (tol " + num(tol.energy) + "), embedding failures " +
               num(m["embed_failures"]) + "/20",
           since(t0));
  }

  t0 = clock::now();
  {
    const auto c = ex::nonlinearity_contract(0.5, 42);
    const auto& m = c.measured;
    report(9, "nonlinearity contract", c.pass,
           "N(0) exactly zero " + num(m["N0_exact_zero"]) + ", max spread " + num(m["max_spread"]), since(t0));
  }

  t0 = clock::now();
  {
    bool same = true;
    std::string d;
    for (auto e : {wm::Experiment::exact_residuals, wm::Experiment::descent_roundtrip, wm::Experiment::spectrum_scan}) {
      wm::RunConfig c;
      c.experiment = e;
      c.perturbation.eps = c.epsilon;
      c.perturbation.width = c.epsilon / 6;
      const std::string base = (std::filesystem::path(workdir) / wm::to_string(e)).string();
      ex::run(c, jobs, base + "_1");
      ex::run(c, jobs, base + "_2");
      const std::string m1 = slurp(base + "_1/manifest.json"), m2 = slurp(base + "_2/manifest.json");
      const bool ok = !m1.empty() && m1 == m2;
      same = same && ok;
      d += (d.empty() ? "" : ", ") + wm::to_string(e) + (ok ? " identical" : " differ");
    }
    report(10, "determinism", same, d, since(t0));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
