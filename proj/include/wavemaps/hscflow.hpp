// Nonlinear flow d_s Phi = (L5 - I + L') Phi + N(Phi) in hyperboloidal
// similarity coordinates, the gauge projection, decay fits and the
// selection of the blowup time T by shooting.
#pragma once

#include <functional>
#include <string>

#include "wavemaps/grid.hpp"

namespace wm::hscflow {

struct OperatorOptions {
  int order = 2;
  bool potential = true;  // the V phi1 term
  bool shift = true;      // the -I
  // fourth-difference damping in the time stepper; < 0 picks the smallest
  // value that damps the centred-scheme growth where c12 < 0, times 1.25
  double dissipation = -1;
};

class HscOperator {
 public:
  // GeometryError unless both characteristic speeds at the outer node are
  // positive (everything leaves the domain, no boundary condition needed).
  explicit HscOperator(const RadialGrid& g, OperatorOptions opt = {});
  const RadialGrid& grid() const { return g_; }
  const OperatorOptions& options() const { return opt_; }
  double max_speed() const { return mu_max_; }
  double dissipation() const { return sigma_; }
  // (L5 - I + L') phi, no damping
  StateVector apply_L(const StateVector& phi) const;
  // (0, -H N(eta phi1, eta))
  StateVector apply_N(const StateVector& phi) const;
  // right-hand side used by the time stepper (includes the damping)
  void rhs(const StateVector& phi, bool nonlinear, StateVector& out) const;
  static double required_dissipation(double eta);

 private:
  void rhs_impl(const StateVector& phi, bool nonlinear, StateVector& out) const;
  void dissipate(const Vec& f, Vec& out, double a) const;
  RadialGrid g_;
  OperatorOptions opt_;
  DiffMatrix d1_, d2_;
  Vec c12_, c11eta_, c21_, c20_, V_, mH_, na_, nb_;
  double mu_max_ = 0, sigma_ = 0;
};

StateVector apply_L(const HscOperator& op, const StateVector& phi);
StateVector apply_N(const HscOperator& op, const StateVector& phi);

struct NormSample {
  double s, norm, projection;
};
using NormHistory = std::vector<NormSample>;

enum class Verdict { converged, unstable_growth, inconclusive };
std::string to_string(Verdict v);

struct FlowOptions {
  double cfl = 0.4;
  int k = 2;                  // surrogate H^k norm order
  double record_every = 0.05; // in s
  double overflow = 1e8;
  // optional early exit, called at every record
  std::function<bool(const NormSample&)> stop;
};

struct FlowRun {
  NormHistory history;
  StateVector final_state;
  double s_end = 0;
  bool overflow = false;
};

// ||phi1||_{H^{k+1}_5}^2 + ||phi2||_{H^k_5}^2, square-rooted
double surrogate_norm(const StateVector& phi, const RadialGrid& g, int k);
// <phi, f1*>/<f1*, f1*> in L^2(eta^4 d eta)
double gauge_projection(const StateVector& phi, const RadialGrid& g);

FlowRun evolve_flow(const HscOperator& op, const StateVector& phi0, double s_max, bool nonlinear,
                    const FlowOptions& fo = {});

struct FitResult {
  double rate, residual;
};
// least-squares slope of log(norm) on [s_a, s_b]; InsufficientData if fewer
// than 10 samples or any norm <= 0
FitResult fit_decay_rate(const NormHistory& h, double s_a, double s_b);

struct FlowResult {
  double selected_T = 1.0;
  NormHistory norm_history;
  double fitted_rate = 0;
  double fit_residual = 0;
  Verdict verdict = Verdict::inconclusive;
  int evaluations = 0;
};

struct SelectOptions {
  FlowOptions flow;
  double T_tol = 1e-13;
  // runs in the bracketing phase stop once |projection| exceeds this
  double decided = 1.0;
  // bracket width below which the root is polished on the projection value
  double polish_width = 1e-3;
  int max_evaluations = 80;
  double fit_margin = 1.0;
  // start of the fit window; < 0 means fit_margin
  double fit_start = -1;
};

// Time for data supported in eta <= y_supp to leave [0, R]: inward along the
// slow characteristic to the centre, then out along the fast one.
double exit_time(double y_supp, double R);

// Shooting on T: the sign of the gauge projection at s_max (or at overflow)
// is bisected, then the projection value is driven to zero by TOMS 748.
// BracketError if the signs at T_lo and T_hi agree.
FlowResult select_T(const std::function<StateVector(double)>& trace_builder, const HscOperator& op, double T_lo,
                    double T_hi, double s_max, const SelectOptions& so = {});

}  // namespace wm::hscflow
