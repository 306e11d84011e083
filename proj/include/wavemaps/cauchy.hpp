// Radial (t, r) evolution of the 5D wave-maps equation for u = psi/r,
//   u_tt - u_rr - (4/r) u_r + (sin(2ru) - 2ru)/r^3 = 0,
// perturbed initial data, the trace on the initial hyperboloid and the
// lightcone energy.
#pragma once

#include <string>

#include "wavemaps/grid.hpp"

namespace wm::cauchy {

struct CauchyState {
  double t = 0;
  RadialGrid grid;
  Vec u, du;
};

struct CauchyParams {
  double cfl = 0.4;
  double blowup_ceiling = 1e6;
  bool nonlinear = true;
  int order = 2;  // spatial difference order
};

// Method of lines, RK4.  Even ghosts at r = 0 where the Laplacian is 5 u_rr;
// outgoing condition (d_t + d_r + 2/r) u = 0 at the last node.
class Stepper {
 public:
  explicit Stepper(const RadialGrid& g, CauchyParams p = {});
  double max_dt() const { return p_.cfl * g_.dx; }
  const CauchyParams& params() const { return p_; }
  // one RK4 step, 0 < dt <= max_dt()
  void step(CauchyState& s, double dt) const;
  // uniform steps of at most max_dt() up to t_end >= s.t
  void evolve(CauchyState& s, double t_end) const;
  void rhs(const Vec& u, const Vec& du, Vec& ku, Vec& kdu) const;

 private:
  RadialGrid g_;
  CauchyParams p_;
  DiffMatrix d1_, d2_;
};

CauchyState step_cauchy(const CauchyState& state, double dt, const CauchyParams& p = {});

// Second discretization for cross-checks: leapfrog with the same spatial
// operator, run from s.t to t_end.
CauchyState evolve_leapfrog(const CauchyState& s, double t_end, const CauchyParams& p = {});

// u_T^*(t, .) and its time derivative on g.
CauchyState exact_state(const RadialGrid& g, double T, double t);

enum class Profile { gaussian_bump, polynomial_bump };

// f = amplitude p(r), g = g_scale amplitude p(r) with p the even
// symmetrisation of the profile about r = center.
struct PerturbationSpec {
  double amplitude = 0;
  double width = 0.05 / 6;
  double center = 0;
  Profile profile = Profile::gaussian_bump;
  double g_scale = 1.0;
  double eps = 0.05;
};

double profile_value(const PerturbationSpec& spec, double r);
// sup over r >= eps of |f| and |g|
double support_leak(const PerturbationSpec& spec);
// u_1^*(0) + f, d_t u_1^*(0) + g.  SupportError if support_leak > 1e-12.
CauchyState build_initial_data(const PerturbationSpec& spec, const RadialGrid& g);

// Snapshots ordered by increasing t.
struct History {
  RadialGrid grid;
  std::vector<double> t;
  std::vector<Vec> u, du;
  double r_max() const { return grid.R; }
};

// Evolve backward to -t_back (time reflection of the same stepper) and
// forward to t_fwd, storing every k_store steps.
History evolve_history(const CauchyState& init, double t_back, double t_fwd, const CauchyParams& p = {},
                       int k_store = 4);

// Perturbed and unperturbed runs from the same grid.  The trace uses
// their difference inside the influence cone of B_eps and the closed form
// of u_1^* everywhere.
struct TraceHistory {
  History pert, base;
  double eps = 0.05;
};
TraceHistory build_trace_history(const PerturbationSpec& spec, const RadialGrid& g, double t_back, double t_fwd,
                                 const CauchyParams& p = {}, int k_store = 4);

double initial_s0(double eps);  // log(-h(0)/(1+2 eps))

struct HyperboloidTrace {
  double s0 = 0;
  RadialGrid grid;
  StateVector U;  // e^{-s0} (u - u_T^*, d_s(u - u_T^*)) on the hyperboloid
};

// GeometryError when an in-cone point of the hyperboloid is outside the
// stored history.
HyperboloidTrace extract_hyperboloid_trace(const TraceHistory& hist, double T, const RadialGrid& ygrid);

// Cubic-in-t, cubic-in-r interpolation of a history at (t, r).
struct HistorySample {
  double u, du, ur;
};
HistorySample sample_history(const History& h, double t, double r);

// E_u(t) of the lightcone B_{T-t} in five dimensions (radial), including
// the boundary term (T-t)^{-1} int_{sphere} u^2.  DomainError if t >= T.
double lightcone_energy(const CauchyState& state, double T);

// Both sides of ||f||^2 <= R^2 ||grad f||^2 + 2R ||f||^2_{dB_R} for radial
// f on the 5-ball of radius R.
struct EmbedTerms {
  double lhs, rhs;
};
EmbedTerms embed_terms(const Vec& f, const RadialGrid& g, double R);

// CSV `t,r,u,du`, file snap_t<value>.csv in dir; returns the path.
std::string write_snapshot(const CauchyState& s, const std::string& dir);

}  // namespace wm::cauchy
