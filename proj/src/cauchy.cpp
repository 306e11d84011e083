#include "wavemaps/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "wavemaps/coords.hpp"
#include "wavemaps/exact.hpp"

namespace wm::cauchy {

namespace {

// area of the unit 4-sphere
const double kOmega4 = 8.0 * std::numbers::pi * std::numbers::pi / 3.0;

void check_state(const CauchyState& s) {
  if (static_cast<int>(s.u.size()) != s.grid.n || static_cast<int>(s.du.size()) != s.grid.n)
    throw GridMismatch("cauchy: state size mismatch");
}

double gauss_profile(double x, double w) { return std::exp(-(x / w) * (x / w)); }
double poly_profile(double x, double w) {
  const double q = 1.0 - (x / w) * (x / w);
  if (q <= 0) return 0.0;
  const double q2 = q * q, q4 = q2 * q2;
  return q4 * q4;
}

// int_0^rho F for even F sampled on g
double partial_integral(const Vec& F, const RadialGrid& g, double rho) {
  if (rho < 0 || rho > g.R * (1 + 1e-12)) throw DomainError("partial_integral: rho outside grid");
  const Vec C = cumulative_integral(F, g.dx, Parity::even);
  const int k = std::min(static_cast<int>(std::floor(rho / g.dx)), g.n - 1);
  const double a = k * g.dx, len = rho - a;
  double tail = 0;
  if (len > 0) {
    const auto& gl = gauss_legendre01(16);
    for (size_t j = 0; j < gl.x.size(); ++j) tail += gl.w[j] * interp_cubic(F, g, a + gl.x[j] * len, Parity::even);
    tail *= len;
  }
  return C[k] + tail;
}

}  // namespace

Stepper::Stepper(const RadialGrid& g, CauchyParams p)
    : g_(g), p_(p), d1_(g, 1, p.order, Parity::even), d2_(g, 2, p.order, Parity::even) {
  if (!(p.cfl > 0)) throw DomainError("Stepper: cfl must be positive");
}

void Stepper::rhs(const Vec& u, const Vec& du, Vec& ku, Vec& kdu) const {
  const int n = g_.n;
  ku = du;
  kdu.resize(n);
  Vec ur(n), urr(n);
  d1_.apply(u, ur);
  d2_.apply(u, urr);
  kdu[0] = 5.0 * urr[0] + (p_.nonlinear ? exact::F(u[0], 0.0) : 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double r = g_.x(i);
    kdu[i] = urr[i] + 4.0 / r * ur[i] + (p_.nonlinear ? exact::F(u[i], r) : 0.0);
  }
  // outgoing: d_t du = -(du)_r - 2 du / r
  const double R = g_.x(n - 1);
  kdu[n - 1] = -d1_.apply_row(du, n - 1) - 2.0 * du[n - 1] / R;
}

void Stepper::step(CauchyState& s, double dt) const {
  check_state(s);
  if (!(s.grid == g_)) throw GridMismatch("Stepper::step: grid mismatch");
  if (!(dt > 0)) throw DomainError("Stepper::step: dt must be positive");
  if (dt > max_dt() * (1 + 1e-12)) throw CFLViolation("Stepper::step: dt exceeds cfl*dr");
  const int n = g_.n;
  Vec k1u, k1d, k2u, k2d, k3u, k3d, k4u, k4d, tu(n), td(n);
  rhs(s.u, s.du, k1u, k1d);
  for (int i = 0; i < n; ++i) {
    tu[i] = s.u[i] + 0.5 * dt * k1u[i];
    td[i] = s.du[i] + 0.5 * dt * k1d[i];
  }
  rhs(tu, td, k2u, k2d);
  for (int i = 0; i < n; ++i) {
    tu[i] = s.u[i] + 0.5 * dt * k2u[i];
    td[i] = s.du[i] + 0.5 * dt * k2d[i];
  }
  rhs(tu, td, k3u, k3d);
  for (int i = 0; i < n; ++i) {
    tu[i] = s.u[i] + dt * k3u[i];
    td[i] = s.du[i] + dt * k3d[i];
  }
  rhs(tu, td, k4u, k4d);
  double m = 0;
  for (int i = 0; i < n; ++i) {
    s.u[i] += dt / 6.0 * (k1u[i] + 2 * k2u[i] + 2 * k3u[i] + k4u[i]);
    s.du[i] += dt / 6.0 * (k1d[i] + 2 * k2d[i] + 2 * k3d[i] + k4d[i]);
    m = std::max(m, std::abs(s.u[i]));
  }
  s.t += dt;
  if (!(m <= p_.blowup_ceiling)) throw BlowupDetected("step_cauchy: max|u| exceeds ceiling");
}

void Stepper::evolve(CauchyState& s, double t_end) const {
  if (t_end < s.t) throw DomainError("Stepper::evolve: t_end < t");
  if (t_end == s.t) return;
  const double t0 = s.t;
  const long nsteps = static_cast<long>(std::ceil((t_end - t0) / max_dt() * (1 - 1e-12)));
  const double dt = (t_end - t0) / nsteps;
  for (long k = 0; k < nsteps; ++k) step(s, dt);
  s.t = t_end;
}

CauchyState step_cauchy(const CauchyState& state, double dt, const CauchyParams& p) {
  CauchyState s = state;
  Stepper(state.grid, p).step(s, dt);
  return s;
}

CauchyState evolve_leapfrog(const CauchyState& s0, double t_end, const CauchyParams& p) {
  check_state(s0);
  const RadialGrid& g = s0.grid;
  Stepper st(g, p);
  const int n = g.n;
  if (t_end <= s0.t) return s0;
  const long nsteps = static_cast<long>(std::ceil((t_end - s0.t) / st.max_dt()));
  const double dt = (t_end - s0.t) / nsteps;
  Vec ku, kdu;
  // Taylor start
  st.rhs(s0.u, s0.du, ku, kdu);
  Vec prev = s0.u, cur(n);
  for (int i = 0; i < n; ++i) cur[i] = s0.u[i] + dt * s0.du[i] + 0.5 * dt * dt * kdu[i];
  const DiffMatrix d1(g, 1, p.order, Parity::even);
  const double R = g.x(n - 1);
  for (long k = 1; k < nsteps; ++k) {
    st.rhs(cur, cur, ku, kdu);
    Vec next(n);
    for (int i = 0; i < n - 1; ++i) next[i] = 2 * cur[i] - prev[i] + dt * dt * kdu[i];
    next[n - 1] = prev[n - 1] - 2 * dt * (d1.apply_row(cur, n - 1) + 2.0 * cur[n - 1] / R);
    prev.swap(cur);
    cur.swap(next);
  }
  CauchyState out{t_end, g, cur, Vec(n)};
  // time derivative from the last two levels (second order at the midpoint,
  // corrected to the endpoint with the acceleration)
  st.rhs(cur, cur, ku, kdu);
  for (int i = 0; i < n; ++i) out.du[i] = (cur[i] - prev[i]) / dt + 0.5 * dt * kdu[i];
  return out;
}

CauchyState exact_state(const RadialGrid& g, double T, double t) {
  CauchyState s{t, g, Vec(g.n), Vec(g.n)};
  for (int i = 0; i < g.n; ++i) {
    s.u[i] = exact::eval_blowup(T, t, g.x(i));
    s.du[i] = exact::eval_blowup_dt(T, t, g.x(i));
  }
  return s;
}

double profile_value(const PerturbationSpec& spec, double r) {
  if (!(spec.width > 0)) throw DomainError("profile: width must be positive");
  const double c = spec.center, w = spec.width;
  if (spec.profile == Profile::gaussian_bump) {
    if (c == 0) return gauss_profile(r, w);
    return 0.5 * (gauss_profile(r - c, w) + gauss_profile(r + c, w));
  }
  if (c == 0) return poly_profile(r, w);
  return 0.5 * (poly_profile(r - c, w) + poly_profile(r + c, w));
}

double support_leak(const PerturbationSpec& spec) {
  const double a = std::abs(spec.amplitude) * std::max(1.0, std::abs(spec.g_scale));
  if (a == 0) return 0.0;
  // both symmetrised profiles decrease for r > center
  if (spec.center >= spec.eps) return a * profile_value(spec, spec.center);
  return a * profile_value(spec, spec.eps);
}

CauchyState build_initial_data(const PerturbationSpec& spec, const RadialGrid& g) {
  if (!(spec.eps > 0)) throw DomainError("build_initial_data: eps must be positive");
  const double leak = support_leak(spec);
  if (leak > 1e-12) throw SupportError("build_initial_data: profile exceeds 1e-12 outside r = eps");
  CauchyState s = exact_state(g, 1.0, 0.0);
  if (spec.amplitude == 0) return s;
  for (int i = 0; i < g.n; ++i) {
    const double p = spec.amplitude * profile_value(spec, g.x(i));
    s.u[i] += p;
    s.du[i] += spec.g_scale * p;
  }
  return s;
}

History evolve_history(const CauchyState& init, double t_back, double t_fwd, const CauchyParams& p, int k_store) {
  check_state(init);
  if (t_back < 0 || t_fwd < 0) throw DomainError("evolve_history: negative extent");
  if (k_store < 1) throw DomainError("evolve_history: k_store >= 1");
  const Stepper st(init.grid, p);
  auto run = [&](double extent, double sgn, std::vector<double>& ts, std::vector<Vec>& us, std::vector<Vec>& dus) {
    // u(-tau) solves the same equation; flip the velocity
    CauchyState s{0.0, init.grid, init.u, init.du};
    if (sgn < 0)
      for (double& v : s.du) v = -v;
    if (extent == 0) return;
    const long nsteps = static_cast<long>(std::ceil(extent / st.max_dt() * (1 - 1e-12)));
    const double dt = extent / nsteps;
    for (long k = 1; k <= nsteps; ++k) {
      st.step(s, dt);
      if (k % k_store == 0 || k == nsteps) {
        ts.push_back(sgn * k * dt);
        us.push_back(s.u);
        Vec d = s.du;
        if (sgn < 0)
          for (double& v : d) v = -v;
        dus.push_back(std::move(d));
      }
    }
  };
  std::vector<double> tb, tf;
  std::vector<Vec> ub, dub, uf, duf;
  run(t_back, -1.0, tb, ub, dub);
  run(t_fwd, 1.0, tf, uf, duf);
  History h;
  h.grid = init.grid;
  for (int k = static_cast<int>(tb.size()) - 1; k >= 0; --k) {
    h.t.push_back(tb[k]);
    h.u.push_back(std::move(ub[k]));
    h.du.push_back(std::move(dub[k]));
  }
  h.t.push_back(init.t);
  h.u.push_back(init.u);
  h.du.push_back(init.du);
  for (size_t k = 0; k < tf.size(); ++k) {
    h.t.push_back(tf[k]);
    h.u.push_back(std::move(uf[k]));
    h.du.push_back(std::move(duf[k]));
  }
  if (init.t != 0)
    for (double& t : h.t) t += init.t;
  return h;
}

TraceHistory build_trace_history(const PerturbationSpec& spec, const RadialGrid& g, double t_back, double t_fwd,
                                 const CauchyParams& p, int k_store) {
  TraceHistory th;
  th.eps = spec.eps;
  th.pert = evolve_history(build_initial_data(spec, g), t_back, t_fwd, p, k_store);
  PerturbationSpec zero = spec;
  zero.amplitude = 0;
  th.base = evolve_history(build_initial_data(zero, g), t_back, t_fwd, p, k_store);
  return th;
}

double initial_s0(double eps) { return std::log(-coords::h(0.0) / (1.0 + 2.0 * eps)); }

HistorySample sample_history(const History& h, double t, double r) {
  const int m = static_cast<int>(h.t.size());
  if (m < 4) throw GeometryError("sample_history: fewer than four snapshots");
  if (t < h.t.front() - 1e-14 || t > h.t.back() + 1e-14 || r < 0 || r > h.grid.R)
    throw GeometryError("sample_history: point outside the stored history");
  int k = static_cast<int>(std::upper_bound(h.t.begin(), h.t.end(), t) - h.t.begin()) - 1;
  int lo = std::clamp(k - 1, 0, m - 4);
  std::vector<double> ts(h.t.begin() + lo, h.t.begin() + lo + 4);
  const auto w = fd_weights(t, ts, 0);
  HistorySample out{0, 0, 0};
  for (int j = 0; j < 4; ++j) {
    out.u += w[j] * interp_cubic(h.u[lo + j], h.grid, r, Parity::even);
    out.du += w[j] * interp_cubic(h.du[lo + j], h.grid, r, Parity::even);
    out.ur += w[j] * interp_cubic_deriv(h.u[lo + j], h.grid, r, Parity::even);
  }
  return out;
}

HyperboloidTrace extract_hyperboloid_trace(const TraceHistory& hist, double T, const RadialGrid& ygrid) {
  const double s0 = initial_s0(hist.eps), e = std::exp(-s0);
  const History& hp = hist.pert;
  const double dr = hp.grid.dx, rmax = hp.grid.R;
  HyperboloidTrace tr{s0, ygrid, {Vec(ygrid.n), Vec(ygrid.n)}};
  for (int i = 0; i < ygrid.n; ++i) {
    const double y = ygrid.x(i), hv = coords::h(y);
    const double t = T + e * hv, r = e * y;
    // closed-form part u_1^* - u_T^*
    double w = exact::eval_blowup(1.0, t, r) - exact::eval_blowup(T, t, r);
    double wt = exact::eval_blowup_dt(1.0, t, r) - exact::eval_blowup_dt(T, t, r);
    double wr = exact::eval_blowup_dr(1.0, t, r) - exact::eval_blowup_dr(T, t, r);
    // the boundary at rmax is felt only for r > rmax - |t|
    const bool stored = t >= hp.t.front() && t <= hp.t.back() && r <= rmax - std::abs(t) - 2 * dr;
    if (stored) {
      const auto a = sample_history(hp, t, r), b = sample_history(hist.base, t, r);
      w += a.u - b.u;
      wt += a.du - b.du;
      wr += a.ur - b.ur;
    } else if (r <= hist.eps + std::abs(t)) {
      throw GeometryError("extract_hyperboloid_trace: hyperboloid leaves the computed region inside the cone");
    }
    tr.U.f1[i] = e * w;
    tr.U.f2[i] = e * (-e * hv * wt - e * y * wr);
  }
  return tr;
}

double lightcone_energy(const CauchyState& state, double T) {
  check_state(state);
  if (!(state.t < T)) throw DomainError("lightcone_energy: t >= T");
  const RadialGrid& g = state.grid;
  const double rho = T - state.t;
  if (rho > g.R) throw DomainError("lightcone_energy: cone wider than the grid");
  const Vec ur = derivative(state.u, g, 1, 4, Parity::even);
  Vec dens(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double r2 = g.x(i) * g.x(i);
    dens[i] = (state.du[i] * state.du[i] + ur[i] * ur[i]) * r2 * r2;
  }
  const double ub = interp_cubic(state.u, g, rho, Parity::even);
  return kOmega4 * (partial_integral(dens, g, rho) + rho * rho * rho * ub * ub);
}

EmbedTerms embed_terms(const Vec& f, const RadialGrid& g, double R) {
  if (static_cast<int>(f.size()) != g.n) throw GridMismatch("embed_terms: size mismatch");
  const Vec fr = derivative(f, g, 1, 4, Parity::even);
  Vec a(g.n), b(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double r2 = g.x(i) * g.x(i);
    a[i] = f[i] * f[i] * r2 * r2;
    b[i] = fr[i] * fr[i] * r2 * r2;
  }
  const double fb = interp_cubic(f, g, R, Parity::even);
  const double R4 = R * R * R * R;
  return {kOmega4 * partial_integral(a, g, R),
          kOmega4 * (R * R * partial_integral(b, g, R) + 2.0 * R * R4 * fb * fb)};
}

std::string write_snapshot(const CauchyState& s, const std::string& dir) {
  check_state(s);
  std::filesystem::create_directories(dir);
  char name[64];
  std::snprintf(name, sizeof name, "snap_t%.6f.csv", s.t);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw DomainError("write_snapshot: cannot open " + path);
  out << "t,r,u,du\n";
  char line[128];
  for (int i = 0; i < s.grid.n; ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.grid.x(i), s.u[i], s.du[i]);
    out << line;
  }
  return path;
}

}  // namespace wm::cauchy
