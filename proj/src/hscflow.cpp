#include "wavemaps/hscflow.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>

#include "wavemaps/coords.hpp"
#include "wavemaps/descent.hpp"
#include "wavemaps/exact.hpp"

namespace wm::hscflow {

namespace {

void check(const RadialGrid& g, const StateVector& f, const char* who) {
  if (static_cast<int>(f.f1.size()) != g.n || static_cast<int>(f.f2.size()) != g.n)
    throw GridMismatch(std::string(who) + ": size mismatch");
}

double l2_eta4(const Vec& a, const Vec& b, const RadialGrid& g) {
  Vec p(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double e2 = g.x(i) * g.x(i);
    p[i] = a[i] * b[i] * e2 * e2;
  }
  return integral(p, g.dx, Parity::even);
}

}  // namespace

HscOperator::HscOperator(const RadialGrid& g, OperatorOptions opt)
    : g_(g), opt_(opt), d1_(g, 1, opt.order, Parity::even), d2_(g, 2, opt.order, Parity::even) {
  const auto [m1, m2] = coords::characteristic_speeds(g.R);
  if (!(m1 > 0 && m2 > 0)) throw GeometryError("HscOperator: a characteristic enters the domain at R");
  const int n = g.n;
  double need = 0;
  c12_.resize(n);
  c11eta_.resize(n);
  c21_.resize(n);
  c20_.resize(n);
  V_.resize(n);
  mH_.resize(n);
  na_.resize(n);
  nb_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double eta = g.x(i);
    c12_[i] = coords::c12(eta);
    c11eta_[i] = coords::c11eta_5(eta);
    c21_[i] = coords::c21(eta);
    c20_[i] = coords::c20_5(eta) - (opt.shift ? 1.0 : 0.0);
    V_[i] = opt.potential ? exact::V(eta) : 0.0;
    mH_[i] = -exact::H(eta);
    // N(eta q) = na (sin(eta q)/eta)^2 + nb q^3 xsinc3(2 eta q)
    const double a = exact::alpha0(eta), A = 2.0 * eta * a;
    na_[i] = 4.0 * a * exact::sinc(A);
    nb_[i] = 8.0 * std::cos(A);
    const auto [s1, s2] = coords::characteristic_speeds(eta);
    mu_max_ = std::max({mu_max_, std::abs(s1), std::abs(s2)});
    need = std::max(need, required_dissipation(eta));
  }
  sigma_ = opt.dissipation >= 0 ? opt.dissipation : 1.25 * need;
}

double HscOperator::required_dissipation(double eta) {
  // Where c12 < 0 the centred symbol of c12 d_yy + c21 d_y d_s has growing
  // modes at s = sin(theta/2) with Re(lambda) dy = s sqrt(A - B (1 - s^2)),
  // A = -4 c12, B = c21^2.  The fourth-difference damping is sigma s^4 / dy.
  const double A = -4.0 * coords::c12(eta), B = coords::c21(eta) * coords::c21(eta);
  double need = 0;
  for (int k = 1; k <= 400; ++k) {
    const double s = k / 400.0, q = A - B * (1 - s * s);
    if (q > 0) need = std::max(need, std::sqrt(q) / (s * s * s));
  }
  return need;
}

void HscOperator::dissipate(const Vec& f, Vec& out, double a) const {
  // out += a * sigma/(16 dy) * (fourth difference), even ghosts at 0, off in
  // the last two nodes
  const int n = g_.n;
  const double c = -a * sigma_ / (16.0 * g_.dx);
  auto at = [&](int j) { return f[j < 0 ? -j : j]; };
  for (int i = 0; i < n - 2; ++i)
    out[i] += c * (at(i + 2) - 4 * at(i + 1) + 6 * f[i] - 4 * at(i - 1) + at(i - 2));
}

void HscOperator::rhs(const StateVector& phi, bool nonlinear, StateVector& out) const {
  rhs_impl(phi, nonlinear, out);
  if (sigma_ > 0) {
    dissipate(phi.f1, out.f1, 1.0);
    dissipate(phi.f2, out.f2, 1.0);
  }
}

void HscOperator::rhs_impl(const StateVector& phi, bool nonlinear, StateVector& out) const {
  const int n = g_.n;
  const Vec& p1 = phi.f1;
  const Vec& p2 = phi.f2;
  Vec d1p1(n), d2p1(n), d1p2(n);
  d1_.apply(p1, d1p1);
  d2_.apply(p1, d2p1);
  d1_.apply(p2, d1p2);
  out.f1.resize(n);
  out.f2.resize(n);
  const double shift = opt_.shift ? 1.0 : 0.0;
  for (int i = 0; i < n; ++i) {
    const double eta = g_.x(i);
    // c11 phi1' = (eta c11)(phi1'/eta); phi1'/eta -> phi1''(0) at the centre
    const double q = i == 0 ? d2p1[0] : d1p1[i] / eta;
    out.f1[i] = p2[i] - shift * p1[i];
    double r = c12_[i] * d2p1[i] + c11eta_[i] * q + c21_[i] * d1p2[i] + c20_[i] * p2[i] + V_[i] * p1[i];
    if (nonlinear) {
      const double x = p1[i];
      const double sq = x * exact::sinc(eta * x);
      r += mH_[i] * (na_[i] * sq * sq + nb_[i] * x * x * x * exact::xsinc3(2.0 * eta * x));
    }
    out.f2[i] = r;
  }
}

StateVector HscOperator::apply_L(const StateVector& phi) const {
  check(g_, phi, "apply_L");
  StateVector out;
  rhs_impl(phi, false, out);
  return out;
}

StateVector HscOperator::apply_N(const StateVector& phi) const {
  check(g_, phi, "apply_N");
  StateVector out{Vec(g_.n, 0.0), Vec(g_.n)};
  for (int i = 0; i < g_.n; ++i)
    out.f2[i] = mH_[i] * exact::nonlinearity_scaled(phi.f1[i], g_.x(i));
  return out;
}

StateVector apply_L(const HscOperator& op, const StateVector& phi) { return op.apply_L(phi); }
StateVector apply_N(const HscOperator& op, const StateVector& phi) { return op.apply_N(phi); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::unstable_growth: return "unstable_growth";
    default: return "inconclusive";
  }
}

double surrogate_norm(const StateVector& phi, const RadialGrid& g, int k) {
  check(g, phi, "surrogate_norm");
  const double a = descent::weighted_h5_norm(phi.f1, g, k + 1);
  const double b = descent::weighted_h5_norm(phi.f2, g, k);
  return std::sqrt(a * a + b * b);
}

double gauge_projection(const StateVector& phi, const RadialGrid& g) {
  check(g, phi, "gauge_projection");
  const StateVector f = exact::gauge_mode(g);
  return (l2_eta4(phi.f1, f.f1, g) + l2_eta4(phi.f2, f.f2, g)) / (l2_eta4(f.f1, f.f1, g) + l2_eta4(f.f2, f.f2, g));
}

FlowRun evolve_flow(const HscOperator& op, const StateVector& phi0, double s_max, bool nonlinear,
                    const FlowOptions& fo) {
  const RadialGrid& g = op.grid();
  check(g, phi0, "evolve_flow");
  if (!(s_max >= 0)) throw DomainError("evolve_flow: s_max < 0");
  if (!(fo.cfl > 0) || fo.cfl > 1.0) throw CFLViolation("evolve_flow: cfl must lie in (0, 1]");
  const double ds_max = fo.cfl * g.dx / op.max_speed();
  // steps land exactly on the record times
  const int per_record = static_cast<int>(std::ceil(fo.record_every / ds_max));
  const double ds = fo.record_every / per_record;
  const long nrec = static_cast<long>(std::llround(s_max / fo.record_every));
  FlowRun run;
  run.final_state = phi0;
  StateVector& y = run.final_state;
  const int n = g.n;
  StateVector k1, k2, k3, k4, tmp{Vec(n), Vec(n)};
  auto record = [&](double s) {
    NormSample ns{s, surrogate_norm(y, g, fo.k), gauge_projection(y, g)};
    run.history.push_back(ns);
    run.s_end = s;
    if (!(ns.norm <= fo.overflow)) {
      run.overflow = true;
      return true;
    }
    return fo.stop && fo.stop(ns);
  };
  if (record(0.0)) return run;
  auto axpy2 = [&](const StateVector& k, double a) {
    for (int i = 0; i < n; ++i) {
      tmp.f1[i] = y.f1[i] + a * k.f1[i];
      tmp.f2[i] = y.f2[i] + a * k.f2[i];
    }
  };
  for (long r = 1; r <= nrec; ++r) {
    for (int j = 0; j < per_record; ++j) {
      op.rhs(y, nonlinear, k1);
      axpy2(k1, 0.5 * ds);
      op.rhs(tmp, nonlinear, k2);
      axpy2(k2, 0.5 * ds);
      op.rhs(tmp, nonlinear, k3);
      axpy2(k3, ds);
      op.rhs(tmp, nonlinear, k4);
      for (int i = 0; i < n; ++i) {
        y.f1[i] += ds / 6.0 * (k1.f1[i] + 2 * k2.f1[i] + 2 * k3.f1[i] + k4.f1[i]);
        y.f2[i] += ds / 6.0 * (k1.f2[i] + 2 * k2.f2[i] + 2 * k3.f2[i] + k4.f2[i]);
      }
    }
    if (record(r * fo.record_every)) break;
  }
  return run;
}

double exit_time(double y_supp, double R) {
  if (!(y_supp >= 0 && y_supp < 0.5 && R > 0)) throw DomainError("exit_time: need 0 <= y_supp < 1/2, R > 0");
  const GaussRule& gl = gauss_legendre01(16);
  auto quad = [&](double b, bool slow) {
    const int cells = 64;
    double sum = 0;
    for (int c = 0; c < cells; ++c)
      for (size_t q = 0; q < gl.x.size(); ++q) {
        const double eta = b * (c + gl.x[q]) / cells;
        const auto [fast, sl] = coords::characteristic_speeds(eta);
        sum += gl.w[q] * b / cells / std::abs(slow ? sl : fast);
      }
    return sum;
  };
  return quad(y_supp, true) + quad(R, false);
}

FitResult fit_decay_rate(const NormHistory& h, double s_a, double s_b) {
  std::vector<double> xs, ys;
  for (const auto& p : h) {
    if (p.s < s_a - 1e-12 || p.s > s_b + 1e-12) continue;
    if (!(p.norm > 0)) throw InsufficientData("fit_decay_rate: non-positive norm in window");
    xs.push_back(p.s);
    ys.push_back(std::log(p.norm));
  }
  const size_t m = xs.size();
  if (m < 10) throw InsufficientData("fit_decay_rate: fewer than 10 samples in window");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx, icpt = my - slope * mx;
  double rss = 0;
  for (size_t i = 0; i < m; ++i) {
    const double e = ys[i] - (icpt + slope * xs[i]);
    rss += e * e;
  }
  return {slope, std::sqrt(rss / m)};
}

FlowResult select_T(const std::function<StateVector(double)>& trace_builder, const HscOperator& op, double T_lo,
                    double T_hi, double s_max, const SelectOptions& so) {
  if (!(T_lo < T_hi)) throw BracketError("select_T: need T_lo < T_hi");
  FlowResult res;
  struct Eval {
    double proj;  // projection at the end of the run
    bool complete;
  };
  auto run = [&](double T, bool early) {
    if (++res.evaluations > so.max_evaluations) throw Inconclusive("select_T: evaluation budget exhausted");
    FlowOptions fo = so.flow;
    if (early) fo.stop = [&](const NormSample& ns) { return std::abs(ns.projection) > so.decided; };
    const FlowRun fr = evolve_flow(op, trace_builder(T), s_max, true, fo);
    // an overflowing run may end on non-finite values; keep the last finite one
    double p = 0;
    for (auto it = fr.history.rbegin(); it != fr.history.rend(); ++it)
      if (std::isfinite(it->projection) && std::isfinite(it->norm)) {
        p = it->projection;
        break;
      }
    return Eval{p, !fr.overflow && fr.s_end >= s_max - 1e-12};
  };
  auto sgn = [](double v) { return (v > 0) - (v < 0); };
  double lo = T_lo, hi = T_hi;
  const Eval elo = run(lo, true), ehi = run(hi, true);
  const int slo = sgn(elo.proj), shi = sgn(ehi.proj);
  double root;
  bool found = false;
  if (slo == 0) {
    root = lo;
    found = true;
  } else if (shi == 0) {
    root = hi;
    found = true;
  } else if (slo == shi) {
    throw BracketError("select_T: no sign change of the gauge projection in [T_lo, T_hi]");
  }
  // sign bisection with early exit
  while (!found && hi - lo > so.polish_width) {
    const double mid = 0.5 * (lo + hi);
    const int sm = sgn(run(mid, true).proj);
    if (sm == 0) {
      root = mid;
      found = true;
    } else if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!found) {
    // projection value at s_max; overflowed runs keep their sign
    auto f = [&](double T) {
      const Eval e = run(T, false);
      if (e.complete) return e.proj;
      return sgn(e.proj) * so.flow.overflow;
    };
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0) {
      root = lo;
    } else if (fhi == 0) {
      root = hi;
    } else if (sgn(flo) == sgn(fhi)) {
      throw Inconclusive("select_T: bracket lost after bisection");
    } else {
      boost::uintmax_t iters = static_cast<boost::uintmax_t>(std::max(1, so.max_evaluations - res.evaluations));
      const double tol = so.T_tol;
      auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
      const auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
      root = 0.5 * (br.first + br.second);
    }
  }
  res.selected_T = root;
  ++res.evaluations;
  const FlowRun fin = evolve_flow(op, trace_builder(root), s_max, true, so.flow);
  res.norm_history = fin.history;
  if (fin.overflow) {
    res.verdict = Verdict::unstable_growth;
    return res;
  }
  bool all_zero = true;
  for (const auto& p : fin.history) all_zero = all_zero && p.norm == 0;
  if (all_zero) {
    res.verdict = Verdict::converged;
    return res;
  }
  try {
    const FitResult fit = fit_decay_rate(fin.history, so.fit_start >= 0 ? so.fit_start : so.fit_margin, s_max - so.fit_margin);
    res.fitted_rate = fit.rate;
    res.fit_residual = fit.residual;
    res.verdict = fit.rate < 0 ? Verdict::converged : Verdict::unstable_growth;
  } catch (const InsufficientData&) {
    res.verdict = Verdict::inconclusive;
  }
  return res;
}

}  // namespace wm::hscflow
