#include <doctest.h>

#include <cmath>
#include <random>

#include "wavemaps/coords.hpp"
#include "wavemaps/exact.hpp"
#include "wavemaps/hscflow.hpp"

using namespace wm;
using namespace wm::hscflow;

namespace {

NormHistory synthetic(double a, double rate, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  NormHistory h;
  for (int k = 0; k <= 100; ++k) {
    const double s = 0.05 * k;
    h.push_back({s, a * std::exp(rate * s) * (1 + noise * U(rng)), 0});
  }
  return h;
}

StateVector scaled(const StateVector& f, double c) {
  StateVector o = f;
  for (double& x : o.f1) x *= c;
  for (double& x : o.f2) x *= c;
  return o;
}

StateVector bump(const RadialGrid& g, double amp) {
  return {sample(g, [&](double e) { return amp * std::exp(-std::pow(e / 0.3, 2)); }),
          sample(g, [&](double e) { return -amp * std::exp(-std::pow(e / 0.3, 2)); })};
}

}  // namespace

TEST_CASE("decay fits") {
  const FitResult a = fit_decay_rate(synthetic(3, -0.7, 0, 1), 0, 5);
  CHECK(a.rate == doctest::Approx(-0.7).epsilon(1e-10));
  CHECK(a.residual < 1e-10);
  CHECK(fit_decay_rate(synthetic(1, 1.0, 0, 1), 0, 5).rate == doctest::Approx(1.0).epsilon(1e-10));
  for (std::uint64_t seed : {1, 2, 3}) CHECK(std::abs(fit_decay_rate(synthetic(1, -0.4, 0.01, seed), 0, 5).rate + 0.4) < 0.02);
  CHECK_THROWS_AS(fit_decay_rate(synthetic(1, -0.4, 0, 1), 0, 0.3), InsufficientData);
  NormHistory z = synthetic(1, -0.4, 0, 1);
  z[20].norm = 0;
  CHECK_THROWS_AS(fit_decay_rate(z, 0, 5), InsufficientData);
}

TEST_CASE("operator geometry") {
  CHECK_THROWS_AS(HscOperator(RadialGrid(65, 0.4)), GeometryError);
  const HscOperator op(RadialGrid(129, coords::R_of_b(0.1)));
  CHECK(op.dissipation() > 0);
  CHECK(op.max_speed() > 0);
}

TEST_CASE("gauge mode is an eigenfunction") {
  double e[2];
  int k = 0;
  for (int n : {257, 513}) {
    const RadialGrid g(n, coords::R_of_b(0.5));
    const HscOperator op(g);
    const StateVector f = exact::gauge_mode(g);
    const StateVector Lf = apply_L(op, f);
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
      num += std::pow(Lf.f1[i] - f.f1[i], 2) + std::pow(Lf.f2[i] - f.f2[i], 2);
      den += f.f1[i] * f.f1[i] + f.f2[i] * f.f2[i];
    }
    e[k++] = std::sqrt(num / den);
  }
  CHECK(e[1] < 1e-3);
  CHECK(std::log2(e[0] / e[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("constants and the potential") {
  const RadialGrid g(65, 2.0);
  OperatorOptions off;
  off.potential = false;
  const HscOperator a(g, off), b(g);
  const StateVector c{Vec(g.n, 0.7), Vec(g.n, 0.0)};
  const StateVector la = apply_L(a, c), lb = apply_L(b, c);
  for (int i : {0, 20, 64}) {
    CHECK(la.f1[i] == doctest::Approx(-0.7));
    CHECK(std::abs(la.f2[i]) < 1e-10);
    CHECK(lb.f2[i] - la.f2[i] == doctest::Approx(0.7 * exact::V(g.x(i))).epsilon(1e-12));
  }
}

TEST_CASE("nonlinearity") {
  const RadialGrid g(129, coords::R_of_b(0.5));
  const HscOperator op(g);
  const StateVector z{Vec(g.n, 0.0), Vec(g.n, 0.0)};
  CHECK(max_abs(apply_N(op, z).f2) == 0);
  const StateVector p = bump(g, 1.0);
  const double n1 = max_abs(apply_N(op, scaled(p, 1e-3)).f2), n2 = max_abs(apply_N(op, scaled(p, 1e-2)).f2);
  CHECK(n2 / n1 == doctest::Approx(100).epsilon(0.05));
  // the stepper's fast form agrees with apply_N
  StateVector r1, r0;
  op.rhs(scaled(p, 0.1), true, r1);
  op.rhs(scaled(p, 0.1), false, r0);
  const StateVector N = apply_N(op, scaled(p, 0.1));
  const double Nmax = max_abs(N.f2);
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(r1.f2[i] - r0.f2[i] - N.f2[i]) < 1e-9 * Nmax);
}

TEST_CASE("flow basics") {
  const RadialGrid g(129, coords::R_of_b(0.5));
  const HscOperator op(g);
  const StateVector z{Vec(g.n, 0.0), Vec(g.n, 0.0)};
  for (bool nl : {false, true}) {
    const FlowRun r = evolve_flow(op, z, 1.0, nl);
    CHECK(max_abs(r.final_state.f1) == 0);
    for (const auto& p : r.history) CHECK(p.norm == 0);
  }
  // linearity and monotone s
  const StateVector p = bump(g, 1e-2);
  const FlowRun a = evolve_flow(op, p, 1.0, false), b = evolve_flow(op, scaled(p, 2.0), 1.0, false);
  for (int i = 0; i < g.n; ++i) CHECK(b.final_state.f1[i] == doctest::Approx(2 * a.final_state.f1[i]).scale(1e-15));
  for (size_t k = 1; k < a.history.size(); ++k) CHECK(a.history[k].s > a.history[k - 1].s);
}

TEST_CASE("gauge mode grows like e^s, the rest decays") {
  const RadialGrid g(257, coords::R_of_b(0.5));
  const HscOperator op(g);
  const StateVector f = exact::gauge_mode(g);
  const FlowRun r = evolve_flow(op, scaled(f, 1e-3), 3.0, false);
  CHECK(fit_decay_rate(r.history, 1.0, 3.0).rate == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gauge_projection(f, g) == doctest::Approx(1.0).epsilon(1e-12));

  // the L^2 projection is not the spectral one, so remove f1* along the
  // way: phi(s) - <phi(s), f1*> f1* only sees the decaying part
  const StateVector p = bump(g, 1e-3);
  NormHistory rest;
  StateVector phi = p;
  for (int k = 0; k <= 24; ++k) {
    const double c = gauge_projection(phi, g);
    StateVector w = phi;
    for (int i = 0; i < g.n; ++i) {
      w.f1[i] -= c * f.f1[i];
      w.f2[i] -= c * f.f2[i];
    }
    rest.push_back({0.25 * k, surrogate_norm(w, g, 2), c});
    phi = evolve_flow(op, phi, 0.25, false).final_state;
  }
  CHECK(fit_decay_rate(rest, 3.0, 6.0).rate < -0.05);
}

TEST_CASE("exit time") {
  const double R = coords::R_of_b(0.5);
  CHECK_THROWS_AS(exit_time(0.5, R), DomainError);
  CHECK_THROWS_AS(exit_time(-0.1, R), DomainError);
  CHECK(exit_time(0.2, R) > exit_time(0.1, R));
  CHECK(exit_time(0.1, 2 * R) > exit_time(0.1, R));
  // no inward leg for data at the centre: int_0^R d eta / mu_+
  double t = 0;
  const int K = 200000;
  for (int k = 0; k < K; ++k) t += R / K / coords::characteristic_speeds((k + 0.5) * R / K).first;
  CHECK(exit_time(0, R) == doctest::Approx(t).epsilon(1e-8));
}

TEST_CASE("selection of T") {
  const RadialGrid g(129, coords::R_of_b(0.5));
  const HscOperator op(g);
  const StateVector f = exact::gauge_mode(g);
  SelectOptions so;
  so.T_tol = 1e-12;
  // zero data selects T = 1
  const FlowResult z = select_T([&](double T) { return scaled(f, 2 * (T - 1)); }, op, 0.95, 1.05, 3.0, so);
  CHECK(std::abs(z.selected_T - 1.0) < 1e-10);
  CHECK(z.verdict == Verdict::converged);
  // a shifted gauge component is removed
  const StateVector p = bump(g, 1e-3);
  auto builder = [&](double T) {
    StateVector u = scaled(f, 2 * (T - 1.01));
    for (int i = 0; i < g.n; ++i) {
      u.f1[i] += p.f1[i];
      u.f2[i] += p.f2[i];
    }
    return u;
  };
  const FlowResult r = select_T(builder, op, 0.95, 1.05, 3.0, so);
  CHECK(r.selected_T > 0.95);
  CHECK(r.selected_T < 1.05);
  CHECK(std::abs(r.norm_history.back().projection) < 1e-6);
  CHECK_THROWS_AS(select_T(builder, op, 1.03, 1.05, 3.0, so), BracketError);
}
