#include <doctest.h>

#include <cmath>
#include <random>

#include "wavemaps/coords.hpp"
#include "wavemaps/exact.hpp"

using namespace wm;
using namespace wm::exact;

namespace {
double residual(double t, double r, double h) {
  auto u = [](double t, double r) { return eval_blowup(1.0, t, r); };
  const double c = u(t, r);
  const double utt = (u(t + h, r) - 2 * c + u(t - h, r)) / (h * h);
  const double urr = (u(t, r + h) - 2 * c + u(t, r - h)) / (h * h);
  const double ur = (u(t, r + h) - u(t, r - h)) / (2 * h);
  return utt - urr - 4.0 / r * ur - F(c, r);
}
}  // namespace

TEST_CASE("blowup family values") {
  CHECK(eval_blowup(1, 0, 1) == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(eval_blowup(1, 0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eval_blowup(1, 0, 1e-9) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eval_blowup(1, 0.5, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(eval_dT_blowup(1, 0, 0) == doctest::Approx(-2.0));
  CHECK(eval_dT_blowup(1, 1, 1) == doctest::Approx(-2.0));
  // topological charge change across t = T
  CHECK(psi_star(1, 1.5, 1e-8) == doctest::Approx(2 * M_PI).epsilon(1e-7));
  CHECK(std::abs(psi_star(1, 0.5, 1e-8)) < 1e-7);
  CHECK(psi_T(1, 0.2, 0.7) == doctest::Approx(psi_star(1, 0.2, 0.7)).epsilon(1e-14));
}

TEST_CASE("derivatives against differences") {
  const double d = 1e-6;
  for (auto [t, r] : {std::pair{0.0, 0.5}, {0.4, 1.1}, {1.5, 0.8}}) {
    CHECK(eval_blowup_dt(1, t, r) ==
          doctest::Approx((eval_blowup(1, t + d, r) - eval_blowup(1, t - d, r)) / (2 * d)).epsilon(1e-7));
    CHECK(eval_blowup_dr(1, t, r) ==
          doctest::Approx((eval_blowup(1, t, r + d) - eval_blowup(1, t, r - d)) / (2 * d)).epsilon(1e-7));
    CHECK(eval_dT_blowup(1, t, r) ==
          doctest::Approx((eval_blowup(1 + d, t, r) - eval_blowup(1 - d, t, r)) / (2 * d)).epsilon(1e-7));
  }
}

TEST_CASE("PDE residual converges at second order") {
  CHECK(std::abs(residual(0.3, 0.7, 1e-3)) < 1e-4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> T(0, 0.8), R(0.1, 2.0);
  int good = 0;
  for (int k = 0; k < 100; ++k) {
    const double t = T(rng), r = R(rng);
    const double a = std::abs(residual(t, r, 1.0 / 256)), b = std::abs(residual(t, r, 1.0 / 512));
    const double o = std::log2(a / b);
    if (o > 1.8 && o < 2.2) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("nonlinearity forms agree") {
  // the direct form cancels badly for small 2ru, so compare only away from it
  for (double u : {0.3, 2.0, 5.0})
    for (double r : {0.1, 0.5, 1.7}) CHECK(F(u, r) == doctest::Approx(F_direct(u, r)).epsilon(1e-9));
  CHECK(F(0.3, 1e-6) == doctest::Approx(4 * 0.027 / 3).epsilon(1e-10));
  CHECK(F(0, 0.3) == 0);
  for (double eta : {1e-6, 1e-3, 0.2, 1.0, 3.0}) {
    CHECK(eval_nonlinearity(0, eta) == 0);
    CHECK(nonlinearity_scaled(0, eta) == 0);
    // no linear term
    CHECK(std::abs(nonlinearity_scaled(1e-4, eta)) < 1e-6);
    for (double q : {0.05, -0.3, 1.2})
      CHECK(nonlinearity_scaled_fast(q, eta) == doctest::Approx(nonlinearity_scaled(q, eta)).epsilon(1e-11));
  }
  CHECK(eval_nonlinearity(0.1, 1.0) == doctest::Approx(nonlinearity_scaled(0.1, 1.0)).epsilon(1e-12));
  // finite and smooth as eta -> 0 with p = eta q
  const double q = 0.4;
  CHECK(nonlinearity_scaled(q, 0) == doctest::Approx(nonlinearity_scaled(q, 1e-5)).epsilon(1e-8));
}

TEST_CASE("similarity profile and potentials") {
  CHECK(alpha0(0) == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-14));
  // alpha0 = e^{-s} u_1^* on the hyperboloid through s = 0
  for (double eta : {0.2, 0.9, 2.0}) {
    const auto [t, r] = coords::hsc_to_cartesian({1.0}, 0, eta);
    CHECK(alpha0(eta) == doctest::Approx(eval_blowup(1, t, r)).epsilon(1e-13));
  }
  CHECK(H(0.5) < 0);
  CHECK(H(0.0) == doctest::Approx(1.0 / coords::g00(0.0)).epsilon(1e-13));
  for (double rho : {0.01, 0.3, 0.9}) CHECK(V0(rho) == doctest::Approx(V0_composed(rho)).epsilon(1e-10));
  const RadialGrid g(201, coords::R_of_b(0.5));
  const PotentialTable pt = potential_table(g);
  for (double v : pt.V) CHECK(std::isfinite(v));
  CHECK(pt.V[0] == doctest::Approx(V(1e-6)).epsilon(1e-8));
}

TEST_CASE("gauge mode") {
  const RadialGrid g(101, 2.0);
  const StateVector f = gauge_mode(g);
  CHECK(f.f1[0] == doctest::Approx(2.914214).epsilon(1e-6));
  CHECK(f.f2[0] == doctest::Approx(5.828427).epsilon(1e-6));
  for (int i = 0; i < g.n; ++i) {
    CHECK(f.f1[i] > 0);
    CHECK(f.f2[i] == doctest::Approx(2 * f.f1[i]).epsilon(1e-15));
  }
}
