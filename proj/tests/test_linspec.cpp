#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "wavemaps/exact.hpp"
#include "wavemaps/linspec.hpp"

using namespace wm;
using namespace wm::linspec;

TEST_CASE("potential") {
  // the mode potential is V0 plus the centrifugal 2/rho^2
  for (int k = 1; k <= 10; ++k) {
    const double r = 0.095 * k;
    CHECK(potential(r) == doctest::Approx(exact::V0(r) + 2 / (r * r)).epsilon(1e-12));
    CHECK(potential(r) == doctest::Approx(exact::V0_composed(r) + 2 / (r * r)).epsilon(1e-10));
  }
}

TEST_CASE("Frobenius seeds reproduce the gauge eigenfunction") {
  const double o = 0.05;
  const Seed a = frobenius_seed(1.0, Endpoint::zero, o);
  CHECK(std::abs(a.f - o / (1 + o * o)) < 1e-14);
  CHECK(std::abs(a.df - (1 - o * o) / std::pow(1 + o * o, 2)) < 1e-13);
  const double r = 1 - o;
  const Seed b = frobenius_seed(1.0, Endpoint::one, o);
  CHECK(std::abs(b.f - 2 * r / (1 + r * r)) < 1e-13);
  CHECK(std::abs(b.df - 2 * (1 - r * r) / std::pow(1 + r * r, 2)) < 1e-12);
  // indicial roots 0 and 1 - lambda collide at lambda = 0
  CHECK_THROWS_AS(frobenius_seed(0.0, Endpoint::one, o), SeriesDivergence);
}

TEST_CASE("mismatch") {
  CHECK(shoot(1.0).normalized() < 1e-9);
  CHECK(shoot(0.5).normalized() > 0.1);
  CHECK(shoot(2.0).normalized() > 0.1);
  const cplx l(0.7, 1.3);
  CHECK(std::abs(shoot_mismatch(std::conj(l)) - std::conj(shoot_mismatch(l))) < 1e-12 * std::abs(shoot_mismatch(l)));
  // analytic in lambda
  const double h = 1e-5;
  const cplx dre = (shoot_mismatch(l + h) - shoot_mismatch(l - h)) / (2 * h);
  const cplx dim = (shoot_mismatch(l + cplx(0, h)) - shoot_mismatch(l - cplx(0, h))) / cplx(0, 2 * h);
  CHECK(std::abs(dre - dim) < 1e-6 * std::abs(dre));
}

TEST_CASE("scan") {
  ScanOptions so;
  so.jobs = 2;
  const auto c = scan_halfplane(0, 2.5, -4, 4, 60, 80, so);
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0].lambda - 1.0) < 1e-6);
  CHECK(c[0].converged);
  CHECK(c[0].mismatch_abs < so.tol_match);
  CHECK(scan_halfplane(0.5, 0.5, -1, 1, 10, 10, so).empty());
  CHECK_THROWS_AS(scan_halfplane(-0.5, 0, -1, 1, 10, 10, so), DomainError);
  const auto j = nlohmann::json::parse(spectrum_json(c));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["re"].get<double>() == doctest::Approx(1.0));
  CHECK(j[0]["converged"].get<bool>());
  CHECK(j[0].contains("im"));
  CHECK(j[0].contains("mismatch_abs"));
}

TEST_CASE("eigenfunction") {
  std::vector<double> rho;
  for (int i = 1; i < 200; ++i) rho.push_back(i / 200.0);
  rho.push_back(0.999);
  const auto f = eigenfunction(1.0, rho);
  double err = 0;
  for (size_t i = 0; i < rho.size(); ++i) err = std::max(err, std::abs(f[i] - rho[i] / (1 + rho[i] * rho[i]) / 0.4));
  CHECK(err < 1e-8 * 1.25);
  CHECK(std::abs(f.back()) < 2);
}
