#include <doctest.h>

#include <cmath>

#include "wavemaps/coords.hpp"
#include "wavemaps/hscflow.hpp"
#include "wavemaps/radial1d.hpp"

using namespace wm;
using namespace wm::radial1d;

namespace {

StateVector odd_pair(const RadialGrid& g) {
  StateVector f{Vec(g.n), Vec(g.n)};
  for (int i = 0; i < g.n; ++i) {
    const double y = g.x(i);
    f.f1[i] = y * std::exp(-y * y);
    f.f2[i] = 0.5 * y * y * y * std::exp(-2 * y * y);
  }
  return f;
}

double maxdiff(const StateVector& a, const StateVector& b) {
  double m = 0;
  for (size_t i = 0; i < a.f1.size(); ++i)
    m = std::max({m, std::abs(a.f1[i] - b.f1[i]), std::abs(a.f2[i] - b.f2[i])});
  return m;
}

// free wave g(t - x) - g(t + x) pulled back to (s, y) with T = 1
double bump(double z) {
  const double w = (z - 0.3) / 0.15;
  return std::exp(-w * w);
}
double bump_d(double z) {
  const double w = (z - 0.3) / 0.15;
  return -2 * w / 0.15 * std::exp(-w * w);
}
StateVector free_wave(const RadialGrid& g, double s) {
  StateVector f{Vec(g.n), Vec(g.n)};
  const double e = std::exp(-s);
  for (int i = 0; i < g.n; ++i) {
    const double y = g.x(i), t = 1 + e * coords::h(y), x = e * y;
    const double ut = bump_d(t - x) - bump_d(t + x), ux = -bump_d(t - x) - bump_d(t + x);
    f.f1[i] = bump(t - x) - bump(t + x);
    f.f2[i] = -e * coords::h(y) * ut - e * y * ux;
  }
  return f;
}

}  // namespace

TEST_CASE("speeds and fixed point") {
  CHECK(std::abs(speed_minus(-0.5)) < 1e-15);
  CHECK(speed_minus(0.0) > 0);
  CHECK(speed_minus(-1.0) < 0);
  for (double y : {0.1, 1.0, 3.0}) CHECK(speed_plus(y) == doctest::Approx(-speed_minus(-y)).epsilon(1e-14));
}

TEST_CASE("A and B invert each other") {
  double e[2];
  int k = 0;
  for (int n : {257, 513}) {
    const RadialGrid g(n, coords::R_of_b(0.5));
    const StateVector f = odd_pair(g);
    const StateVector back = assemble_B(assemble_A(g, f));
    e[k++] = maxdiff(back, f);
    const CharPair p = assemble_A(g, f);
    const CharPair q = assemble_A(g, assemble_B(p));
    double m = 0;
    for (int i = 0; i < n; ++i) m = std::max({m, std::abs(q.vm[i] - p.vm[i]), std::abs(q.vp[i] - p.vp[i])});
    CHECK(m < 1e-5);
  }
  CHECK(e[1] < 1e-7);
  CHECK(std::log2(e[0] / e[1]) > 3.5);
}

TEST_CASE("zero data") {
  const RadialGrid g(129, 2.0);
  const StateVector z{Vec(g.n, 0.0), Vec(g.n, 0.0)};
  const CharPair p = assemble_A(g, z);
  CHECK(max_abs(p.vm) == 0);
  const CharPair q = transport_step(p, 0.5 * Transport(g).max_ds());
  CHECK(max_abs(q.vm) == 0);
  CHECK(max_abs(q.vp) == 0);
  CHECK_THROWS_AS(transport_step(p, 1.0), CFLViolation);
}

TEST_CASE("fold and unfold") {
  const RadialGrid g(65, 2.0);
  const StateVector f = odd_pair(g);
  const CharPair p = assemble_A(g, f);
  const CharPair q = fold(g, unfold(p));
  for (int i = 1; i < g.n; ++i) {
    CHECK(q.vm[i] == p.vm[i]);
    CHECK(q.vp[i] == p.vp[i]);
  }
}

TEST_CASE("transport against characteristics") {
  const RadialGrid g(1025, coords::R_of_b(0.5));
  const Transport tr(g);
  const RadialGrid& line = tr.line();
  auto v0 = [](double y) { return std::exp(-std::pow((y - 0.4) / 0.25, 2)); };
  Vec v(line.n);
  for (int i = 0; i < line.n; ++i) v[i] = v0(line_x(line, i));
  const double s_end = 0.5;
  tr.evolve(v, s_end);
  // v(s, y) = v0(Y) with Y the foot of the characteristic through (s, y)
  double err = 0;
  for (int i = 0; i < line.n; i += 7) {
    double y = line_x(line, i);
    const int K = 2000;
    const double h = -s_end / K;
    for (int k = 0; k < K; ++k) {
      const double k1 = speed_minus(y), k2 = speed_minus(y + 0.5 * h * k1), k3 = speed_minus(y + 0.5 * h * k2),
                   k4 = speed_minus(y + h * k3);
      y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    err = std::max(err, std::abs(v[i] - v0(y)));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("S1 matches a free wave") {
  double e[2];
  int k = 0;
  for (int n : {257, 513}) {
    const RadialGrid g(n, coords::R_of_b(0.5));
    e[k++] = maxdiff(evolve_S1(g, free_wave(g, 0), 1.0), free_wave(g, 1.0));
  }
  CHECK(e[1] < 5e-5);
  CHECK(std::log2(e[0] / e[1]) > 3.0);
}

TEST_CASE("S1 semigroup") {
  const RadialGrid g(513, coords::R_of_b(0.5));
  const StateVector f = free_wave(g, 0);
  const StateVector a = evolve_S1(g, evolve_S1(g, f, 1.0), 1.0), b = evolve_S1(g, f, 2.0);
  CHECK(maxdiff(a, b) < 1e-5);
  CHECK(maxdiff(evolve_S1(g, f, 0.0), f) < 1e-5);
}

TEST_CASE("growth of v_- and decay of energy") {
  const RadialGrid g(1025, coords::R_of_b(0.5));
  const Transport tr(g);
  const RadialGrid& line = tr.line();
  Vec v(line.n);
  for (int i = 0; i < line.n; ++i) {
    const double z = (line_x(line, i) + 0.5) / 0.02;
    v[i] = z * std::exp(-z * z);
  }
  hscflow::NormHistory hv, he[3];
  for (int k = 0; k <= 30; ++k) {
    const double s = 0.05 * k;
    if (k) tr.evolve(v, 0.05);
    double l2 = 0;
    for (double x : v) l2 += x * x;
    hv.push_back({s, std::sqrt(l2 * line.dx), 0});
    StateVector f = assemble_B(fold(g, v));
    for (double& x : f.f1) x *= std::exp(-s);
    for (double& x : f.f2) x *= std::exp(-s);
    for (int l = 1; l <= 3; ++l) he[l - 1].push_back({s, energy_norm(f, g, l), 0});
  }
  CHECK(hscflow::fit_decay_rate(hv, 0, 1.5).rate <= 0.55);
  for (int l = 0; l < 3; ++l) CHECK(hscflow::fit_decay_rate(he[l], 0, 1.5).rate <= -0.45);
}

TEST_CASE("commutator [D, L] = -D") {
  const RadialGrid g(1025, coords::R_of_b(0.5));
  const RadialGrid line = line_grid(g);
  Vec f(line.n);
  for (int i = 0; i < line.n; ++i) {
    const double y = line_x(line, i);
    f[i] = std::sin(2 * y) * std::exp(-y * y);
  }
  for (int sign : {-1, 1}) {
    const Vec DL = apply_D(apply_L(f, line, sign), line, sign), LD = apply_L(apply_D(f, line, sign), line, sign),
              D = apply_D(f, line, sign);
    double m = 0;
    for (int i = 20; i < line.n - 20; ++i) m = std::max(m, std::abs(DL[i] - LD[i] + D[i]));
    CHECK(m < 1e-5);
  }
}
