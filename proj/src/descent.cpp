#include "wavemaps/descent.hpp"

#include <algorithm>
#include <cmath>

#include "wavemaps/coords.hpp"

namespace wm::descent {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void check_size(const RadialGrid& g, const StateVector& f, const char* who) {
  if (static_cast<int>(f.f1.size()) != g.n || static_cast<int>(f.f2.size()) != g.n)
    throw GridMismatch(std::string(who) + ": size mismatch");
}

// Integrand pieces of the inverse, each divided by the power of eta that
// makes it a smooth even function.
double kpsi(double S) { return -(2 * S * S - 4 * S + 3) / (S * (S - 1) * (S - 1)); }
double kphi(double S) {
  const double S2 = S * S;
  return -(4 * S2 * S - 7 * S2 - 2 * kSqrt2 * S2 + 2 * S + 4 * kSqrt2 * S - 3 * kSqrt2 + 2) /
         (S * (S - 1) * (S - 1));
}
double jphi(double S) { return -1.0 / (S * (S - 1) * (S + kSqrt2)); }
double jpsi(double S) { return -1.0 / (S * (S - 1)); }

}  // namespace

DescentCoefficients descent_coefficients(double eta) {
  using namespace coords;
  const double s = S(eta), e2 = eta * eta;
  DescentCoefficients c{};
  c.a11 = e2 * s * (2.0 - s) / (2.0 * (s - 1.0));
  c.a10 = 3.0 * eta;
  c.a20 = -e2 * eta / (2.0 * (s - 1.0));
  c.b12 = c.a20 * c12(eta);
  // a20 c11 computed as (a20/eta)(eta c11)
  c.b11 = -e2 / (2.0 * (s - 1.0)) * c11eta_5(eta) - c.a11;
  c.b10 = -c.a10;
  c.b21 = c.a20 * c21(eta) + c.a11;
  c.b20 = c.a10 + c.a20 * (c20_5(eta) - 1.0);
  return c;
}

double phi(double eta) { return 1.0 / (eta * (coords::S(eta) + kSqrt2)); }
double psi(double eta) { return 1.0 / (eta * eta * eta); }
double wronskian(double eta) {
  const double e2 = eta * eta;
  return -1.0 / (e2 * e2 * eta * coords::S(eta));
}
double coef_a(double eta) {
  const double s = coords::S(eta);
  return (2 * s * s - s - 2) / (s * (s - 1));
}
double coef_b(double eta) {
  const double s = coords::S(eta);
  return 1.0 / (s * s * (s - 1));
}

StateVector apply_L(int d, const RadialGrid& g, const StateVector& f, int order) {
  check_size(g, f, "apply_L");
  if (d != 1 && d != 5) throw DomainError("apply_L: d must be 1 or 5");
  const Parity p = d == 5 ? Parity::even : Parity::odd;
  const Vec f1p = derivative(f.f1, g, 1, order, p);
  const Vec f1pp = derivative(f.f1, g, 2, order, p);
  const Vec f2p = derivative(f.f2, g, 1, order, p);
  StateVector out{f.f2, Vec(g.n)};
  for (int i = 0; i < g.n; ++i) {
    const double eta = g.x(i);
    double first;
    if (d == 5) {
      // c11 f1' = (eta c11)(f1'/eta), with f1'/eta -> f1''(0) at the centre
      const double q = i == 0 ? f1pp[0] : f1p[i] / eta;
      first = coords::c11eta_5(eta) * q;
    } else {
      first = coords::c11_1(eta) * f1p[i];
    }
    const double c20 = d == 5 ? coords::c20_5(eta) : coords::c20_1(eta);
    out.f2[i] = coords::c12(eta) * f1pp[i] + first + coords::c21(eta) * f2p[i] + c20 * f.f2[i];
  }
  return out;
}

StateVector apply_D5_exact(const RadialGrid& g, const StateVector& f, const Vec& d1f1, const Vec& d2f1,
                           const Vec& d1f2) {
  check_size(g, f, "apply_D5");
  StateVector out{Vec(g.n), Vec(g.n)};
  for (int i = 0; i < g.n; ++i) {
    const auto c = descent_coefficients(g.x(i));
    out.f1[i] = c.a11 * d1f1[i] + c.a10 * f.f1[i] + c.a20 * f.f2[i];
    out.f2[i] = c.b12 * d2f1[i] + c.b11 * d1f1[i] + c.b10 * f.f1[i] + c.b21 * d1f2[i] + c.b20 * f.f2[i];
  }
  return out;
}

StateVector apply_D5(const RadialGrid& g, const StateVector& f, int order) {
  check_size(g, f, "apply_D5");
  return apply_D5_exact(g, f, derivative(f.f1, g, 1, order, Parity::even),
                        derivative(f.f1, g, 2, order, Parity::even),
                        derivative(f.f2, g, 1, order, Parity::even));
}

StateVector apply_D5_inverse(const RadialGrid& g, const StateVector& gv) {
  check_size(g, gv, "apply_D5_inverse");
  const double scale = std::max({1.0, max_abs(gv.f1), max_abs(gv.f2)});
  if (std::abs(gv.f1[0]) > 1e-10 * scale || std::abs(gv.f2[0]) > 1e-10 * scale)
    throw ParityError("apply_D5_inverse: input must vanish at eta = 0");
  const int n = g.n;
  // g/eta is even; its centre value comes from the first three nodes
  Vec q1(n), q2(n);
  for (int i = 1; i < n; ++i) {
    q1[i] = gv.f1[i] / g.x(i);
    q2[i] = gv.f2[i] / g.x(i);
  }
  q1[0] = even_limit(q1[1], q1[2], q1[3]);
  q2[0] = even_limit(q2[1], q2[2], q2[3]);
  Vec Gpsi(n), Gphi(n), Hphi(n), Hpsi(n);
  for (int i = 0; i < n; ++i) {
    const double s = coords::S(g.x(i));
    Gpsi[i] = kpsi(s) * q1[i];
    Gphi[i] = kphi(s) * q1[i];
    Hphi[i] = jphi(s) * q2[i];
    Hpsi[i] = jpsi(s) * q2[i];
  }
  // all four integrals divided by eta^3
  const Vec Jpsi = scaled_primitive(Gpsi, g, 2, 3);
  const Vec Jphi = scaled_primitive(Gphi, g, 2, 3);
  const Vec Qphi = scaled_primitive(Hphi, g, 4, 3);
  const Vec Qpsi = scaled_primitive(Hpsi, g, 2, 3);
  StateVector f{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    const double eta = g.x(i), s = coords::S(eta), e2 = eta * eta;
    const double B1 = 2 * s - 3 * kSqrt2 + 2, C1 = -3.0, A1 = -(2 * s - 3) / (s - 1);
    f.f1[i] = e2 * (Jpsi[i] - Qpsi[i]) / (s + kSqrt2) - Jphi[i] + Qphi[i];
    f.f2[i] = A1 * q1[i] + B1 * (Jpsi[i] - Qpsi[i]) + C1 * (Jphi[i] - Qphi[i]);
  }
  return f;
}

double hk_norm(const Vec& f, const RadialGrid& g, Parity p, int k) {
  if (k < 0 || k > 4) throw OrderError("hk_norm: k must lie in [0, 4]");
  double sum = 0;
  for (int j = 0; j <= k; ++j) {
    const Vec d = j == 0 ? f : derivative(f, g, j, 4, p);
    Vec sq(g.n);
    for (int i = 0; i < g.n; ++i) sq[i] = d[i] * d[i];
    sum += integral(sq, g.dx, p == Parity::none ? Parity::none : Parity::even);
  }
  return std::sqrt(sum);
}

double weighted_h5_norm(const Vec& f, const RadialGrid& g, int k) {
  if (k < 0 || k > 4) throw OrderError("weighted_h5_norm: k must lie in [0, 4]");
  if (static_cast<int>(f.size()) != g.n) throw GridMismatch("weighted_h5_norm: size mismatch");
  Vec w(g.n);
  for (int i = 0; i < g.n; ++i) w[i] = g.x(i) * g.x(i) * f[i];
  return hk_norm(w, g, Parity::even, k);
}

}  // namespace wm::descent
