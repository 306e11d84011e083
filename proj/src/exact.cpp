#include "wavemaps/exact.hpp"

#include <cmath>

#include "wavemaps/coords.hpp"

namespace wm::exact {

namespace {
const GaussRule& gl16() { return gauss_legendre01(16); }
}  // namespace

double atanc(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 1e-3) return 1.0 - x2 / 3.0 + x2 * x2 / 5.0 - x2 * x2 * x2 / 7.0;
  return std::atan(x) / x;
}

double sinc(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 1e-3) return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
  return std::sin(x) / x;
}

double xsinc3(double x) {
  if (std::abs(x) < 0.5) {
    // sum_k (-1)^k x^{2k} / (2k+3)!
    const double x2 = x * x;
    double term = 1.0 / 6.0, sum = term;
    for (int k = 1; k < 8; ++k) {
      term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
      sum += term;
    }
    return sum;
  }
  return (x - std::sin(x)) / (x * x * x);
}

double eval_blowup(double T, double t, double r) {
  if (r < 0) throw DomainError("eval_blowup: r < 0");
  const double d = T - t;
  if (r == 0) {
    if (d > 0) return 2.0 / d;
    throw DomainError("eval_blowup: singular at r = 0 for t >= T");
  }
  const double rho = std::hypot(d, r);
  // denominator T - t + sqrt((T-t)^2 + r^2), rationalised when T - t <= 0
  const double den = d > 0 ? d + rho : r * r / (rho - d);
  return 4.0 * atanc(r / den) / den;
}

double eval_blowup_dt(double T, double t, double r) {
  const double d = T - t;
  if (d == 0 && r == 0) throw DomainError("eval_blowup_dt: blowup point");
  return 2.0 / (d * d + r * r);
}

double eval_blowup_dr(double T, double t, double r) {
  const double d = T - t;
  if (r == 0) {
    if (d > 0) return 0.0;
    throw DomainError("eval_blowup_dr: singular at r = 0 for t >= T");
  }
  if (d > 0 && r < 1e-2 * d) {
    const double x2 = (r / d) * (r / d);
    const double q = -2.0 / 3.0 + x2 * (4.0 / 5.0 + x2 * (-6.0 / 7.0 + x2 * 8.0 / 9.0));
    return 2.0 * r * q / (d * d * d);
  }
  return (2.0 * d / (d * d + r * r) - eval_blowup(T, t, r)) / r;
}

double eval_dT_blowup(double T, double t, double r) {
  const double d = T - t;
  if (d == 0 && r == 0) throw DomainError("eval_dT_blowup: blowup point");
  return -2.0 / (d * d + r * r);
}

double psi_star(double T, double t, double r) { return r * eval_blowup(T, t, r); }

double psi_T(double T, double t, double r) {
  if (!(t < T)) throw DomainError("psi_T: requires t < T");
  return 2.0 * std::atan(r / (T - t));
}

double alpha0(double eta) {
  const double hv = coords::h(eta);
  const double rho = std::hypot(eta, hv);
  const double q = hv < 0 ? rho - hv : eta * eta / (rho + hv);
  return 4.0 * atanc(eta / q) / q;
}

double H(double eta) {
  const double s = coords::S(eta);
  return -2.0 * (s - 1.0) * (s - 1.0);
}

double V(double eta) {
  // H (2cos(2x) - 2)/eta^2 = -4 H (sin(x)/eta)^2 with x = eta alpha0
  const double a = alpha0(eta);
  const double sc = a * sinc(eta * a);
  return -4.0 * H(eta) * sc * sc;
}

double V0(double rho) {
  const double q = 1.0 + rho * rho;
  return -16.0 / (q * q);
}

double V0_composed(double rho) {
  if (rho == 0) throw DomainError("V0_composed: rho = 0");
  return 2.0 / (rho * rho) * (std::cos(8.0 * std::atan(rho / (1.0 + std::sqrt(1.0 + rho * rho)))) - 1.0);
}

double F_direct(double u, double r) {
  const double x = 2.0 * r * u;
  return (x - std::sin(x)) / (r * r * r);
}

double F(double u, double r) {
  const double x = 2.0 * r * u;
  if (std::abs(x) < 1e-4) return 8.0 * u * u * u * xsinc3(x);
  if (std::abs(x) > 40.0) return F_direct(u, r);
  const auto& g = gl16();
  double s = 0;
  for (int i = 0; i < 16; ++i) s += g.w[i] * std::cos(g.x[i] * x) * (1.0 - g.x[i]) * (1.0 - g.x[i]);
  return 4.0 * u * u * u * s;
}

double Phi0(double f, double eta) {
  const double a = alpha0(eta);
  const auto& g = gl16();
  double s = 0;
  for (int i = 0; i < 16; ++i)
    s += g.w[i] * std::cos(2.0 * eta * (a + g.x[i] * f)) * (1.0 - g.x[i]) * (1.0 - g.x[i]);
  return 4.0 * s;
}

double nonlinearity_scaled(double q, double eta) {
  const double a = alpha0(eta);
  const double c = 4.0 * a * sinc(2.0 * eta * a);  // 2 sin(2 eta a)/eta
  return c * q * q + q * q * q * Phi0(q, eta);
}

double nonlinearity_scaled_fast(double q, double eta) {
  // sin(A+x) - sin A - x cos A = -2 sin A sin^2(x/2) - cos A x^3 G(x), x = 2 eta q
  const double a = alpha0(eta);
  const double A = 2.0 * eta * a;
  const double sq = q * sinc(eta * q);  // sin(eta q)/eta
  return 4.0 * a * sinc(A) * sq * sq + 8.0 * std::cos(A) * q * q * q * xsinc3(2.0 * eta * q);
}

double eval_nonlinearity(double p, double eta) {
  if (eta < 0) throw DomainError("eval_nonlinearity: eta < 0");
  if (eta == 0) {
    if (p == 0) return 0.0;
    throw DomainError("eval_nonlinearity: p != 0 at eta = 0");
  }
  if (eta < 1e-4 || std::abs(p) < 1e-3) return nonlinearity_scaled(p / eta, eta);
  const double A = 2.0 * eta * alpha0(eta);
  return -(std::sin(A + 2.0 * p) - std::sin(A) - 2.0 * std::cos(A) * p) / (eta * eta * eta);
}

PotentialTable potential_table(const RadialGrid& g) {
  return {g, sample(g, alpha0), sample(g, V), sample(g, H)};
}

StateVector gauge_mode(const RadialGrid& g) {
  StateVector f;
  f.f1 = sample(g, [](double e) {
    const double hv = coords::h(e);
    return 1.0 / (e * e + hv * hv);
  });
  f.f2 = f.f1;
  for (double& v : f.f2) v *= 2.0;
  return f;
}

}  // namespace wm::exact
