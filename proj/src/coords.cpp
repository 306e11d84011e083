#include "wavemaps/coords.hpp"

#include <cmath>

namespace wm::coords {

double S(double eta) { return std::sqrt(2.0 + eta * eta); }
double h(double eta) { return S(eta) - 2.0; }
double hp(double eta) { return eta / S(eta); }
double hpp(double eta) {
  const double s = S(eta);
  return 2.0 / (s * s * s);
}
// eta h' - h = 2 - 2/S
double h1(double eta) {
  const double s = S(eta);
  return s / (2.0 * (s - 1.0));
}
double h1p(double eta) {
  const double s = S(eta);
  return -eta / (2.0 * s * (s - 1.0) * (s - 1.0));
}

double R_of_b(double b) {
  if (!(b > 0) || !(b < 1)) throw DomainError("R_of_b: b must lie in (0,1)");
  return (2.0 * b + std::sqrt(2.0 * (1.0 + b * b))) / (1.0 - b * b);
}

std::pair<double, double> hsc_to_cartesian(const CoordChart& c, double s, double y) {
  const double e = std::exp(-s);
  return {c.T + e * h(y), e * y};
}

std::pair<double, double> cartesian_to_hsc(const CoordChart& c, double t, double r) {
  const double d = t - c.T;
  if (r < 0 || (d >= 0 && d >= r)) throw DomainError("cartesian_to_hsc: outside chart");
  // e^{-s} = (sqrt(2(r^2+d^2)) - 2d)/2 and y = r e^{s}
  const double em = 0.5 * (std::sqrt(2.0 * (r * r + d * d)) - 2.0 * d);
  return {-std::log(em), r / em};
}

std::pair<double, double> hsc_to_similarity(double s, double y) {
  if (y < 0) throw DomainError("hsc_to_similarity: negative radius");
  const double hv = h(y);
  if (!(hv < 0)) throw DomainError("hsc_to_similarity: h(y) >= 0, chart undefined");
  return {s - std::log(-hv), -y / hv};
}

double c12(double eta) {
  const double s = S(eta);
  return -s * s * (2.0 * s - 3.0);
}
double c21(double eta) { return -2.0 * S(eta) * eta; }
double c11eta_5(double eta) {
  const double s = S(eta), s2 = s * s;
  return -(6.0 * s2 * s2 - 20.0 * s2 * s + 19.0 * s2 - 6.0) / (s - 1.0);
}
double c20_5(double eta) {
  const double s = S(eta);
  return -(4.0 * s * s - 9.0 * s + 6.0) / (s - 1.0);
}
double c11_1(double eta) {
  const double s = S(eta);
  return -eta * (2.0 * s * s - 4.0 * s + 3.0) / (s - 1.0);
}
double c20_1(double eta) {
  const double s = S(eta);
  return (s - 2.0) / (s - 1.0);
}

SystemCoefficients system_coefficients(int d, double eta) {
  if (d == 1) return {c12(eta), c11_1(eta), c21(eta), c20_1(eta)};
  if (d == 5) {
    if (!(eta > 0)) throw DomainError("system_coefficients: d=5 needs eta > 0");
    return {c12(eta), c11eta_5(eta) / eta, c21(eta), c20_5(eta)};
  }
  throw DomainError("system_coefficients: only d = 1 and d = 5 are implemented");
}

std::pair<double, double> characteristic_speeds(double eta) {
  // mu^2 + c21 mu - c12 = 0
  const double a = c21(eta), b = c12(eta);
  const double disc = std::sqrt(a * a + 4.0 * b);
  return {0.5 * (-a + disc), 0.5 * (-a - disc)};
}

double g00(double eta) {
  const double s = S(eta);
  return -0.5 / ((s - 1.0) * (s - 1.0));
}
double g0r(double eta) {
  const double s = S(eta);
  return -eta * s / (2.0 * eta * eta - 4.0 * s + 6.0);
}
double grr(double eta) {
  const double s = S(eta);
  return (0.5 * eta * eta * (1.0 - 2.0 * s) + (s - 1.0) * (s - 1.0)) / ((s - 1.0) * (s - 1.0));
}
double div0(double eta) {
  const double s = S(eta), e2 = eta * eta;
  return (-4.0 * e2 + 9.0 * s - 14.0) / (2.0 * (e2 * s - 3.0 * e2 + 5.0 * s - 7.0));
}
double divr(double eta) {
  const double s = S(eta), e2 = eta * eta;
  return eta * (-6.0 * e2 * s + 12.0 * e2 - 19.0 * s + 24.0) /
         (2.0 * (e2 * e2 - 3.0 * e2 * s + 7.0 * e2 - 7.0 * s + 10.0));
}

HTensor l5_coefficients(const RadialGrid& grid, double s) {
  if (grid.R < 0.5) throw DomainError("l5_coefficients: need R >= 1/2");
  HTensor t;
  t.grid = grid;
  t.s = s;
  // algebraic contractions straight from the tensor at this s
  const double sig[6] = {-1, 1, 1, 1, 1, 1};
  const double sc = std::exp(-2.0 * s);
  for (Vec* v : {&t.g00, &t.g0r, &t.grr, &t.gang}) v->assign(grid.n, 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const double y[5] = {grid.x(i), 0, 0, 0, 0};
    double H[6][6];
    h_tensor_raw(s, y, H);
    for (int m = 0; m < 6; ++m) {
      t.g00[i] += sc * sig[m] * H[m][0] * H[m][0];
      t.g0r[i] += sc * sig[m] * H[m][1] * H[m][0];
      t.grr[i] += sc * sig[m] * H[m][1] * H[m][1];
      t.gang[i] += sc * sig[m] * H[m][2] * H[m][2];
    }
  }
  // derivative terms from their closed forms
  t.div0 = sample(grid, div0);
  t.divr = sample(grid, divr);
  return t;
}

void h_tensor_raw(double s, const double y[5], double H[6][6]) {
  double r2 = 0;
  for (int j = 0; j < 5; ++j) r2 += y[j] * y[j];
  const double sq = std::sqrt(2.0 + r2);
  double dh[5];
  double ydh = 0;
  for (int j = 0; j < 5; ++j) {
    dh[j] = y[j] / sq;
    ydh += y[j] * dh[j];
  }
  const double den = ydh - (sq - 2.0);
  const double e = std::exp(s);
  H[0][0] = e / den;
  for (int j = 0; j < 5; ++j) {
    H[0][j + 1] = e * y[j] / den;
    H[j + 1][0] = -e * dh[j] / den;
    for (int k = 0; k < 5; ++k) H[j + 1][k + 1] = e * (j == k ? 1.0 : 0.0) - e * dh[j] * y[k] / den;
  }
}

}  // namespace wm::coords
