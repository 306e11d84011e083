// Height function, the (t,x) <-> (s,y) <-> (tau,xi) charts and the radial
// coefficients of the hyperboloidal wave operator.
#pragma once

#include <utility>

#include "wavemaps/grid.hpp"

namespace wm::coords {

// h(y) = sqrt(2+|y|^2) - 2 and its radial derivatives.  Everything below is
// written in terms of S = sqrt(2+eta^2), which removes the eta -> 0
// cancellations of the raw expressions.
double S(double eta);
double h(double eta);
double hp(double eta);
double hpp(double eta);
double h1(double eta);   // 1 / (eta h' - h)
double h1p(double eta);  // d/deta h1

// Outer radius of the hyperboloidal patch for slope parameter b.
double R_of_b(double b);

struct CoordChart {
  double T = 1.0;
};

std::pair<double, double> hsc_to_cartesian(const CoordChart& c, double s, double y);
// Inverse of hsc_to_cartesian on {|t - T| < r} and on the axis for t < T.
std::pair<double, double> cartesian_to_hsc(const CoordChart& c, double t, double r);
// (s, y) -> (tau, xi); DomainError unless y < sqrt(2).
std::pair<double, double> hsc_to_similarity(double s, double y);

// Radial second-row coefficients of the d-dimensional HSC wave system
//   d_s (f1, f2) = (f2, c12 f1'' + c11 f1' + c21 f2' + c20 f2).
struct SystemCoefficients {
  double c12, c11, c21, c20;
};
// c11 is returned multiplied by eta for d = 5 (c11eta) to stay finite at 0.
double c12(double eta);
double c21(double eta);
double c11eta_5(double eta);
double c20_5(double eta);
double c11_1(double eta);
double c20_1(double eta);
SystemCoefficients system_coefficients(int d, double eta);  // eta > 0 for d = 5

// Characteristic speeds of the principal part at eta (both > 0 means outflow).
std::pair<double, double> characteristic_speeds(double eta);

// Contractions of the H tensor, all multiplied by e^{-2s} and reduced to
// radial form:
//   g00  = H^{m0} H_m^0
//   g0r  : H^{mj} H_m^0 d_j f  = g0r f'
//   grr, gang : H^{mj} H_m^k d_j d_k f = grr f'' + gang (4/eta) f'
//   div0 = H^{mn} d_n H_m^0
//   divr : H^{mn} d_n H_m^j d_j f = divr f'
struct HTensor {
  RadialGrid grid;
  double s = 0;
  Vec g00, g0r, grr, gang, div0, divr;
};
HTensor l5_coefficients(const RadialGrid& grid, double s = 0.0);

// Pointwise versions of the contractions (e^{-2s}-scaled, s-independent).
double g00(double eta);
double g0r(double eta);
double grr(double eta);
double div0(double eta);
double divr(double eta);

// Raw tensor components H_mu^nu(s, y) for y = (eta, 0, 0, 0, 0) in R^5.
// Index 0 is s, indices 1..5 are y^1..y^5.  Used as an independent check of
// the contractions.
void h_tensor_raw(double s, const double y[5], double H[6][6]);

}  // namespace wm::coords
