// Descent from radial 5D to odd 1D data in hyperboloidal coordinates:
// the operator D5 = (r^2 d_r + 3r) written in (s, eta), its explicit
// inverse, the system operators L_d and the weighted H^k_5 norm.
#pragma once

#include "wavemaps/grid.hpp"

namespace wm::descent {

struct DescentCoefficients {
  double a11, a10, a20;
  double b12, b11, b10, b21, b20;
};
DescentCoefficients descent_coefficients(double eta);

// Kernel data of the inverse
double phi(double eta);    // (sqrt(2+eta^2) - sqrt 2)/eta^3
double psi(double eta);    // eta^-3
double wronskian(double eta);  // -1/(eta^5 sqrt(2+eta^2))
double coef_a(double eta);  // coefficient of f'/eta in the reduced second-order ODE
double coef_b(double eta);  // coefficient of f

// L_d (f1, f2) = (f2, c12 f1'' + c11^d f1' + c21 f2' + c20^d f2).  d = 5 acts on
// even pairs, d = 1 on odd pairs.
StateVector apply_L(int d, const RadialGrid& g, const StateVector& f, int order = 4);

// Forward map, even pair -> odd pair, centered differences with parity ghosts.
StateVector apply_D5(const RadialGrid& g, const StateVector& f, int order = 4);
// The same map with caller-supplied derivatives f1', f1'', f2'.
StateVector apply_D5_exact(const RadialGrid& g, const StateVector& f, const Vec& d1f1, const Vec& d2f1,
                           const Vec& d1f2);

// Inverse map, odd pair -> even pair.  ParityError if g(0) is not 0.
StateVector apply_D5_inverse(const RadialGrid& g, const StateVector& gv);

// || eta^2 f ||_{H^k(0,R)}, k <= 4.
double weighted_h5_norm(const Vec& f, const RadialGrid& g, int k);
// the same H^k(0,R) norm without the weight, for data of parity p
double hk_norm(const Vec& f, const RadialGrid& g, Parity p, int k);

}  // namespace wm::descent
