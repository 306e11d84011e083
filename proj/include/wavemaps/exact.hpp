// Closed-form objects: the blowup family u_T^*, its derivatives, the gauge
// mode, the potentials and the nonlinearity of the perturbation equation.
#pragma once

#include "wavemaps/grid.hpp"

namespace wm::exact {

double atanc(double x);  // atan(x)/x
double sinc(double x);   // sin(x)/x
double xsinc3(double x); // (x - sin x)/x^3

// u_T^*(t,r) = (4/r) arctan(r / (T-t + sqrt((T-t)^2 + r^2)))
double eval_blowup(double T, double t, double r);
double eval_blowup_dt(double T, double t, double r);
double eval_blowup_dr(double T, double t, double r);
// d/dT u_T^* = -2/((T-t)^2 + r^2)
double eval_dT_blowup(double T, double t, double r);
// psi_T^* = r u_T^* (valid on both sides of t = T for r > 0)
double psi_star(double T, double t, double r);
// 2 arctan(r/(T-t)) for t < T
double psi_T(double T, double t, double r);

// e^{-s} u_T^* o eta_T = alpha0(|y|)
double alpha0(double eta);
// H(eta) with e^{-2s} H^{m0}H_m^0 = 1/H, negative
double H(double eta);
// V(eta) = H (2cos(2 eta alpha0) - 2)/eta^2
double V(double eta);
double V0(double rho);
double V0_composed(double rho);

// F(u, r) = (2ru - sin(2ru))/r^3, evaluated as 4u^3 int_0^1 cos(2sru)(1-s)^2 ds
double F(double u, double r);
double F_direct(double u, double r);

// Phi0(f, eta) = 4 int_0^1 cos(2 eta (alpha0 + t f)) (1-t)^2 dt
double Phi0(double f, double eta);
// N(p, eta) = -[sin(2 eta a0 + 2p) - sin(2 eta a0) - 2 cos(2 eta a0) p]/eta^3
double eval_nonlinearity(double p, double eta);
// N(eta q, eta) = (2 sin(2 eta a0)/eta) q^2 + q^3 Phi0(q, eta); finite at eta = 0
double nonlinearity_scaled(double q, double eta);
// same function through sin^2/sinc identities, no quadrature
double nonlinearity_scaled_fast(double q, double eta);

struct PotentialTable {
  RadialGrid grid;
  Vec alpha0, V, H;
};
PotentialTable potential_table(const RadialGrid& g);

// f1^* = (1, 2)/(|y|^2 + h(y)^2)
StateVector gauge_mode(const RadialGrid& g);

}  // namespace wm::exact
