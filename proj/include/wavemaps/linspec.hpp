// Mode problem of the linearised flow in similarity variables,
//   -(1-r^2) f'' - (2/r) f' + 2(l+1) r f' + l(l+1) f + W(r) f = 0  on (0,1),
// solved by two-sided shooting from Frobenius data at both singular points.
#pragma once

#include <complex>
#include <string>
#include <vector>

namespace wm::linspec {

using cplx = std::complex<double>;

// 2(1 - 6r^2 + r^4)/(r^2 (1+r^2)^2)
double potential(double rho);

enum class Endpoint { zero, one };

struct Seed {
  cplx f, df;  // value and d/drho at the seed point
};

// Regular solution near an endpoint: rho (1 + O(rho^2)) at 0 and
// 1 + O(1-rho) at 1, summed at rho = offset or 1 - offset.
// SeriesDivergence if the terms stop decaying or the indicial
// polynomial vanishes at a recurrence index.
Seed frobenius_seed(cplx lambda, Endpoint e, double offset);

struct ShootOptions {
  double offset = 0.05;
  double match = 0.5;
  double tol = 1e-12;
};

struct ShootResult {
  cplx fl, dfl, fr, dfr;  // left and right solutions at the matching point
  cplx wronskian() const { return fl * dfr - dfl * fr; }
  double normalized() const;  // |W| / (|fl dfr| + |dfl fr|)
};
ShootResult shoot(cplx lambda, const ShootOptions& o = {});
// connection Wronskian at the matching point (analytic in lambda)
cplx shoot_mismatch(cplx lambda, const ShootOptions& o = {});

struct EigenCandidate {
  cplx lambda;
  cplx mismatch;
  double mismatch_abs = 0;  // normalised
  int newton_iters = 0;
  bool converged = false;
};

struct ScanOptions {
  ShootOptions shoot;
  double tol_match = 1e-10;
  double newton_step = 1e-7;
  int max_newton = 40;
  int jobs = 1;
};

// Coarse grid of log|mismatch| on [re_a, re_b] x [im_c, im_d], Newton from
// each local minimum, converged candidates inside the box, deduplicated.
// DomainError if re_a < -0.4.
std::vector<EigenCandidate> scan_halfplane(double re_a, double re_b, double im_c, double im_d, int n_re, int n_im,
                                           const ScanOptions& so = {});

// Real solution for real lambda on the given points, normalised to 1 at the
// matching point (left branch on [0, match], right branch beyond).
std::vector<double> eigenfunction(double lambda, const std::vector<double>& rho, const ShootOptions& o = {});

// [{re, im, mismatch_abs, converged}, ...]
std::string spectrum_json(const std::vector<EigenCandidate>& c);

}  // namespace wm::linspec
