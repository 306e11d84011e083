// Radial grids, finite-difference operators and quadrature shared by all modules.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wm {

using Vec = std::vector<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
#define WM_ERROR(Name)                 \
  struct Name : Error {                \
    using Error::Error;                \
  }
WM_ERROR(DomainError);
WM_ERROR(CFLViolation);
WM_ERROR(ParityError);
WM_ERROR(OrderError);
WM_ERROR(SupportError);
WM_ERROR(GeometryError);
WM_ERROR(BlowupDetected);
WM_ERROR(BracketError);
WM_ERROR(Inconclusive);
WM_ERROR(InsufficientData);
WM_ERROR(SeriesDivergence);
WM_ERROR(IntegrationFailure);
WM_ERROR(GridMismatch);
#undef WM_ERROR

enum class Parity { even, odd, none };

// Uniform grid x_i = i*dx on [0, R], i = 0..n-1.
struct RadialGrid {
  int n = 0;
  double R = 0;
  double dx = 0;
  RadialGrid() = default;
  RadialGrid(int n, double R);
  double x(int i) const { return i * dx; }
  Vec nodes() const;
  bool operator==(const RadialGrid& o) const { return n == o.n && R == o.R; }
};

struct GridFunction {
  Vec v;
  Parity parity = Parity::none;
};

struct StateVector {
  Vec f1, f2;
};

Vec sample(const RadialGrid& g, double (*f)(double));
template <class F>
Vec sample(const RadialGrid& g, F&& f) {
  Vec v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = f(g.x(i));
  return v;
}

// Finite-difference weights (Fornberg) for derivative m at x0 on nodes xs.
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

// Sparse banded derivative matrix on a RadialGrid.  Centered stencils in the
// interior, parity ghost points at x = 0 (one-sided when parity is none), and
// one-sided stencils of the same order at x = R.
class DiffMatrix {
 public:
  DiffMatrix() = default;
  DiffMatrix(const RadialGrid& g, int deriv, int order, Parity p);
  Vec apply(const Vec& f) const;
  void apply(const Vec& f, Vec& out) const;
  double apply_row(const Vec& f, int i) const;
  int rows() const { return static_cast<int>(start_.size()) - 1; }

 private:
  std::vector<int> start_, idx_;
  std::vector<double> w_;
};

Vec derivative(const Vec& f, const RadialGrid& g, int deriv, int order, Parity p);

// Cumulative integral I_k = int_0^{x_k} F using local cubic interpolation
// (fourth order).  The parity of F supplies the ghost value at x = -dx.
Vec cumulative_integral(const Vec& F, double dx, Parity p);
double integral(const Vec& F, double dx, Parity p);

// Gauss-Legendre nodes and weights on [0, 1] (cached per order).
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre01(int npts);

// eta^{-m} int_0^eta x^n G(x) dx on the grid for smooth even G and
// n + 1 - m >= 0.  Near the centre the integral is taken in the scaled
// form eta^{n+1-m} int_0^1 t^n G(t eta) dt, so the result stays accurate
// where eta^{-m} is large.
Vec scaled_primitive(const Vec& G, const RadialGrid& g, int n, int m);

// Value at 0 of an even function sampled at dx, 2dx, 3dx.
double even_limit(double v1, double v2, double v3);

// Cubic Lagrange interpolation of grid data at x in [0, R].
double interp_cubic(const Vec& f, const RadialGrid& g, double x, Parity p);
// six-point variant
double interp_quintic(const Vec& f, const RadialGrid& g, double x, Parity p);
double interp_cubic_deriv(const Vec& f, const RadialGrid& g, double x, Parity p);

double max_abs(const Vec& v);
Vec axpy(double a, const Vec& x, const Vec& y);  // a*x + y

}  // namespace wm
