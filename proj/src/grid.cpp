#include "wavemaps/grid.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace wm {

RadialGrid::RadialGrid(int n_, double R_) : n(n_), R(R_), dx(R_ / (n_ - 1)) {
  if (n_ < 8) throw DomainError("RadialGrid: need at least 8 nodes");
  if (!(R_ > 0)) throw DomainError("RadialGrid: R must be positive");
}

Vec RadialGrid::nodes() const {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = x(i);
  return v;
}

Vec sample(const RadialGrid& g, double (*f)(double)) {
  Vec v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = f(g.x(i));
  return v;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

DiffMatrix::DiffMatrix(const RadialGrid& g, int deriv, int order, Parity p) {
  if (deriv < 1 || order < 1) throw OrderError("DiffMatrix: bad derivative/order");
  const int npc = 2 * ((deriv + 1) / 2) - 1 + order;  // centered stencil size
  const int q = (npc - 1) / 2;
  const int npo = deriv + order;  // one-sided stencil size
  if (npo > g.n) throw OrderError("DiffMatrix: grid too small for stencil");
  const double sgn = (p == Parity::odd) ? -1.0 : 1.0;
  start_.push_back(0);
  for (int i = 0; i < g.n; ++i) {
    std::vector<int> id;
    std::vector<double> sg;
    std::vector<double> xs;
    if (i + q <= g.n - 1 && (i - q >= 0 || p != Parity::none)) {
      for (int j = -q; j <= q; ++j) {
        const int k = i + j;
        xs.push_back(k * g.dx);
        if (k >= 0) {
          id.push_back(k);
          sg.push_back(1.0);
        } else {
          id.push_back(-k);
          sg.push_back(sgn);
        }
      }
    } else {
      const int lo = (i - q < 0) ? 0 : g.n - npo;
      for (int k = lo; k < lo + npo; ++k) {
        xs.push_back(k * g.dx);
        id.push_back(k);
        sg.push_back(1.0);
      }
    }
    const auto w = fd_weights(i * g.dx, xs, deriv);
    // merge duplicate indices produced by ghost reflection
    std::vector<std::pair<int, double>> row;
    for (size_t k = 0; k < id.size(); ++k) {
      auto it = std::find_if(row.begin(), row.end(), [&](auto& e) { return e.first == id[k]; });
      if (it == row.end())
        row.emplace_back(id[k], w[k] * sg[k]);
      else
        it->second += w[k] * sg[k];
    }
    for (auto& [k, v] : row) {
      idx_.push_back(k);
      w_.push_back(v);
    }
    start_.push_back(static_cast<int>(idx_.size()));
  }
}

double DiffMatrix::apply_row(const Vec& f, int i) const {
  double s = 0;
  for (int k = start_[i]; k < start_[i + 1]; ++k) s += w_[k] * f[idx_[k]];
  return s;
}

void DiffMatrix::apply(const Vec& f, Vec& out) const {
  const int n = rows();
  if (static_cast<int>(f.size()) != n) throw GridMismatch("DiffMatrix: size mismatch");
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = apply_row(f, i);
}

Vec DiffMatrix::apply(const Vec& f) const {
  Vec out;
  apply(f, out);
  return out;
}

Vec derivative(const Vec& f, const RadialGrid& g, int deriv, int order, Parity p) {
  return DiffMatrix(g, deriv, order, p).apply(f);
}

Vec cumulative_integral(const Vec& F, double dx, Parity p) {
  const int n = static_cast<int>(F.size());
  if (n < 4) throw OrderError("cumulative_integral: need at least 4 nodes");
  Vec I(n, 0.0);
  const double c = dx / 24.0;
  for (int k = 0; k + 1 < n; ++k) {
    double s;
    if (k == 0 && p == Parity::none) {
      s = 9 * F[0] + 19 * F[1] - 5 * F[2] + F[3];
    } else if (k + 2 > n - 1) {
      s = F[k - 2] - 5 * F[k - 1] + 19 * F[k] + 9 * F[k + 1];
    } else {
      const double fm = (k == 0) ? (p == Parity::odd ? -F[1] : F[1]) : F[k - 1];
      s = -fm + 13 * F[k] + 13 * F[k + 1] - F[k + 2];
    }
    I[k + 1] = I[k] + c * s;
  }
  return I;
}

double integral(const Vec& F, double dx, Parity p) { return cumulative_integral(F, dx, p).back(); }

const GaussRule& gauss_legendre01(int npts) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[npts];
  if (!slot) {
    slot = std::make_unique<GaussRule>();
    slot->x.resize(npts);
    slot->w.resize(npts);
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(npts);
    for (int i = 0; i < npts; ++i) gsl_integration_glfixed_point(0.0, 1.0, i, &slot->x[i], &slot->w[i], t);
    gsl_integration_glfixed_table_free(t);
  }
  return *slot;
}

Vec scaled_primitive(const Vec& G, const RadialGrid& g, int n, int m) {
  if (n + 1 - m < 0) throw OrderError("scaled_primitive: need n + 1 - m >= 0");
  if (static_cast<int>(G.size()) != g.n) throw GridMismatch("scaled_primitive: size mismatch");
  const auto& gl = gauss_legendre01(16);
  // switch to the cumulative rule once eta is no longer small
  const int ic = std::min(g.n - 1, std::max(8, static_cast<int>(std::ceil(0.25 / g.dx))));
  Vec out(g.n);
  for (int i = 0; i <= ic; ++i) {
    const double x = g.x(i);
    double s = 0;
    for (size_t k = 0; k < gl.x.size(); ++k)
      s += gl.w[k] * std::pow(gl.x[k], n) * interp_quintic(G, g, gl.x[k] * x, Parity::even);
    out[i] = std::pow(x, n + 1 - m) * s;
  }
  // then cell by cell, 4-point Gauss on six-point interpolants
  const auto& g4 = gauss_legendre01(4);
  double I = out[ic] * std::pow(g.x(ic), m);
  for (int i = ic + 1; i < g.n; ++i) {
    const double a = g.x(i - 1);
    double s = 0;
    for (size_t k = 0; k < g4.x.size(); ++k) {
      const double x = a + g4.x[k] * g.dx;
      s += g4.w[k] * std::pow(x, n) * interp_quintic(G, g, x, Parity::even);
    }
    I += s * g.dx;
    out[i] = I / std::pow(g.x(i), m);
  }
  return out;
}

double even_limit(double v1, double v2, double v3) { return 1.5 * v1 - 0.6 * v2 + 0.1 * v3; }

namespace {
template <int M, int P = 4>
double interp_impl(const Vec& f, const RadialGrid& g, double x, Parity p) {
  if (x < -1e-12 || x > g.R * (1 + 1e-12)) throw DomainError("interp: point outside grid");
  int j = static_cast<int>(std::floor(x / g.dx));
  j = std::clamp(j, 0, g.n - 2);
  int lo = j - (P / 2 - 1);
  if (p == Parity::none) lo = std::max(lo, 0);
  lo = std::min(lo, g.n - P);
  std::vector<double> xs(P), vals(P);
  const double sgn = (p == Parity::odd) ? -1.0 : 1.0;
  for (int k = 0; k < P; ++k) {
    const int id = lo + k;
    xs[k] = id * g.dx;
    vals[k] = id >= 0 ? f[id] : sgn * f[-id];
  }
  const auto w = fd_weights(x, xs, M);
  double s = 0;
  for (int k = 0; k < P; ++k) s += w[k] * vals[k];
  return s;
}
}  // namespace

double interp_cubic(const Vec& f, const RadialGrid& g, double x, Parity p) {
  return interp_impl<0>(f, g, x, p);
}
double interp_quintic(const Vec& f, const RadialGrid& g, double x, Parity p) {
  return interp_impl<0, 6>(f, g, x, p);
}
double interp_cubic_deriv(const Vec& f, const RadialGrid& g, double x, Parity p) {
  return interp_impl<1>(f, g, x, p);
}

double max_abs(const Vec& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec axpy(double a, const Vec& x, const Vec& y) {
  Vec r(y);
  for (size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
  return r;
}

}  // namespace wm
