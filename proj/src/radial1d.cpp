#include "wavemaps/radial1d.hpp"

#include <algorithm>
#include <cmath>

#include "wavemaps/coords.hpp"

namespace wm::radial1d {

using coords::h;
using coords::hp;

double speed_minus(double y) { return (y - h(y)) / (1.0 - hp(y)); }
double speed_plus(double y) { return (y + h(y)) / (1.0 + hp(y)); }

RadialGrid line_grid(const RadialGrid& g) { return RadialGrid(2 * g.n - 1, 2.0 * g.R); }

Vec unfold(const CharPair& p) {
  const int n = p.grid.n;
  if (static_cast<int>(p.vm.size()) != n || static_cast<int>(p.vp.size()) != n)
    throw GridMismatch("unfold: size mismatch");
  Vec v(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    v[n - 1 + i] = p.vm[i];
    v[n - 1 - i] = -p.vp[i];
  }
  // y = 0 is shared; average the two representations
  v[n - 1] = 0.5 * (p.vm[0] - p.vp[0]);
  return v;
}

CharPair fold(const RadialGrid& g, const Vec& v) {
  const int n = g.n;
  if (static_cast<int>(v.size()) != 2 * n - 1) throw GridMismatch("fold: size mismatch");
  CharPair p{g, Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    p.vm[i] = v[n - 1 + i];
    p.vp[i] = -v[n - 1 - i];
  }
  return p;
}

Vec apply_L(const Vec& f, const RadialGrid& line, int sign) {
  Vec d = derivative(f, line, 1, 4, Parity::none);
  for (int i = 0; i < line.n; ++i) {
    const double y = line_x(line, i);
    d[i] *= -(y + sign * h(y)) / (1.0 + sign * hp(y));
  }
  return d;
}

Vec apply_D(const Vec& f, const RadialGrid& line, int sign) {
  Vec d = derivative(f, line, 1, 4, Parity::none);
  for (int i = 0; i < line.n; ++i) d[i] /= 1.0 + sign * hp(line_x(line, i));
  return d;
}

CharPair assemble_A(const RadialGrid& g, const StateVector& f) {
  if (static_cast<int>(f.f1.size()) != g.n || static_cast<int>(f.f2.size()) != g.n)
    throw GridMismatch("assemble_A: size mismatch");
  const Vec d1 = derivative(f.f1, g, 1, 4, Parity::odd);
  CharPair p{g, Vec(g.n), Vec(g.n)};
  for (int i = 0; i < g.n; ++i) {
    const double y = g.x(i), hv = h(y), hd = hp(y);
    const double den = y * hd - hv;
    p.vm[i] = ((y + hv) * d1[i] + (1.0 + hd) * f.f2[i]) / den;
    p.vp[i] = ((y - hv) * d1[i] + (1.0 - hd) * f.f2[i]) / den;
  }
  return p;
}

StateVector assemble_B(const CharPair& p) {
  const RadialGrid& g = p.grid;
  Vec integrand(g.n);
  StateVector f{Vec(g.n), Vec(g.n)};
  for (int i = 0; i < g.n; ++i) {
    const double y = g.x(i), hv = h(y), hd = hp(y);
    integrand[i] = -(1.0 - hd) * p.vm[i] + (1.0 + hd) * p.vp[i];
    f.f2[i] = 0.5 * ((y - hv) * p.vm[i] - (y + hv) * p.vp[i]);
  }
  f.f1 = cumulative_integral(integrand, g.dx, Parity::even);
  for (double& v : f.f1) v *= 0.5;
  return f;
}

Transport::Transport(const RadialGrid& g, double cfl)
    : grid_(g), line_(line_grid(g)), cfl_(cfl) {
  if (g.R < 0.5) throw DomainError("Transport: need R >= 1/2");
  const int N = line_.n;
  speed_.resize(N);
  lo_.resize(N);
  w_.resize(N);
  double vmax = 0;
  for (int i = 0; i < N; ++i) {
    const double y = line_x(line_, i);
    speed_[i] = speed_minus(y);
    vmax = std::max(vmax, std::abs(speed_[i]));
    // six points, three on the upwind side
    int lo = speed_[i] >= 0 ? i - 3 : i - 2;
    lo = std::clamp(lo, 0, N - 6);
    std::vector<double> xs(6);
    for (int k = 0; k < 6; ++k) xs[k] = (lo + k) * line_.dx;
    const auto w = fd_weights(i * line_.dx, xs, 1);
    lo_[i] = lo;
    for (int k = 0; k < 6; ++k) w_[i][k] = w[k];
  }
  max_ds_ = cfl_ * line_.dx / vmax;
}

void Transport::rhs(const Vec& v, Vec& out) const {
  const int N = line_.n;
  out.resize(N);
  for (int i = 0; i < N; ++i) {
    const double* p = &v[lo_[i]];
    const auto& w = w_[i];
    const double d = w[0] * p[0] + w[1] * p[1] + w[2] * p[2] + w[3] * p[3] + w[4] * p[4] + w[5] * p[5];
    out[i] = -speed_[i] * d;
  }
}

void Transport::step(Vec& v, double ds) const {
  if (!(ds > 0)) throw DomainError("Transport::step: ds must be positive");
  if (ds > max_ds_ * (1 + 1e-12)) throw CFLViolation("Transport::step: ds exceeds CFL bound");
  const int N = line_.n;
  if (static_cast<int>(v.size()) != N) throw GridMismatch("Transport::step: size mismatch");
  Vec k1, k2, k3, k4, tmp(N);
  rhs(v, k1);
  for (int i = 0; i < N; ++i) tmp[i] = v[i] + 0.5 * ds * k1[i];
  rhs(tmp, k2);
  for (int i = 0; i < N; ++i) tmp[i] = v[i] + 0.5 * ds * k2[i];
  rhs(tmp, k3);
  for (int i = 0; i < N; ++i) tmp[i] = v[i] + ds * k3[i];
  rhs(tmp, k4);
  for (int i = 0; i < N; ++i) v[i] += ds / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

void Transport::evolve(Vec& v, double s_end) const {
  if (s_end < 0) throw DomainError("Transport::evolve: s_end < 0");
  if (s_end == 0) return;
  const long nsteps = static_cast<long>(std::ceil(s_end / max_ds_));
  const double ds = s_end / nsteps;
  for (long k = 0; k < nsteps; ++k) step(v, ds);
}

CharPair transport_step(const CharPair& p, double ds, double cfl) {
  Transport tr(p.grid, cfl);
  Vec v = unfold(p);
  tr.step(v, ds);
  return fold(p.grid, v);
}

CharPair transport(const CharPair& p, double s_end, double cfl) {
  Transport tr(p.grid, cfl);
  Vec v = unfold(p);
  tr.evolve(v, s_end);
  return fold(p.grid, v);
}

StateVector evolve_S1(const RadialGrid& g, const StateVector& f, double s_end, double cfl) {
  StateVector out = assemble_B(transport(assemble_A(g, f), s_end, cfl));
  const double e = std::exp(-s_end);
  for (double& v : out.f1) v *= e;
  for (double& v : out.f2) v *= e;
  return out;
}

double hl_norm(const Vec& f, const RadialGrid& g, Parity p, int l) {
  if (l < 0 || l > 3) throw OrderError("hl_norm: l must lie in [0, 3]");
  double sum = 0;
  for (int j = 0; j <= l; ++j) {
    const Vec d = j == 0 ? f : derivative(f, g, j, 4, p);
    Vec sq(g.n);
    for (int i = 0; i < g.n; ++i) sq[i] = d[i] * d[i];
    // the square of an odd or even function is even
    sum += integral(sq, g.dx, p == Parity::none ? Parity::none : Parity::even);
  }
  // half line to the symmetric interval
  return std::sqrt((p == Parity::none ? 1.0 : 2.0) * sum);
}

double energy_norm(const StateVector& f, const RadialGrid& g, int l) {
  if (l < 1) throw OrderError("energy_norm: l >= 1");
  return hl_norm(f.f1, g, Parity::odd, l) + hl_norm(f.f2, g, Parity::odd, l - 1);
}

}  // namespace wm::radial1d
