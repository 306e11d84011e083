#include "wavemaps/linspec.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "wavemaps/grid.hpp"

namespace wm::linspec {

namespace {

using Poly = std::vector<cplx>;
using State = std::array<cplx, 2>;

Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

Poly scale(const Poly& a, cplx s) {
  Poly c(a);
  for (auto& v : c) v *= s;
  return c;
}

// p(1 - x) as a polynomial in x
Poly reflect(const Poly& p) {
  Poly out{0.0};
  const Poly base{1.0, -1.0};
  Poly pw{1.0};
  for (const cplx& c : p) {
    out = add(out, scale(pw, c));
    pw = mul(pw, base);
  }
  return out;
}

// The equation times -r^2 (1+r^2)^2: P f'' + Q f' + R f = 0 with polynomial
// coefficients in r.
void coefficients(cplx lam, Poly& P, Poly& Q, Poly& R) {
  const Poly sq{1.0, 0.0, 1.0};  // 1 + r^2
  const Poly sq2 = mul(sq, sq);
  P = mul(Poly{0.0, 0.0, 1.0, 0.0, -1.0}, sq2);                  // (1-r^2) r^2 (1+r^2)^2
  Q = mul(Poly{0.0, 2.0, 0.0, -2.0 * (lam + 1.0)}, sq2);         // 2r (1 - (l+1) r^2)(1+r^2)^2
  R = add(scale(mul(Poly{0.0, 0.0, 1.0}, sq2), -lam * (lam + 1.0)),  // -l(l+1) r^2 (1+r^2)^2
          Poly{-2.0, 0.0, 12.0, 0.0, -2.0});                     // -2(1 - 6r^2 + r^4)
}

cplx at(const Poly& p, int j) { return j >= 0 && j < static_cast<int>(p.size()) ? p[j] : cplx(0.0); }

// f = sum a_m z^{m+alpha} for P f'' + Q f' + R f = 0 where P starts at z^s,
// Q at z^{s-1} and R at z^{s-2} (or later); returns value and dz-derivative.
Seed frobenius(const Poly& P, const Poly& Q, const Poly& R, int s, double alpha, double z) {
  const int max_terms = 400;
  std::vector<cplx> a{1.0};
  cplx f = std::pow(z, alpha), df = alpha * std::pow(z, alpha - 1.0);
  int small = 0;
  double last_ratio = 0;
  for (int m = 1; m < max_terms; ++m) {
    const double am = m + alpha;
    const cplx ind = am * (am - 1.0) * at(P, s) + am * at(Q, s - 1) + at(R, s - 2);
    if (std::abs(ind) < 1e-13) throw SeriesDivergence("frobenius_seed: resonant indicial root");
    cplx sum = 0.0;
    for (int k = 0; k < m; ++k) {
      const double ak = k + alpha;
      sum += a[k] * (ak * (ak - 1.0) * at(P, m - k + s) + ak * at(Q, m - k + s - 1) + at(R, m - k + s - 2));
    }
    a.push_back(-sum / ind);
    const cplx term = a[m] * std::pow(z, am);
    f += term;
    df += am * a[m] * std::pow(z, am - 1.0);
    last_ratio = std::pow(std::abs(a[m]), 1.0 / m) * z;  // root test
    if (m >= 12 && std::abs(term) <= 1e-17 * std::abs(f)) {
      if (++small >= 3) {
        if (!(last_ratio < 1.0)) throw SeriesDivergence("frobenius_seed: term ratio does not decay");
        return {f, df};
      }
    } else {
      small = 0;
    }
  }
  throw SeriesDivergence("frobenius_seed: series did not converge");
}

struct System {
  cplx lam;
  void operator()(const State& y, State& dy, double r) const {
    const double W = potential(r);
    dy[0] = y[1];
    dy[1] = (-(2.0 / r) * y[1] + 2.0 * (lam + 1.0) * r * y[1] + lam * (lam + 1.0) * y[0] + W * y[0]) /
            (1.0 - r * r);
  }
};

State integrate(cplx lam, State y, double r0, double r1, double tol) {
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(tol, tol);
  const double dt = r1 > r0 ? 1e-3 : -1e-3;
  const size_t steps = ode::integrate_adaptive(stepper, System{lam}, y, r0, r1, dt);
  if (steps > 200000 || !std::isfinite(std::abs(y[0])) || !std::isfinite(std::abs(y[1])))
    throw IntegrationFailure("shoot: integration failed");
  return y;
}

}  // namespace

double potential(double rho) {
  const double r2 = rho * rho, q = 1.0 + r2;
  return 2.0 * (1.0 - 6.0 * r2 + r2 * r2) / (r2 * q * q);
}

Seed frobenius_seed(cplx lambda, Endpoint e, double offset) {
  if (!(offset > 0 && offset <= 0.1)) throw DomainError("frobenius_seed: offset must lie in (0, 0.1]");
  Poly P, Q, R;
  coefficients(lambda, P, Q, R);
  if (e == Endpoint::zero) return frobenius(P, Q, R, 2, 1.0, offset);
  // x = 1 - r; d/dr = -d/dx
  const Seed s = frobenius(reflect(P), scale(reflect(Q), -1.0), reflect(R), 1, 0.0, offset);
  return {s.f, -s.df};
}

double ShootResult::normalized() const {
  const double den = std::abs(fl * dfr) + std::abs(dfl * fr);
  return den > 0 ? std::abs(wronskian()) / den : 0.0;
}

ShootResult shoot(cplx lambda, const ShootOptions& o) {
  const Seed l = frobenius_seed(lambda, Endpoint::zero, o.offset);
  const Seed r = frobenius_seed(lambda, Endpoint::one, o.offset);
  const State yl = integrate(lambda, {l.f, l.df}, o.offset, o.match, o.tol);
  const State yr = integrate(lambda, {r.f, r.df}, 1.0 - o.offset, o.match, o.tol);
  return {yl[0], yl[1], yr[0], yr[1]};
}

cplx shoot_mismatch(cplx lambda, const ShootOptions& o) { return shoot(lambda, o).wronskian(); }

std::vector<EigenCandidate> scan_halfplane(double re_a, double re_b, double im_c, double im_d, int n_re, int n_im,
                                           const ScanOptions& so) {
  if (re_a < -0.4) throw DomainError("scan_halfplane: Re lambda must stay >= -0.4");
  std::vector<EigenCandidate> out;
  if (!(re_b > re_a) || !(im_d > im_c) || n_re < 2 || n_im < 2) return out;
  auto lam_at = [&](int i, int j) {
    return cplx(re_a + (re_b - re_a) * i / (n_re - 1), im_c + (im_d - im_c) * j / (n_im - 1));
  };
  auto logm = [&](cplx lam) {
    try {
      return std::log(shoot(lam, so.shoot).normalized() + 1e-300);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<double> L(static_cast<size_t>(n_re) * n_im);
  const int jobs = std::max(1, so.jobs);
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < n_re; i += jobs)
          for (int j = 0; j < n_im; ++j) L[static_cast<size_t>(i) * n_im + j] = logm(lam_at(i, j));
      });
    for (auto& th : pool) th.join();
  }
  auto Lij = [&](int i, int j) { return L[static_cast<size_t>(i) * n_im + j]; };
  const double span = std::max(re_b - re_a, im_d - im_c);
  for (int i = 0; i < n_re; ++i)
    for (int j = 0; j < n_im; ++j) {
      const double v = Lij(i, j);
      if (!std::isfinite(v)) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && a < n_re && b >= 0 && b < n_im && Lij(a, b) < v) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      // Newton on the analytic mismatch
      EigenCandidate c;
      cplx lam = lam_at(i, j);
      try {
        for (int it = 0; it < so.max_newton; ++it) {
          const ShootResult sr = shoot(lam, so.shoot);
          c.newton_iters = it;
          if (sr.normalized() < so.tol_match) {
            c.converged = true;
            break;
          }
          const cplx w = sr.wronskian();
          const cplx dw = (shoot_mismatch(lam + so.newton_step, so.shoot) - w) / so.newton_step;
          if (dw == 0.0) break;
          lam -= w / dw;
          if (std::abs(lam - lam_at(i, j)) > span) break;
        }
      } catch (const Error&) {
        continue;
      }
      if (!c.converged) continue;
      const double slack = 1e-9;
      if (lam.real() < re_a - slack || lam.real() > re_b + slack || lam.imag() < im_c - slack ||
          lam.imag() > im_d + slack)
        continue;
      const ShootResult fin = shoot(lam, so.shoot);
      c.lambda = lam;
      c.mismatch = fin.wronskian();
      c.mismatch_abs = fin.normalized();
      bool dup = false;
      for (const auto& e : out) dup = dup || std::abs(e.lambda - lam) < 1e-6;
      if (!dup) out.push_back(c);
    }
  std::sort(out.begin(), out.end(), [](const EigenCandidate& a, const EigenCandidate& b) {
    return a.lambda.real() != b.lambda.real() ? a.lambda.real() > b.lambda.real() : a.lambda.imag() < b.lambda.imag();
  });
  return out;
}

std::vector<double> eigenfunction(double lambda, const std::vector<double>& rho, const ShootOptions& o) {
  const cplx lam(lambda, 0.0);
  const ShootResult sr = shoot(lam, o);
  const Seed l = frobenius_seed(lam, Endpoint::zero, o.offset);
  const Seed r = frobenius_seed(lam, Endpoint::one, o.offset);
  std::vector<double> out;
  out.reserve(rho.size());
  for (double x : rho) {
    if (!(x > 0 && x < 1)) throw DomainError("eigenfunction: points must lie in (0, 1)");
    cplx v;
    if (x <= o.match) {
      const State y = x < o.offset ? State{frobenius_seed(lam, Endpoint::zero, x).f, 0.0}
                                   : integrate(lam, {l.f, l.df}, o.offset, x, o.tol);
      v = y[0] / sr.fl;
    } else {
      const State y = x > 1.0 - o.offset ? State{frobenius_seed(lam, Endpoint::one, 1.0 - x).f, 0.0}
                                         : integrate(lam, {r.f, r.df}, 1.0 - o.offset, x, o.tol);
      v = y[0] / sr.fr;
    }
    out.push_back(v.real());
  }
  return out;
}

std::string spectrum_json(const std::vector<EigenCandidate>& c) {
  std::string s = "[";
  char buf[256];
  for (size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s\n  {\"re\": %.17g, \"im\": %.17g, \"mismatch_abs\": %.17g, \"converged\": %s}",
                  i ? "," : "", c[i].lambda.real(), c[i].lambda.imag(), c[i].mismatch_abs,
                  c[i].converged ? "true" : "false");
    s += buf;
  }
  s += c.empty() ? "]\n" : "\n]\n";
  return s;
}

}  // namespace wm::linspec
