// 1D wave equation in hyperboloidal coordinates: characteristic variables
// v_-, v_+, the transport generators L_-, L_+, the A/B maps and S_1(s).
#pragma once

#include <array>

#include "wavemaps/grid.hpp"

namespace wm::radial1d {

// v_- and v_+ sampled on [0, R]; the values on [-R, 0) follow from
// v_-(-y) = -v_+(y).
struct CharPair {
  RadialGrid grid;
  Vec vm, vp;
};

// transport speeds on the signed line: d_s v_- + speed_minus d_y v_- = 0
double speed_minus(double y);  // (y - h)/(1 - h')
double speed_plus(double y);   // (y + h)/(1 + h')

// Uniform grid on [-R, R] with 2n-1 nodes sharing the spacing of g.
RadialGrid line_grid(const RadialGrid& g);
inline double line_x(const RadialGrid& line, int i) { return i * line.dx - 0.5 * line.R; }

// v_- on the whole line from a pair and back.
Vec unfold(const CharPair& p);
CharPair fold(const RadialGrid& g, const Vec& line_values);

// Pointwise operators on line data (derivatives by 4th-order centered
// differences, one-sided at the ends).
Vec apply_L(const Vec& f, const RadialGrid& line, int sign);  // L_pm f = -(y pm h)/(1 pm h') f'
Vec apply_D(const Vec& f, const RadialGrid& line, int sign);  // D_pm f = f'/(1 pm h')

// A maps an odd pair (f1, f2) on [0,R] to characteristic variables.
CharPair assemble_A(const RadialGrid& g, const StateVector& f);
// B is the inverse of A; the integral uses the fourth-order cumulative rule.
StateVector assemble_B(const CharPair& p);

// Upwind-biased fifth-order transport of v_- on [-R, R] with RK4 in s.
class Transport {
 public:
  explicit Transport(const RadialGrid& g, double cfl = 0.4);
  double max_ds() const { return max_ds_; }
  const RadialGrid& line() const { return line_; }
  // one RK4 step; CFLViolation if ds exceeds cfl*dy/max|speed|
  void step(Vec& v, double ds) const;
  // uniform steps of at most max_ds() to reach s_end
  void evolve(Vec& v, double s_end) const;

 private:
  void rhs(const Vec& v, Vec& out) const;
  RadialGrid grid_, line_;
  double cfl_, max_ds_;
  Vec speed_;
  std::vector<int> lo_;
  std::vector<std::array<double, 6>> w_;
};

CharPair transport_step(const CharPair& p, double ds, double cfl = 0.4);
CharPair transport(const CharPair& p, double s_end, double cfl = 0.4);

// S_1(s) f = e^{-s} B diag(S_-(s), S_+(s)) A f for odd f.
StateVector evolve_S1(const RadialGrid& g, const StateVector& f, double s_end, double cfl = 0.4);

// Sobolev norms of odd/even data on [-R, R] from half-line samples,
// derivatives by 4th-order differences with parity ghosts.
double hl_norm(const Vec& f, const RadialGrid& g, Parity p, int l);
// ||v||_{H^l} + ||v_s||_{H^{l-1}} for the state (v, v_s)
double energy_norm(const StateVector& f, const RadialGrid& g, int l);

}  // namespace wm::radial1d
