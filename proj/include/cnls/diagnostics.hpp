#ifndef CNLS_DIAGNOSTICS_HPP
#define CNLS_DIAGNOSTICS_HPP

#include <vector>

#include "cnls/radial_field.hpp"

// Monotonicity diagnostics.
//
// Localized virial: V_R = int phi_R |u|^2 with phi_R(r) = R^2 phi(r/R),
// phi = r^2 near the origin and constant far out, joined with a C^4
// transition on [1, 3] so that Lap^2 phi_R is well defined. Its second time
// derivative along the flow,
//   V_R'' = 4 int phi'' |grad u|^2
//           - int [Lap^2 phi_R |u|^2 + Lap phi_R (|u|^4 - 4/5 |u|^{10/3})],
// turns negative and stays negative on blow-up trajectories.
//
// Interaction Morawetz: M_R(t) couples mass density at y to radial momentum
// density at x through the autocorrelation kernel phi of a C^4 bump; for
// radial u the angular integrals reduce to a 1D theta quadrature.

namespace cnls {

struct VirialWeight {
  RadialGrid grid;
  double R = 1.0;
  double c_phi = 0.0;  // sup |phi''| of the base profile
  double phi_far = 0.0;  // constant value of phi beyond rho = 3
  std::vector<double> phi;    // phi_R(r_i)
  std::vector<double> dphi;   // phi_R'
  std::vector<double> d2phi;  // phi_R''
  std::vector<double> lap;    // Lap phi_R
  std::vector<double> bilap;  // Lap^2 phi_R
};

// Requires R >= 1 and 3R <= r_max. Derivative tables come from the piecewise
// closed form (polynomial in the transition region), not from differencing.
VirialWeight build_virial_weight(const RadialGrid& grid, double R);

// Base profile phi and its derivatives (order in [0,4]); exposed for tests.
double virial_phi(double rho, int order = 0);

double virial(const Field& u, const VirialWeight& w);
double virial_dt(const Field& u, const VirialWeight& w);   // 2 Im int conj(u) u_r phi_R'
double virial_dtt(const Field& u, const VirialWeight& w);

struct MorawetzKernel {
  RadialGrid grid;
  double R = 1.0;
  int n_theta = 256;
  // K(r_x, r_y) = 4 pi int_0^pi phi(rho(theta)/R) (r_x - r_y cos th) sin^2 th dth,
  // row-major (n+1) x (n+1); zero when |r_x - r_y| > 4R.
  std::vector<double> table;
  double phi0 = 0.0;  // phi(0) = int psi^4

  double at(int ix, int iy) const { return table[static_cast<size_t>(ix) * (grid.n + 1) + iy]; }
};

// Autocorrelation phi(rho) = int_{R^4} psi^2(z) psi^2(z - w) dz, |w| = rho,
// with psi the C^4 bump (1 on [0,1], 0 on [2,inf)); supported on rho <= 4.
double morawetz_phi(double rho);

// n_theta >= 64. Kernel tables are meant for diagnostic-resolution grids;
// construction refuses grids whose full table would be unreasonably large.
MorawetzKernel build_morawetz_kernel(const RadialGrid& grid, double R, int n_theta = 256);

double morawetz_mr(const Field& u, const MorawetzKernel& k);

// M(t) = int_{1<=R<=R0} M_R(t) dR/R over a log-spaced kernel ladder.
std::vector<MorawetzKernel> build_morawetz_ladder(const RadialGrid& grid, double R0,
                                                  int count = 16, int n_theta = 256);
double morawetz_m(const Field& u, const std::vector<MorawetzKernel>& ladder);

// Discrete space-time norm accumulators: W1 = L^6_t L^6_x, W2 = L^4_t L^4_x,
// V0 = L^3_t L^3_x over [t_a, t_b]; ST is reported as the pair (W1, W2).
struct StrichartzAccumulator {
  double t_a = 0.0, t_b = 0.0;
  double int_l6 = 0.0, int_l4 = 0.0, int_l3 = 0.0;

  void update(const Field& u, double dt);
  double w1() const;  // (int |u|_6^6 dt)^{1/6}
  double w2() const;
  double v0() const;
};

}  // namespace cnls

#endif
