#ifndef CNLS_FUNCTIONALS_HPP
#define CNLS_FUNCTIONALS_HPP

#include <string>

#include "cnls/radial_field.hpp"

// Variational functionals of the combined-nonlinearity equation
//   i u_t + Lap u = -|u|^2 u + |u|^{4/3} u   on R^4.
// Energy E = 1/2 |grad u|^2 - 1/4 |u|_4^4 + 3/10 |u|_{10/3}^{10/3}, the
// modified energy E_c drops the 10/3 term. K_{a,b} is the derivative of E
// along the two-parameter dilation u^lam(x) = e^{a lam} u(e^{-b lam} x);
// its sign below the threshold energy m splits initial data into the
// scattering region (K >= 0) and the blow-up region (K < 0).

namespace cnls {

struct ScalingPair {
  double alpha = 2.0;
  double beta = -1.0;

  // admissible region: alpha >= 0, 5 alpha + 6 beta >= 0, not both zero
  bool in_omega() const;
};

enum class RegionLabel { K_PLUS, K_MINUS, ABOVE_THRESHOLD };

const char* to_string(RegionLabel label);

struct FunctionalReport {
  double mass = 0.0;
  double energy = 0.0;
  double energy_c = 0.0;
  double grad_sq = 0.0;   // |grad u|_{L^2}^2
  double l4_4 = 0.0;      // |u|_{L^4}^4
  double l10_3 = 0.0;     // |u|_{L^{10/3}}^{10/3}
  double k = 0.0;         // K_{2,-1}
  double k_c = 0.0;       // K^c_{2,-1}
  double h = 0.0;         // H_{2,-1}
  double h_c = 0.0;       // H^c_{2,-1}
  RegionLabel label = RegionLabel::K_PLUS;

  std::string to_json() const;
};

double mass(const Field& u);
double energy(const Field& u);
double energy_c(const Field& u);

// max{ 2(alpha+beta), (10/3) alpha + 4 beta }; branches meet at 2a = -3b.
double mu_bar(const ScalingPair& p);

double k_functional(const Field& u, const ScalingPair& p);
double k_c_functional(const Field& u, const ScalingPair& p);

// H = (1 - L/mu_bar) E and its modified-energy analogue; require p in Omega.
double h_functional(const Field& u, const ScalingPair& p);
double h_c_functional(const Field& u, const ScalingPair& p);

// Same functionals from precomputed norms (used to keep reports consistent
// and to cross-check closed forms in tests).
struct Norms {
  double grad_sq = 0.0, l4_4 = 0.0, l10_3 = 0.0;
};
Norms compute_norms(const Field& u);
double k_from_norms(const Norms& n, const ScalingPair& p);
double h_from_norms(const Norms& n, const ScalingPair& p);
double h_c_from_norms(const Norms& n, const ScalingPair& p);

// Closed form of the second dilation derivative L(mu_bar - L)E.
double l_mu_minus_l_e(const Norms& n, const ScalingPair& p);

// v(r) = e^{alpha lam} u(e^{-beta lam} r), linear interpolation between
// nodes, zero beyond r_max. truncated_mass_fraction (optional out) reports
// the |u|^2 fraction that the rescaled read pushed off the grid.
Field scale_field(const Field& u, const ScalingPair& p, double lambda,
                  double* truncated_mass_fraction = nullptr);

// | d/dlam E(u^lam)|_0 (central difference, step h_fd) - K(u) | / max(1, |K|)
double lambda_derivative_residual(const Field& u, const ScalingPair& p, double h_fd);

// K_PLUS if E < m and K_{2,-1} >= 0; K_MINUS if E < m and K_{2,-1} < 0;
// ABOVE_THRESHOLD otherwise (including E == m).
RegionLabel classify(const Field& u, double m);

FunctionalReport make_report(const Field& u, double m);

}  // namespace cnls

#endif
