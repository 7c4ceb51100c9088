#ifndef CNLS_GROUND_STATE_HPP
#define CNLS_GROUND_STATE_HPP

#include <string>

#include "cnls/radial_field.hpp"

// The Aubin-Talenti profile W(r) = (1 + r^2/8)^{-1}, the positive solution of
// -Lap W = W^3 on R^4 and the extremizer of the sharp Sobolev inequality
// |u|_{L^4} <= c4 |grad u|_{L^2}. Exact values (Beta integrals):
//   |grad W|_{L^2}^2 = |W|_{L^4}^4 = 32 pi^2 / 3,
//   threshold m = E_c(W) = 8 pi^2 / 3,  c4 = (32 pi^2 / 3)^{-1/4}.
// W is not in L^2(R^4) (log-divergent mass), so only the gradient/L^4 based
// quantities are grid-stable; mass(W) on a finite grid is truncation-defined.

namespace cnls {

// exact references
double grad_w_sq_exact();  // 32 pi^2 / 3
double threshold_exact();  // 8 pi^2 / 3

struct GroundStateRefs {
  double grad_w_sq = 0.0;  // quadrature value of |grad W|^2
  double w_l4_4 = 0.0;     // quadrature value of |W|_{L^4}^4
  double m = 0.0;          // grad_w_sq / 4
  double c4 = 0.0;         // w_l4_4^{1/4} / grad_w_sq^{1/2}

  std::string to_json() const;
};

double w_profile(double r);

Field sample_w(const RadialGrid& grid);

GroundStateRefs compute_refs(const RadialGrid& grid);

// |grad_w_sq - w_l4_4| / grad_w_sq; pure tail-truncation measure.
double pohozaev_residual(const RadialGrid& grid);

// Truncated mass of W plus a divergence note: the integral grows like
// 128 pi^2 log(r_max), so the value is reported together with the warning.
struct TruncatedMass {
  double value = 0.0;
  bool divergent = true;  // always true for W
};
TruncatedMass mass_of_w(const RadialGrid& grid);

// a * lam * W(lam r) * chi(r / r_cut), chi the C^4 cutoff (1 on [0,1], 0 on
// [2, inf)). The lam-scaling leaves |grad .|_{L^2} invariant while the
// L^{10/3} term decays like lam^{-2/3}, which is how concentrated profiles
// reach the blow-up region. Requires a > 0, lam >= 1.
Field preset_rescaled_w(const RadialGrid& grid, double a, double lam, double r_cut);

}  // namespace cnls

#endif
