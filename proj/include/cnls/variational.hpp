#ifndef CNLS_VARIATIONAL_HPP
#define CNLS_VARIATIONAL_HPP

#include <functional>
#include <vector>

#include "cnls/radial_field.hpp"

// Minimization of the Sobolev quotient
//   J(u) = 1/4 (|grad u|_{L^2} / |u|_{L^4})^4,
// the scale-invariant form of the constrained problem
//   inf { E_c(u) : |grad u|^2 = |u|_4^4 }.
// The infimum is the threshold m, attained at the Aubin-Talenti profile, and
// recovering it numerically confirms the variational characterization.

namespace cnls {

struct MinimizeConfig {
  int max_iters = 2000;
  double step0 = 1e-2;
  double tol_grad = 1e-6;   // weighted L^2 norm of the quotient gradient
  double tol_value = 1e-10; // relative value change
};

struct MinimizeResult {
  Field minimizer;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> value_history;  // one entry per accepted iteration
};

// Per-iteration observer: (iter, value, grad_norm, step). Optional.
using MinimizeObserver = std::function<void(int, double, double, double)>;

double sobolev_quotient(const Field& u);

// First variation restricted to real fields:
//   dJ(u) = A (-Lap u) - B u^3,  A = |grad u|^2/|u|_4^4, B = |grad u|^4/|u|_4^8,
// so that <dJ(u), v>_w is the directional derivative of J at u along v.
Field quotient_gradient(const Field& u);

// Projected gradient descent with backtracking line search; the iterate is
// kept real, nonnegative, and renormalized to |grad u| = 1 (harmless, J is
// 0-homogeneous). Seed must be real and nonzero.
MinimizeResult minimize_quotient(const Field& seed, const MinimizeConfig& cfg,
                                 const MinimizeObserver& observer = nullptr);

}  // namespace cnls

#endif
