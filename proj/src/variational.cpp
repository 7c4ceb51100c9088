#include "cnls/variational.hpp"

#include <cmath>
#include <stdexcept>

namespace cnls {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_zero(const Field& u) {
  for (const Complex& v : u.values)
    if (v != Complex(0.0)) return false;
  return true;
}

void require_real_nonzero(const Field& u) {
  if (is_zero(u)) throw std::invalid_argument("field is identically zero");
  for (const Complex& v : u.values)
    if (v.imag() != 0.0) throw std::invalid_argument("field must be real");
}

double grad_norm_weighted(const Field& g) {
  std::vector<double> f(g.size());
  for (int i = 0; i < g.size(); ++i) f[i] = std::norm(g.values[i]);
  return std::sqrt(integrate_radial(g.grid, f));
}

// Sobolev-gradient preconditioner: solve (-Lap) d = g by the Thomas
// algorithm. The L^2 gradient of the quotient is dominated by grid-scale
// modes; descending along it moves the slowly decaying tail of the extremal
// only diffusively, far too slowly for the iteration budget. The homogeneous
// H^1 metric is the one the quotient is built on, and with it a unit-scale
// step reproduces the classical inverse iteration u <- (-Lap)^{-1} u^3.
Field precondition(const Field& g) {
  const LaplacianCoeffs lc = laplacian_coeffs(g.grid);
  const int n = g.size();
  std::vector<double> diag(n), rhs(n), cp(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = -lc.diag[i];
    rhs[i] = g.values[i].real();
  }
  cp[0] = -lc.upper[0] / diag[0];
  rhs[0] /= diag[0];
  for (int i = 1; i < n; ++i) {
    const double low = -lc.lower[i];
    const double den = diag[i] - low * cp[i - 1];
    cp[i] = -lc.upper[i] / den;
    rhs[i] = (rhs[i] - low * rhs[i - 1]) / den;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= cp[i] * rhs[i + 1];
  Field out(g.grid);
  for (int i = 0; i < n; ++i) out.values[i] = rhs[i];
  return out;
}

}  // namespace

double sobolev_quotient(const Field& u) {
  if (is_zero(u)) throw std::invalid_argument("sobolev_quotient: zero field");
  const double g = norm_h1dot(u);
  const double l4 = norm_lp(u, 4.0);
  const double q = g / l4;
  return 0.25 * q * q * q * q;
}

Field quotient_gradient(const Field& u) {
  require_real_nonzero(u);
  const double g = norm_h1dot(u);
  const double l4 = norm_lp(u, 4.0);
  const double q4 = std::pow(l4, 4.0);
  const double a = g * g / q4;
  const double b = a * a;
  const Field lap = laplacian4(u);
  Field out(u.grid);
  for (int i = 0; i < u.size(); ++i) {
    const double ui = u.values[i].real();
    out.values[i] = -a * lap.values[i].real() - b * ui * ui * ui;
  }
  return out;
}

MinimizeResult minimize_quotient(const Field& seed, const MinimizeConfig& cfg,
                                 const MinimizeObserver& observer) {
  require_real_nonzero(seed);
  if (cfg.max_iters < 1 || cfg.step0 <= 0.0 || cfg.tol_grad <= 0.0 ||
      cfg.tol_value <= 0.0)
    throw std::invalid_argument("minimize_quotient: bad config");

  auto renormalize = [](Field& u) {
    const double g = norm_h1dot(u);
    if (g > 0.0)
      for (Complex& v : u.values) v /= g;
  };

  Field u = seed;
  for (Complex& v : u.values) v = std::abs(v.real());
  // discrete regularity u'(0) = 0: pin u_0 = u_1. Without it a spike confined
  // to the origin node (whose quadrature weight is only h^4/64) has a small
  // finite discrete quotient and attracts the descent. The descent direction
  // built on the flux-form Laplacian also damps the grid-scale zigzag mode,
  // which the central-difference quotient itself is blind to.
  u.values[0] = u.values[1];
  renormalize(u);

  MinimizeResult res;
  res.minimizer = u;
  double value = sobolev_quotient(u);
  res.value_history.push_back(value);

  double step_start = cfg.step0;
  double boost = 1.0;
  const std::vector<double> qw = quadrature_weights(seed.grid);
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    Field grad = quotient_gradient(u);
    // project onto the pinned subspace {u_0 = u_1}: nodes 0 and 1 move
    // together, so the constrained gradient carries their weighted mean.
    // Without this the unconstrained residual at the pin never vanishes and
    // the stopping tests cannot fire.
    const double shared = (qw[0] * grad.values[0].real() +
                           qw[1] * grad.values[1].real()) /
                          (qw[0] + qw[1]);
    grad.values[0] = grad.values[1] = shared;
    const double gnorm = grad_norm_weighted(grad);
    const Field dir = precondition(grad);
    // scale so that a step of size 100*step0 matches the inverse-iteration
    // fixed point: J'(u) = -(G/Q) Lap u - (G/Q)^2 u^3, so (Q/G) (-Lap)^{-1} J'
    // moves u all the way onto (G/Q) (-Lap)^{-1} u^3. The boost lets the
    // iterate keep accelerating along the nearly flat dilation valley of the
    // quotient as long as full steps keep being accepted.
    const double gh = norm_h1dot(u);
    const double invit =
        gh == 0.0 ? cfg.step0
                  : cfg.step0 * 100.0 * std::pow(norm_lp(u, 4.0), 4.0) /
                        (gh * gh);
    step_start = invit * boost;
    if (observer) observer(iter, value, gnorm, step_start);
    if (gnorm < cfg.tol_grad) {
      res.converged = true;
      break;
    }

    double step = step_start;
    double new_value = value;
    Field candidate(u.grid);
    bool accepted = false;
    int backtracks = 0;
    for (int bt = 0; bt < 40; ++bt) {
      backtracks = bt;
      for (int i = 0; i < u.size(); ++i) {
        const double v = u.values[i].real() - step * dir.values[i].real();
        candidate.values[i] = v > 0.0 ? v : 0.0;  // the extremal is positive
      }
      candidate.values[0] = candidate.values[1];
      if (!is_zero(candidate)) {
        new_value = sobolev_quotient(candidate);
        if (new_value < value) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;  // no descent direction left at line-search scale
      break;
    }
    boost = backtracks == 0 ? std::min(boost * 2.0, 1e6) : 1.0;

    u = candidate;
    renormalize(u);
    const double prev = value;
    value = sobolev_quotient(u);
    res.value_history.push_back(value);
    res.iterations = iter;
    if (std::abs(prev - value) < cfg.tol_value * std::abs(prev)) {
      res.converged = true;
      break;
    }
  }

  res.minimizer = u;
  res.value = value;
  return res;
}

}  // namespace cnls
