#include "cnls/ground_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cnls/smooth_bump.hpp"

namespace cnls {

namespace {
constexpr double kPiSq = std::numbers::pi * std::numbers::pi;
}

double grad_w_sq_exact() { return 32.0 * kPiSq / 3.0; }
double threshold_exact() { return 8.0 * kPiSq / 3.0; }

std::string GroundStateRefs::to_json() const {
  nlohmann::json j{{"grad_w_sq", grad_w_sq},
                   {"w_l4_4", w_l4_4},
                   {"m", m},
                   {"c4", c4},
                   {"grad_w_sq_exact", grad_w_sq_exact()},
                   {"m_exact", threshold_exact()}};
  return j.dump();
}

double w_profile(double r) { return 1.0 / (1.0 + r * r / 8.0); }

Field sample_w(const RadialGrid& grid) {
  Field u(grid);
  for (int i = 0; i < u.size(); ++i) u.values[i] = w_profile(grid.node(i));
  return u;
}

GroundStateRefs compute_refs(const RadialGrid& grid) {
  // |W'(r)| = (r/4) (1 + r^2/8)^{-2}; use the closed form rather than the
  // difference stencil so the tail is not differenced across the boundary.
  std::vector<double> grad2(grid.num_nodes()), w4(grid.num_nodes());
  for (int i = 0; i <= grid.n; ++i) {
    const double r = grid.node(i);
    const double w = w_profile(r);
    const double dw = -(r / 4.0) * w * w;
    grad2[i] = dw * dw;
    w4[i] = w * w * w * w;
  }
  GroundStateRefs refs;
  refs.grad_w_sq = integrate_radial(grid, grad2);
  refs.w_l4_4 = integrate_radial(grid, w4);
  refs.m = refs.grad_w_sq / 4.0;
  refs.c4 = std::pow(refs.w_l4_4, 0.25) / std::sqrt(refs.grad_w_sq);
  return refs;
}

double pohozaev_residual(const RadialGrid& grid) {
  const GroundStateRefs refs = compute_refs(grid);
  return std::abs(refs.grad_w_sq - refs.w_l4_4) / refs.grad_w_sq;
}

TruncatedMass mass_of_w(const RadialGrid& grid) {
  std::vector<double> w2(grid.num_nodes());
  for (int i = 0; i <= grid.n; ++i) {
    const double w = w_profile(grid.node(i));
    w2[i] = w * w;
  }
  return TruncatedMass{integrate_radial(grid, w2), true};
}

Field preset_rescaled_w(const RadialGrid& grid, double a, double lam, double r_cut) {
  if (!(a > 0.0)) throw std::invalid_argument("preset_rescaled_w: a must be positive");
  if (!(lam >= 1.0)) throw std::invalid_argument("preset_rescaled_w: lam must be >= 1");
  const C4Bump chi(1.0, 2.0);
  Field u(grid);
  for (int i = 0; i < u.size(); ++i) {
    const double r = grid.node(i);
    u.values[i] = a * lam * w_profile(lam * r) * chi.value(r / r_cut);
  }
  return u;
}

}  // namespace cnls
