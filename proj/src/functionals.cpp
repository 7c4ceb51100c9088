#include "cnls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cnls {

bool ScalingPair::in_omega() const {
  if (alpha < 0.0) return false;
  if (5.0 * alpha + 6.0 * beta < 0.0) return false;
  if (alpha == 0.0 && beta == 0.0) return false;
  return true;
}

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::K_PLUS: return "K_PLUS";
    case RegionLabel::K_MINUS: return "K_MINUS";
    case RegionLabel::ABOVE_THRESHOLD: return "ABOVE_THRESHOLD";
  }
  return "?";
}

std::string FunctionalReport::to_json() const {
  nlohmann::json j{{"mass", mass},      {"energy", energy}, {"energy_c", energy_c},
                   {"grad_sq", grad_sq}, {"l4_4", l4_4},     {"l10_3", l10_3},
                   {"k", k},            {"k_c", k_c},       {"h", h},
                   {"h_c", h_c},        {"label", to_string(label)}};
  return j.dump();
}

Norms compute_norms(const Field& u) {
  Norms n;
  const double g = norm_h1dot(u);
  n.grad_sq = g * g;
  n.l4_4 = std::pow(norm_lp(u, 4.0), 4.0);
  n.l10_3 = std::pow(norm_lp(u, 10.0 / 3.0), 10.0 / 3.0);
  return n;
}

double mass(const Field& u) {
  const double l2 = norm_l2(u);
  return l2 * l2;
}

double energy(const Field& u) {
  const Norms n = compute_norms(u);
  return 0.5 * n.grad_sq - 0.25 * n.l4_4 + 0.3 * n.l10_3;
}

double energy_c(const Field& u) {
  const Norms n = compute_norms(u);
  return 0.5 * n.grad_sq - 0.25 * n.l4_4;
}

double mu_bar(const ScalingPair& p) {
  return std::max(2.0 * (p.alpha + p.beta), 10.0 / 3.0 * p.alpha + 4.0 * p.beta);
}

double k_from_norms(const Norms& n, const ScalingPair& p) {
  return (p.alpha + p.beta) * (n.grad_sq - n.l4_4) +
         (p.alpha + 1.2 * p.beta) * n.l10_3;
}

double k_functional(const Field& u, const ScalingPair& p) {
  return k_from_norms(compute_norms(u), p);
}

double k_c_functional(const Field& u, const ScalingPair& p) {
  const Norms n = compute_norms(u);
  return (p.alpha + p.beta) * (n.grad_sq - n.l4_4);
}

namespace {
void require_omega(const ScalingPair& p) {
  if (!p.in_omega()) throw std::invalid_argument("scaling pair outside Omega");
}
}  // namespace

double h_from_norms(const Norms& n, const ScalingPair& p) {
  require_omega(p);
  const double a = p.alpha, b = p.beta;
  if (2.0 * a <= -3.0 * b)
    return 0.25 * n.l4_4 - (2.0 * a + 3.0 * b) / (10.0 * (a + b)) * n.l10_3;
  return (2.0 * a + 3.0 * b) / (10.0 * a + 12.0 * b) * n.grad_sq +
         a / (20.0 * a + 24.0 * b) * n.l4_4;
}

double h_c_from_norms(const Norms& n, const ScalingPair& p) {
  require_omega(p);
  const double a = p.alpha, b = p.beta;
  if (2.0 * a <= -3.0 * b) return 0.25 * n.l4_4;
  return (2.0 * a + 3.0 * b) / (10.0 * a + 12.0 * b) * n.grad_sq +
         a / (20.0 * a + 24.0 * b) * n.l4_4;
}

double h_functional(const Field& u, const ScalingPair& p) {
  return h_from_norms(compute_norms(u), p);
}

double h_c_functional(const Field& u, const ScalingPair& p) {
  return h_c_from_norms(compute_norms(u), p);
}

double l_mu_minus_l_e(const Norms& n, const ScalingPair& p) {
  const double a = p.alpha, b = p.beta;
  if (2.0 * a <= -3.0 * b)
    return 2.0 * (a + b) * (a + b) * n.l4_4 -
           2.0 / 15.0 * (2.0 * a + 3.0 * b) * (5.0 * a + 6.0 * b) * n.l10_3;
  return (2.0 / 3.0 * a + b) * (2.0 * a + 2.0 * b) * n.grad_sq +
         2.0 / 3.0 * a * (a + b) * n.l4_4;
}

Field scale_field(const Field& u, const ScalingPair& p, double lambda,
                  double* truncated_mass_fraction) {
  const double amp = std::exp(p.alpha * lambda);
  const double stretch = std::exp(-p.beta * lambda);  // read u at stretch * r
  Field v(u.grid);
  for (int i = 0; i < v.size(); ++i) {
    const double r = u.grid.node(i) * stretch;
    if (r > u.grid.r_max) {
      v.values[i] = 0.0;
      continue;
    }
    const double x = r / u.grid.h;
    const int j = std::min(static_cast<int>(x), u.grid.n - 1);
    const double t = x - j;
    v.values[i] = amp * ((1.0 - t) * u.values[j] + t * u.values[j + 1]);
  }
  if (truncated_mass_fraction) {
    // |u|^2 weight beyond the furthest sampled source radius
    const double reach = std::min(u.grid.r_max * stretch, u.grid.r_max);
    const std::vector<double> w = quadrature_weights(u.grid);
    double total = 0.0, lost = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double m = w[i] * std::norm(u.values[i]);
      total += m;
      if (u.grid.node(i) > reach) lost += m;
    }
    *truncated_mass_fraction = total > 0.0 ? lost / total : 0.0;
  }
  return v;
}

double lambda_derivative_residual(const Field& u, const ScalingPair& p, double h_fd) {
  if (h_fd < 1e-6 || h_fd > 1e-2)
    throw std::invalid_argument("lambda_derivative_residual: h_fd in [1e-6, 1e-2]");
  const double ep = energy(scale_field(u, p, h_fd));
  const double em = energy(scale_field(u, p, -h_fd));
  const double fd = (ep - em) / (2.0 * h_fd);
  const double k = k_functional(u, p);
  return std::abs(fd - k) / std::max(1.0, std::abs(k));
}

RegionLabel classify(const Field& u, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("classify: m must be positive");
  const double e = energy(u);
  if (!(e < m)) return RegionLabel::ABOVE_THRESHOLD;
  const double k = k_functional(u, ScalingPair{2.0, -1.0});
  return k >= 0.0 ? RegionLabel::K_PLUS : RegionLabel::K_MINUS;
}

FunctionalReport make_report(const Field& u, double m) {
  const ScalingPair p{2.0, -1.0};
  FunctionalReport rep;
  const Norms n = compute_norms(u);
  rep.mass = mass(u);
  rep.grad_sq = n.grad_sq;
  rep.l4_4 = n.l4_4;
  rep.l10_3 = n.l10_3;
  rep.energy = 0.5 * n.grad_sq - 0.25 * n.l4_4 + 0.3 * n.l10_3;
  rep.energy_c = 0.5 * n.grad_sq - 0.25 * n.l4_4;
  rep.k = k_from_norms(n, p);
  rep.k_c = (p.alpha + p.beta) * (n.grad_sq - n.l4_4);
  rep.h = h_from_norms(n, p);
  rep.h_c = h_c_from_norms(n, p);
  rep.label = (rep.energy < m)
                  ? (rep.k >= 0.0 ? RegionLabel::K_PLUS : RegionLabel::K_MINUS)
                  : RegionLabel::ABOVE_THRESHOLD;
  return rep;
}

}  // namespace cnls
