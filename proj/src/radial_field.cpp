#include "cnls/radial_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cnls {

namespace {
constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;

void require_compatible(const RadialGrid& a, const RadialGrid& b) {
  if (!a.compatible(b)) throw std::invalid_argument("incompatible grids");
}
}  // namespace

RadialGrid make_grid(double r_max, int n) {
  if (!(r_max > 0.0)) throw std::invalid_argument("make_grid: r_max must be positive");
  if (n < 16) throw std::invalid_argument("make_grid: need n >= 16");
  RadialGrid g;
  g.r_max = r_max;
  g.n = n;
  g.h = r_max / n;
  return g;
}

bool Field::all_finite() const {
  for (const Complex& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

std::vector<double> quadrature_weights(const RadialGrid& grid) {
  std::vector<double> w(grid.num_nodes());
  const double h = grid.h;
  w[0] = kTwoPiSq * h * h * h * h / 64.0;  // exact volume of the half-cell at r = 0
  for (int i = 1; i < grid.n; ++i) {
    const double r = grid.node(i);
    w[i] = kTwoPiSq * h * r * r * r;
  }
  const double rn = grid.node(grid.n);
  w[grid.n] = 0.5 * kTwoPiSq * h * rn * rn * rn;
  return w;
}

double integrate_radial(const RadialGrid& grid, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != grid.num_nodes())
    throw std::invalid_argument("integrate_radial: sample length mismatch");
  const std::vector<double> w = quadrature_weights(grid);
  double sum = 0.0;
  for (int i = 0; i <= grid.n; ++i) sum += w[i] * f[i];
  return sum;
}

Complex weighted_inner(const Field& u, const Field& v) {
  require_compatible(u.grid, v.grid);
  const std::vector<double> w = quadrature_weights(u.grid);
  Complex sum = 0.0;
  for (int i = 0; i < u.size(); ++i) sum += w[i] * u.values[i] * std::conj(v.values[i]);
  return sum;
}

double norm_lp(const Field& u, double p) {
  if (p < 2.0) throw std::invalid_argument("norm_lp: p must be >= 2");
  std::vector<double> f(u.size());
  for (int i = 0; i < u.size(); ++i) f[i] = std::pow(std::abs(u.values[i]), p);
  const double integral = integrate_radial(u.grid, f);
  return std::pow(integral, 1.0 / p);
}

double norm_l2(const Field& u) { return norm_lp(u, 2.0); }

Field radial_derivative(const Field& u) {
  const int n = u.grid.n;
  const double h = u.grid.h;
  Field d(u.grid);
  d.values[0] = 0.0;  // ghost reflection u(-h) = u(h)
  for (int i = 1; i < n; ++i)
    d.values[i] = (u.values[i + 1] - u.values[i - 1]) / (2.0 * h);
  d.values[n] =
      (3.0 * u.values[n] - 4.0 * u.values[n - 1] + u.values[n - 2]) / (2.0 * h);
  return d;
}

double norm_h1dot(const Field& u) {
  const Field d = radial_derivative(u);
  std::vector<double> f(u.size());
  for (int i = 0; i < u.size(); ++i) f[i] = std::norm(d.values[i]);
  return std::sqrt(integrate_radial(u.grid, f));
}

LaplacianCoeffs laplacian_coeffs(const RadialGrid& grid) {
  const int n = grid.n;
  const double h = grid.h;
  LaplacianCoeffs c;
  c.lower.assign(n + 1, 0.0);
  c.diag.assign(n + 1, 0.0);
  c.upper.assign(n + 1, 0.0);

  // Regular limit at the origin: L u(0) = 8 (u_1 - u_0) / h^2, which is the
  // flux over the half-cell [0, h/2] divided by its exact volume h^4/64.
  c.diag[0] = -8.0 / (h * h);
  c.upper[0] = 8.0 / (h * h);

  auto rc = [h](double i) { return i * h; };
  for (int i = 1; i < n; ++i) {
    const double r3 = std::pow(rc(i), 3);
    const double fp = std::pow(rc(i + 0.5), 3) / (h * h);  // outward flux
    const double fm = std::pow(rc(i - 0.5), 3) / (h * h);  // inward flux
    c.lower[i] = fm / r3;
    c.upper[i] = fp / r3;
    c.diag[i] = -(fp + fm) / r3;
  }
  // Last node: half cell (trapezoid weight 1/2), Dirichlet ghost u_{n+1} = 0.
  {
    const double r3 = std::pow(rc(n), 3);
    const double fp = std::pow(rc(n + 0.5), 3) / (h * h);
    const double fm = std::pow(rc(n - 0.5), 3) / (h * h);
    c.lower[n] = 2.0 * fm / r3;
    c.diag[n] = -2.0 * (fp + fm) / r3;
  }
  return c;
}

Field laplacian4(const Field& u) {
  const LaplacianCoeffs c = laplacian_coeffs(u.grid);
  const int n = u.grid.n;
  Field out(u.grid);
  out.values[0] = c.diag[0] * u.values[0] + c.upper[0] * u.values[1];
  for (int i = 1; i < n; ++i)
    out.values[i] = c.lower[i] * u.values[i - 1] + c.diag[i] * u.values[i] +
                    c.upper[i] * u.values[i + 1];
  out.values[n] = c.lower[n] * u.values[n - 1] + c.diag[n] * u.values[n];
  return out;
}

Field resample_field(const Field& u, const RadialGrid& target) {
  Field v(target);
  const RadialGrid& g = u.grid;
  for (int i = 0; i <= target.n; ++i) {
    const double r = target.node(i);
    const double s = r / g.h;
    const int j = static_cast<int>(std::floor(s));
    if (j >= g.n) {
      v.values[i] = (j == g.n && s == static_cast<double>(g.n)) ? u.values[g.n] : Complex(0.0);
      continue;
    }
    const double frac = s - j;
    v.values[i] = (1.0 - frac) * u.values[j] + frac * u.values[j + 1];
  }
  return v;
}

void write_snapshot(const std::string& path, const Field& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# r_max=%.17g n=%d\n", u.grid.r_max, u.grid.n);
  out << buf;
  for (int i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\t%.17g\n", u.grid.node(i),
                  u.values[i].real(), u.values[i].imag());
    out << buf;
  }
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

Field read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
  std::string header;
  std::getline(in, header);
  double r_max = 0.0;
  int n = 0;
  if (std::sscanf(header.c_str(), "# r_max=%lf n=%d", &r_max, &n) != 2)
    throw std::runtime_error("bad snapshot header: " + header);
  Field u(make_grid(r_max, n));
  for (int i = 0; i <= n; ++i) {
    double r, re, im;
    if (!(in >> r >> re >> im)) throw std::runtime_error("truncated snapshot: " + path);
    u.values[i] = Complex(re, im);
  }
  return u;
}

}  // namespace cnls
