#include "cnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cnls/smooth_bump.hpp"

namespace cnls {

namespace {

constexpr double kPi = std::numbers::pi;

// ---- small dense polynomial helpers (ascending coefficients) ----

using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_derive(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<double>(i);
  return d;
}

Poly poly_antiderive(const Poly& a) {
  Poly p(a.size() + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) p[i + 1] = a[i] / static_cast<double>(i + 1);
  return p;
}

double poly_eval(const Poly& a, double x) {
  double v = 0.0;
  for (size_t i = a.size(); i-- > 0;) v = v * x + a[i];
  return v;
}

// Virial transition on rho in [1,3], parameterized by s = (rho-1)/2:
// phi'(rho) = 2 rho (1 - S(s)), integrated in closed form. T_k holds the
// k-th s-derivative of T(s) = phi(1 + 2s); d^k phi / d rho^k = T_k(s) / 2^k.
struct VirialProfile {
  Poly T[5];
  double phi_far;
  double c_phi;  // sup |phi''|

  VirialProfile() {
    // 1 - S(s), S the degree-9 C^4 step
    Poly one_minus_s = {1.0, 0.0, 0.0, 0.0, 0.0, -126.0, 420.0, -540.0, 315.0, -70.0};
    Poly rho = {1.0, 2.0};                       // rho(s) = 1 + 2s
    Poly dphi_drho = poly_mul({2.0}, poly_mul(rho, one_minus_s));
    Poly t = poly_antiderive(poly_mul({2.0}, dphi_drho));  // ds-antiderivative
    t[0] = 1.0;                                            // phi(1) = 1
    T[0] = t;
    for (int k = 1; k <= 4; ++k) T[k] = poly_derive(T[k - 1]);
    phi_far = poly_eval(T[0], 1.0);
    c_phi = 2.0;
    for (int i = 0; i <= 4096; ++i) {
      const double s = i / 4096.0;
      c_phi = std::max(c_phi, std::abs(poly_eval(T[2], s) / 4.0));
    }
  }
};

const VirialProfile& virial_profile() {
  static const VirialProfile p;
  return p;
}

// ---- Gauss-Legendre nodes on [-1, 1] ----

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * xi * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      const double dx = p0 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
  }
}

// map GL rule to [a, b]
void gauss_legendre_ab(int n, double a, double b, std::vector<double>& x,
                       std::vector<double>& w) {
  gauss_legendre(n, x, w);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
}

// ---- Morawetz autocorrelation table ----

struct MorawetzPhiTable {
  static constexpr int kSize = 2049;
  static constexpr double kRhoMax = 4.0;
  double values[kSize];

  MorawetzPhiTable() {
    const C4Bump psi(1.0, 2.0);
    const int nq = 96;
    std::vector<double> xr, wr, xt, wt;
    gauss_legendre_ab(nq, 0.0, 2.0, xr, wr);
    gauss_legendre_ab(nq, 0.0, kPi, xt, wt);
    std::vector<double> cth(nq), s2w(nq), psi2(nq), r3w(nq);
    for (int q = 0; q < nq; ++q) {
      cth[q] = std::cos(xt[q]);
      const double s = std::sin(xt[q]);
      s2w[q] = s * s * wt[q];
      const double p = psi.value(xr[q]);
      psi2[q] = p * p;
      r3w[q] = xr[q] * xr[q] * xr[q] * wr[q];
    }
    for (int k = 0; k < kSize; ++k) {
      const double rho = kRhoMax * k / (kSize - 1);
      double sum = 0.0;
      for (int i = 0; i < nq; ++i) {
        if (psi2[i] == 0.0) continue;
        double ang = 0.0;
        for (int q = 0; q < nq; ++q) {
          const double d2 = xr[i] * xr[i] + rho * rho - 2.0 * xr[i] * rho * cth[q];
          const double d = std::sqrt(std::max(d2, 0.0));
          const double pd = psi.value(d);
          if (pd != 0.0) ang += s2w[q] * pd * pd;
        }
        sum += r3w[i] * psi2[i] * ang;
      }
      values[k] = 4.0 * kPi * sum;
    }
  }

  // Catmull-Rom cubic: linear interpolation leaves an O(step^2) kink floor
  // that stalls the kernel's theta-quadrature convergence around 1e-6. The
  // ghost points use the even symmetry of phi at rho = 0 and its C^4 contact
  // with zero at rho = 4.
  double eval(double rho) const {
    if (rho < 0.0 || rho >= kRhoMax) return 0.0;
    const double x = rho * (kSize - 1) / kRhoMax;
    const int j = std::min(static_cast<int>(x), kSize - 2);
    const double t = x - j;
    const double v1 = values[j], v2 = values[j + 1];
    const double v0 = j > 0 ? values[j - 1] : values[1];
    const double v3 = j + 2 < kSize ? values[j + 2] : 0.0;
    return v1 + 0.5 * t *
                    (v2 - v0 +
                     t * (2.0 * v0 - 5.0 * v1 + 4.0 * v2 - v3 +
                          t * (3.0 * (v1 - v2) + v3 - v0)));
  }
};

const MorawetzPhiTable& morawetz_phi_table() {
  static const MorawetzPhiTable t;
  return t;
}

void require_grid(const Field& u, const RadialGrid& g, const char* who) {
  if (!u.grid.compatible(g)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

double virial_phi(double rho, int order) {
  if (order < 0 || order > 4) throw std::invalid_argument("virial_phi: order in [0,4]");
  const VirialProfile& p = virial_profile();
  if (rho <= 1.0) {
    switch (order) {
      case 0: return rho * rho;
      case 1: return 2.0 * rho;
      case 2: return 2.0;
      default: return 0.0;
    }
  }
  if (rho >= 3.0) return order == 0 ? p.phi_far : 0.0;
  const double s = 0.5 * (rho - 1.0);
  return poly_eval(p.T[order], s) / std::pow(2.0, order);
}

VirialWeight build_virial_weight(const RadialGrid& grid, double R) {
  if (!(R >= 1.0)) throw std::invalid_argument("build_virial_weight: R >= 1 required");
  if (3.0 * R > grid.r_max)
    throw std::invalid_argument("build_virial_weight: domain too small (need 3R <= r_max)");

  VirialWeight w;
  w.grid = grid;
  w.R = R;
  w.c_phi = virial_profile().c_phi;
  w.phi_far = virial_profile().phi_far;
  const int m = grid.num_nodes();
  w.phi.resize(m);
  w.dphi.resize(m);
  w.d2phi.resize(m);
  w.lap.resize(m);
  w.bilap.resize(m);
  for (int i = 0; i < m; ++i) {
    const double rho = grid.node(i) / R;
    const double p1 = virial_phi(rho, 1), p2 = virial_phi(rho, 2);
    w.phi[i] = R * R * virial_phi(rho, 0);
    w.dphi[i] = R * p1;
    w.d2phi[i] = p2;
    if (rho < 1e-12) {
      w.lap[i] = 8.0;  // Lap r^2 = 2d = 8 in d = 4
      w.bilap[i] = 0.0;
    } else if (rho <= 1.0 || rho >= 3.0) {
      w.lap[i] = p2 + 3.0 * p1 / rho;
      w.bilap[i] = 0.0;
    } else {
      const double p3 = virial_phi(rho, 3), p4 = virial_phi(rho, 4);
      w.lap[i] = p2 + 3.0 * p1 / rho;
      w.bilap[i] = (p4 + 6.0 * p3 / rho + 3.0 * p2 / (rho * rho) -
                    3.0 * p1 / (rho * rho * rho)) /
                   (R * R);
    }
  }
  return w;
}

double virial(const Field& u, const VirialWeight& w) {
  require_grid(u, w.grid, "virial");
  std::vector<double> f(u.size());
  for (int i = 0; i < u.size(); ++i) f[i] = w.phi[i] * std::norm(u.values[i]);
  return integrate_radial(u.grid, f);
}

double virial_dt(const Field& u, const VirialWeight& w) {
  require_grid(u, w.grid, "virial_dt");
  const Field du = radial_derivative(u);
  std::vector<double> f(u.size());
  for (int i = 0; i < u.size(); ++i)
    f[i] = std::imag(std::conj(u.values[i]) * du.values[i]) * w.dphi[i];
  return 2.0 * integrate_radial(u.grid, f);
}

double virial_dtt(const Field& u, const VirialWeight& w) {
  require_grid(u, w.grid, "virial_dtt");
  const Field du = radial_derivative(u);
  std::vector<double> f(u.size());
  for (int i = 0; i < u.size(); ++i) {
    const double mod2 = std::norm(u.values[i]);
    const double mod4 = mod2 * mod2;
    const double mod103 = mod2 * std::cbrt(mod2 * mod2);
    f[i] = 4.0 * w.d2phi[i] * std::norm(du.values[i]) -
           w.bilap[i] * mod2 - w.lap[i] * (mod4 - 0.8 * mod103);
  }
  return integrate_radial(u.grid, f);
}

double morawetz_phi(double rho) { return morawetz_phi_table().eval(rho); }

MorawetzKernel build_morawetz_kernel(const RadialGrid& grid, double R, int n_theta) {
  if (n_theta < 64) throw std::invalid_argument("build_morawetz_kernel: n_theta >= 64");
  if (!(R >= 1.0)) throw std::invalid_argument("build_morawetz_kernel: R >= 1 required");
  const size_t m = static_cast<size_t>(grid.num_nodes());
  if (m * m > 20'000'000)
    throw std::invalid_argument(
        "build_morawetz_kernel: grid too fine for a full kernel table; resample to a "
        "diagnostic grid first");

  MorawetzKernel k;
  k.grid = grid;
  k.R = R;
  k.n_theta = n_theta;
  k.phi0 = morawetz_phi(0.0);
  k.table.assign(m * m, 0.0);

  std::vector<double> xt, wt;
  gauss_legendre_ab(n_theta, 0.0, kPi, xt, wt);
  std::vector<double> cth(n_theta), s2w(n_theta);
  for (int q = 0; q < n_theta; ++q) {
    cth[q] = std::cos(xt[q]);
    const double s = std::sin(xt[q]);
    s2w[q] = s * s * wt[q];
  }

  const double support = 4.0 * R;
  for (size_t ix = 0; ix < m; ++ix) {
    const double rx = grid.node(static_cast<int>(ix));
    for (size_t iy = 0; iy < m; ++iy) {
      const double ry = grid.node(static_cast<int>(iy));
      if (std::abs(rx - ry) >= support) continue;  // phi support is rho <= 4
      double sum = 0.0;
      for (int q = 0; q < n_theta; ++q) {
        const double d2 = rx * rx + ry * ry - 2.0 * rx * ry * cth[q];
        const double d = std::sqrt(std::max(d2, 0.0));
        const double ph = morawetz_phi(d / R);
        if (ph != 0.0) sum += s2w[q] * ph * (rx - ry * cth[q]);
      }
      k.table[ix * m + iy] = 4.0 * kPi * sum;
    }
  }
  return k;
}

double morawetz_mr(const Field& u, const MorawetzKernel& k) {
  require_grid(u, k.grid, "morawetz_mr");
  const int m = u.size();
  const std::vector<double> qw = quadrature_weights(u.grid);
  const Field du = radial_derivative(u);
  std::vector<double> p(m), dens(m);
  for (int i = 0; i < m; ++i) {
    p[i] = qw[i] * std::imag(std::conj(u.values[i]) * du.values[i]);
    dens[i] = qw[i] * std::norm(u.values[i]);
  }
  double sum = 0.0;
  for (int ix = 0; ix < m; ++ix) {
    if (p[ix] == 0.0) continue;
    const double* row = &k.table[static_cast<size_t>(ix) * m];
    double inner = 0.0;
    for (int iy = 0; iy < m; ++iy) inner += dens[iy] * row[iy];
    sum += p[ix] * inner;
  }
  // each quadrature weight carries 2 pi^2; the double integral needs it once
  return sum / (2.0 * kPi * kPi);
}

std::vector<MorawetzKernel> build_morawetz_ladder(const RadialGrid& grid, double R0,
                                                  int count, int n_theta) {
  if (!(R0 >= 1.0)) throw std::invalid_argument("build_morawetz_ladder: R0 >= 1");
  std::vector<MorawetzKernel> ladder;
  if (R0 == 1.0) return ladder;
  if (count < 2) throw std::invalid_argument("build_morawetz_ladder: count >= 2");
  const double step = std::log(R0) / (count - 1);
  ladder.reserve(count);
  for (int i = 0; i < count; ++i)
    ladder.push_back(build_morawetz_kernel(grid, std::exp(i * step), n_theta));
  return ladder;
}

double morawetz_m(const Field& u, const std::vector<MorawetzKernel>& ladder) {
  if (ladder.empty()) return 0.0;  // degenerate range R0 = 1
  if (ladder.size() < 2) throw std::invalid_argument("morawetz_m: need >= 2 kernels");
  std::vector<double> mr(ladder.size()), lr(ladder.size());
  for (size_t i = 0; i < ladder.size(); ++i) {
    mr[i] = morawetz_mr(u, ladder[i]);
    lr[i] = std::log(ladder[i].R);
  }
  double sum = 0.0;  // trapezoid in log R
  for (size_t i = 0; i + 1 < ladder.size(); ++i)
    sum += 0.5 * (mr[i] + mr[i + 1]) * (lr[i + 1] - lr[i]);
  return sum;
}

void StrichartzAccumulator::update(const Field& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("StrichartzAccumulator: dt must be positive");
  int_l6 += dt * std::pow(norm_lp(u, 6.0), 6.0);
  int_l4 += dt * std::pow(norm_lp(u, 4.0), 4.0);
  int_l3 += dt * std::pow(norm_lp(u, 3.0), 3.0);
  t_b += dt;
}

double StrichartzAccumulator::w1() const { return std::pow(int_l6, 1.0 / 6.0); }
double StrichartzAccumulator::w2() const { return std::pow(int_l4, 0.25); }
double StrichartzAccumulator::v0() const { return std::pow(int_l3, 1.0 / 3.0); }

}  // namespace cnls
