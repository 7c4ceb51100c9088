#ifndef CNLS_RADIAL_FIELD_HPP
#define CNLS_RADIAL_FIELD_HPP

#include <complex>
#include <string>
#include <vector>

// Radial discretization of R^4. Radial functions f(|x|) are sampled on a
// uniform mesh r_i = i*h, i = 0..n, and volume integrals use the 4D measure
// 2*pi^2 * r^3 dr (2*pi^2 = area of S^3). The discrete Laplacian is kept in
// conservative flux form so that it is exactly self-adjoint with respect to
// the quadrature inner product; the unitary time stepping relies on this.

namespace cnls {

using Complex = std::complex<double>;

struct RadialGrid {
  double r_max = 0.0;
  int n = 0;       // number of cells; n+1 nodes
  double h = 0.0;  // spacing, r_max / n

  double node(int i) const { return i * h; }
  int num_nodes() const { return n + 1; }
  bool compatible(const RadialGrid& other) const {
    return r_max == other.r_max && n == other.n;
  }
};

// r_max > 0, n >= 16; throws std::invalid_argument otherwise.
RadialGrid make_grid(double r_max, int n);

struct Field {
  RadialGrid grid;
  std::vector<Complex> values;

  Field() = default;
  explicit Field(const RadialGrid& g) : grid(g), values(g.num_nodes()) {}

  int size() const { return static_cast<int>(values.size()); }
  bool all_finite() const;
  double boundary_magnitude() const { return std::abs(values.back()); }
};

// Quadrature weights w_i such that integral = sum_i w_i f_i approximates
// 2*pi^2 * int_0^{r_max} r^3 f(r) dr. Composite trapezoid in r^3 f, except
// that the origin node carries the exact cell volume int_0^{h/2} r^3 dr =
// h^4/64 instead of the trapezoid's zero weight; this is an O(h^4)
// perturbation of the rule and is what makes the flux-form Laplacian exactly
// self-adjoint on the full node set.
std::vector<double> quadrature_weights(const RadialGrid& grid);

double integrate_radial(const RadialGrid& grid, const std::vector<double>& f);

// <u, v>_w = sum_i w_i u_i conj(v_i); the discrete L^2(R^4) pairing.
Complex weighted_inner(const Field& u, const Field& v);

// (integral |u|^p)^(1/p); requires p >= 2.
double norm_lp(const Field& u, double p);
double norm_l2(const Field& u);

// du/dr: central differences inside, symmetric ghost at r = 0 (so an even
// profile has zero slope there), second-order one-sided at r = r_max.
Field radial_derivative(const Field& u);

// ||grad u||_{L^2(R^4)} for radial u.
double norm_h1dot(const Field& u);

// Tridiagonal coefficients of the discrete 4D radial Laplacian,
//   (L u)_i = lower_i u_{i-1} + diag_i u_i + upper_i u_{i+1},
// flux form with Dirichlet u = 0 beyond r_max and the regular limit
// 8(u_1 - u_0)/h^2 at the origin.
struct LaplacianCoeffs {
  std::vector<double> lower, diag, upper;
};
LaplacianCoeffs laplacian_coeffs(const RadialGrid& grid);

Field laplacian4(const Field& u);

// Linear interpolation of u onto another grid; reads beyond u's domain are 0.
// Used to move snapshots onto coarser diagnostic grids (Morawetz kernels).
Field resample_field(const Field& u, const RadialGrid& target);

// Snapshot file: "# r_max=<v> n=<v>" then "r \t re(u) \t im(u)" per node,
// 17 significant digits.
void write_snapshot(const std::string& path, const Field& u);
Field read_snapshot(const std::string& path);

}  // namespace cnls

#endif
