#ifndef CNLS_EVOLUTION_HPP
#define CNLS_EVOLUTION_HPP

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cnls/functionals.hpp"
#include "cnls/radial_field.hpp"

// Time integration of i u_t + Lap u = -|u|^2 u + |u|^{4/3} u by Strang
// splitting. The linear half-steps are Crank-Nicolson with the flux-form
// radial Laplacian: the scheme is a Cayley transform of a self-adjoint
// operator, hence exactly unitary in the quadrature inner product, and the
// nonlinear flow is an exact pointwise phase rotation (both nonlinearities
// preserve |u|). Discrete mass is therefore conserved to round-off.

namespace cnls {

struct SolverConfig {
  double dt0 = 1e-3;
  double dt_min = 1e-8;
  double t_end = 1.0;
  double tol_drift = 1e-8;      // per-step relative energy drift
  double blowup_factor = 20.0;  // gradient-growth multiple declaring blow-up
  int record_stride = 100;      // accepted steps between records
  double grad_ref = 0.0;        // |grad W| reference; 0 -> analytic value
};

struct Outcome {
  enum class Kind { COMPLETED, BLOW_UP, STEP_UNDERFLOW };
  Kind kind = Kind::COMPLETED;
  double t = 0.0;  // detection time for BLOW_UP / STEP_UNDERFLOW, else t_end

  std::string to_json() const;
};

struct TimeSeries {
  struct Record {
    double t = 0.0;
    std::map<std::string, double> scalars;
    std::string label;
  };
  std::vector<Record> records;
};

// Crank-Nicolson propagator for e^{i tau Lap}: solves
//   (I - i tau/2 L) u+ = (I + i tau/2 L) u
// with a precomputed complex Thomas factorization. tau may be negative.
class LinearPropagator {
 public:
  LinearPropagator(const RadialGrid& grid, double tau);

  double tau() const { return tau_; }
  void apply(Field& u) const;  // in place
  Field operator()(const Field& u) const;

 private:
  RadialGrid grid_;
  double tau_;
  // factorization of I - i tau/2 L and the bands of I + i tau/2 L
  std::vector<Complex> rhs_lower_, rhs_diag_, rhs_upper_;
  std::vector<Complex> lhs_lower_, fac_upper_, fac_inv_diag_;
};

Field linear_step(const Field& u, double tau);

// Exact flow of i u_t = -|u|^2 u + |u|^{4/3} u: pure phase rotation
// u <- u exp(i tau (|u|^2 - |u|^{4/3})).
Field nonlinear_step(const Field& u, double tau);

Field strang_step(const Field& u, double tau);

// Recorder hook: called every record_stride accepted steps and at the final
// state with (t, field, functional report).
using Recorder = std::function<void(double, const Field&, const FunctionalReport&)>;

std::pair<Outcome, TimeSeries> evolve(const Field& u0, const SolverConfig& cfg,
                                      const Recorder& recorder = nullptr);

// Cauchy-sequence monitor for scattering: v_k = e^{-i t_k Lap} u(t_k)
// (backward free flow via composed CN steps of size <= tau_back), returns
// d_k = |v_{k+1} - v_k|_{H^1}. A scattering solution gives d_k -> 0.
std::vector<double> scattering_monitor(
    const std::vector<std::pair<double, Field>>& history, double tau_back = 1e-2);

}  // namespace cnls

#endif
