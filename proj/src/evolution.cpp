#include "cnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cnls/ground_state.hpp"

namespace cnls {

std::string Outcome::to_json() const {
  const char* k = kind == Kind::COMPLETED      ? "COMPLETED"
                  : kind == Kind::BLOW_UP      ? "BLOW_UP"
                                               : "STEP_UNDERFLOW";
  return nlohmann::json{{"outcome", k}, {"t", t}}.dump();
}

LinearPropagator::LinearPropagator(const RadialGrid& grid, double tau)
    : grid_(grid), tau_(tau) {
  const LaplacianCoeffs L = laplacian_coeffs(grid);
  const int m = grid.num_nodes();
  const Complex z(0.0, 0.5 * tau);

  rhs_lower_.resize(m);
  rhs_diag_.resize(m);
  rhs_upper_.resize(m);
  std::vector<Complex> lhs_diag(m), lhs_upper(m);
  lhs_lower_.resize(m);
  for (int i = 0; i < m; ++i) {
    rhs_lower_[i] = z * L.lower[i];
    rhs_diag_[i] = 1.0 + z * L.diag[i];
    rhs_upper_[i] = z * L.upper[i];
    lhs_lower_[i] = -z * L.lower[i];
    lhs_diag[i] = 1.0 - z * L.diag[i];
    lhs_upper[i] = -z * L.upper[i];
  }

  // Thomas factorization of the left-hand matrix (no pivoting; the matrix is
  // I + i c A with A definite, so the pivots stay away from zero).
  fac_upper_.resize(m);
  fac_inv_diag_.resize(m);
  Complex denom = lhs_diag[0];
  if (denom == Complex(0.0)) throw std::runtime_error("LinearPropagator: zero pivot");
  fac_inv_diag_[0] = 1.0 / denom;
  fac_upper_[0] = lhs_upper[0] * fac_inv_diag_[0];
  for (int i = 1; i < m; ++i) {
    denom = lhs_diag[i] - lhs_lower_[i] * fac_upper_[i - 1];
    if (denom == Complex(0.0)) throw std::runtime_error("LinearPropagator: zero pivot");
    fac_inv_diag_[i] = 1.0 / denom;
    fac_upper_[i] = lhs_upper[i] * fac_inv_diag_[i];
  }
}

void LinearPropagator::apply(Field& u) const {
  if (!u.grid.compatible(grid_))
    throw std::invalid_argument("LinearPropagator: grid mismatch");
  const int m = grid_.num_nodes();
  static thread_local std::vector<Complex> rhs;
  rhs.resize(m);
  rhs[0] = rhs_diag_[0] * u.values[0] + rhs_upper_[0] * u.values[1];
  for (int i = 1; i < m - 1; ++i)
    rhs[i] = rhs_lower_[i] * u.values[i - 1] + rhs_diag_[i] * u.values[i] +
             rhs_upper_[i] * u.values[i + 1];
  rhs[m - 1] = rhs_lower_[m - 1] * u.values[m - 2] + rhs_diag_[m - 1] * u.values[m - 1];

  // forward sweep
  u.values[0] = rhs[0] * fac_inv_diag_[0];
  for (int i = 1; i < m; ++i)
    u.values[i] = (rhs[i] - lhs_lower_[i] * u.values[i - 1]) * fac_inv_diag_[i];
  // back substitution
  for (int i = m - 2; i >= 0; --i)
    u.values[i] -= fac_upper_[i] * u.values[i + 1];
}

Field LinearPropagator::operator()(const Field& u) const {
  Field out = u;
  apply(out);
  return out;
}

Field linear_step(const Field& u, double tau) {
  return LinearPropagator(u.grid, tau)(u);
}

namespace {

// |u|^{4/3} = cbrt(|u|^4); avoids pow in the hot loop
inline double abs_pow_4_3(double mod2) { return std::cbrt(mod2 * mod2); }

void nonlinear_step_inplace(Field& u, double tau) {
  for (Complex& v : u.values) {
    const double mod2 = std::norm(v);
    if (mod2 == 0.0) continue;
    const double phase = tau * (mod2 - abs_pow_4_3(mod2));
    v *= Complex(std::cos(phase), std::sin(phase));
  }
}

// Energy from one pass; same quadrature as the functionals module but
// without intermediate allocations (called once per attempted step).
struct QuickFunctionals {
  double mass = 0.0, grad_sq = 0.0, l4_4 = 0.0, l10_3 = 0.0;
  double energy() const { return 0.5 * grad_sq - 0.25 * l4_4 + 0.3 * l10_3; }
};

QuickFunctionals quick_functionals(const Field& u, const std::vector<double>& w) {
  QuickFunctionals q;
  const int n = u.grid.n;
  const double inv2h = 1.0 / (2.0 * u.grid.h);
  for (int i = 0; i <= n; ++i) {
    const double mod2 = std::norm(u.values[i]);
    Complex du;
    if (i == 0)
      du = 0.0;
    else if (i == n)
      du = (3.0 * u.values[n] - 4.0 * u.values[n - 1] + u.values[n - 2]) * inv2h;
    else
      du = (u.values[i + 1] - u.values[i - 1]) * inv2h;
    q.mass += w[i] * mod2;
    q.grad_sq += w[i] * std::norm(du);
    q.l4_4 += w[i] * mod2 * mod2;
    q.l10_3 += w[i] * mod2 * abs_pow_4_3(mod2);
  }
  return q;
}

}  // namespace

Field nonlinear_step(const Field& u, double tau) {
  Field out = u;
  nonlinear_step_inplace(out, tau);
  return out;
}

Field strang_step(const Field& u, double tau) {
  const LinearPropagator half(u.grid, 0.5 * tau);
  Field v = half(u);
  nonlinear_step_inplace(v, tau);
  half.apply(v);
  return v;
}

std::pair<Outcome, TimeSeries> evolve(const Field& u0, const SolverConfig& cfg,
                                      const Recorder& recorder) {
  if (!(cfg.dt_min > 0.0) || cfg.dt0 < cfg.dt_min || !(cfg.t_end > 0.0) ||
      !(cfg.tol_drift > 0.0) || !(cfg.blowup_factor > 1.0) || cfg.record_stride < 1)
    throw std::invalid_argument("evolve: bad solver config");
  if (!u0.all_finite()) throw std::invalid_argument("evolve: non-finite initial data");

  const std::vector<double> w = quadrature_weights(u0.grid);
  const double grad_ref =
      cfg.grad_ref > 0.0 ? cfg.grad_ref : std::sqrt(grad_w_sq_exact());

  Field u = u0;
  double t = 0.0;
  double dt = cfg.dt0;

  const QuickFunctionals q0 = quick_functionals(u, w);
  const double e0 = q0.energy();
  const double grad0 = std::sqrt(q0.grad_sq);
  const double e_scale = std::max(std::abs(e0), 1e-12);
  const double m_threshold = threshold_exact();
  const double blowup_grad = cfg.blowup_factor * std::max(grad0, grad_ref);

  double e_prev = e0;
  double grad_prev = grad0;
  long accepted = 0;
  int calm_streak = 0;  // consecutive accepted steps well below tol_drift

  TimeSeries series;
  auto record = [&](double tt, const Field& uu, double cur_dt) {
    const FunctionalReport rep = make_report(uu, m_threshold);
    TimeSeries::Record rec;
    rec.t = tt;
    rec.label = to_string(rep.label);
    rec.scalars = {{"mass", rep.mass},
                   {"energy", rep.energy},
                   {"energy_c", rep.energy_c},
                   {"grad_l2", std::sqrt(rep.grad_sq)},
                   {"l4", std::pow(rep.l4_4, 0.25)},
                   {"l10_3", std::pow(rep.l10_3, 0.3)},
                   {"k_2m1", rep.k},
                   {"dt", cur_dt},
                   {"boundary_mag", uu.boundary_magnitude()}};
    series.records.push_back(std::move(rec));
    if (recorder) recorder(tt, uu, rep);
  };

  record(0.0, u, dt);

  LinearPropagator half(u.grid, 0.5 * dt);
  auto set_dt = [&](double new_dt) {
    dt = new_dt;
    half = LinearPropagator(u.grid, 0.5 * dt);
  };

  while (t < cfg.t_end) {
    // land exactly on t_end; the remainder step may be smaller than dt_min
    const double remainder = cfg.t_end - t;
    if (remainder <= 1e-14 * cfg.t_end) break;
    if (dt > remainder) set_dt(remainder);

    Field v = half(u);
    nonlinear_step_inplace(v, dt);
    half.apply(v);

    const QuickFunctionals q = quick_functionals(v, w);
    const double drift = std::abs(q.energy() - e_prev) / e_scale;
    if (drift > cfg.tol_drift) {
      if (dt * 0.5 >= cfg.dt_min) {
        set_dt(dt * 0.5);
        calm_streak = 0;
        continue;  // retry the step
      }
      // dt underflow: blow-up if the H^1 norm kept growing, else give up
      const double grad_now = std::sqrt(q.grad_sq);
      Outcome out;
      out.kind = grad_now > grad_prev ? Outcome::Kind::BLOW_UP
                                      : Outcome::Kind::STEP_UNDERFLOW;
      out.t = t;
      record(t, u, dt);
      return {out, series};
    }

    u = std::move(v);
    t += dt;
    ++accepted;
    e_prev = q.energy();
    const double grad_now = std::sqrt(q.grad_sq);

    if (grad_now >= blowup_grad) {
      Outcome out{Outcome::Kind::BLOW_UP, t};
      record(t, u, dt);
      return {out, series};
    }
    grad_prev = grad_now;

    // ease the step back up after a calm stretch
    calm_streak = drift < 0.25 * cfg.tol_drift ? calm_streak + 1 : 0;
    if (calm_streak >= 8 && dt < cfg.dt0) {
      set_dt(std::min(2.0 * dt, cfg.dt0));
      calm_streak = 0;
    }

    if (accepted % cfg.record_stride == 0) record(t, u, dt);
  }

  if (series.records.empty() || series.records.back().t < t) record(t, u, dt);
  return {Outcome{Outcome::Kind::COMPLETED, t}, series};
}

std::vector<double> scattering_monitor(
    const std::vector<std::pair<double, Field>>& history, double tau_back) {
  if (history.size() < 2)
    throw std::invalid_argument("scattering_monitor: need at least 2 snapshots");
  if (!(tau_back > 0.0))
    throw std::invalid_argument("scattering_monitor: tau_back must be positive");

  std::vector<Field> pulled;
  pulled.reserve(history.size());
  for (const auto& [tk, uk] : history) {
    Field v = uk;
    double remaining = tk;
    if (remaining > 0.0) {
      const long full = static_cast<long>(remaining / tau_back);
      if (full > 0) {
        const LinearPropagator back(v.grid, -tau_back);
        for (long s = 0; s < full; ++s) back.apply(v);
        remaining -= full * tau_back;
      }
      if (remaining > 1e-14) LinearPropagator(v.grid, -remaining).apply(v);
    }
    pulled.push_back(std::move(v));
  }

  std::vector<double> d;
  d.reserve(pulled.size() - 1);
  for (size_t k = 0; k + 1 < pulled.size(); ++k) {
    Field diff = pulled[k + 1];
    for (int i = 0; i < diff.size(); ++i) diff.values[i] -= pulled[k].values[i];
    const double l2 = norm_l2(diff);
    const double h1 = norm_h1dot(diff);
    d.push_back(std::sqrt(l2 * l2 + h1 * h1));
  }
  return d;
}

}  // namespace cnls
