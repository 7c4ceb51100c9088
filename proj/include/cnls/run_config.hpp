#ifndef CNLS_RUN_CONFIG_HPP
#define CNLS_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cnls/evolution.hpp"
#include "cnls/radial_field.hpp"

// Run configuration for the command-line front end. Config files are
// line-oriented "key = value" with [section] headers, e.g.
//
//   [grid]
//   r_max = 30
//   n = 3000
//   [solver]
//   dt0 = 1e-3
//   t_end = 20
//   [initial]
//   type = gaussian
//   a = 0.5
//   [diagnostics]
//   virial_r = 1,2,4
//   morawetz_r0 = 8
//   strichartz = true
//   [output]
//   dir = out/run1

namespace cnls {

struct InitialSpec {
  enum class Kind { ZERO, GAUSSIAN, RESCALED_W, FILE };
  Kind kind = Kind::GAUSSIAN;
  double a = 0.5;
  double width = 1.0;  // gaussian: a * exp(-r^2 / (2 width^2))
  double lam = 1.0;
  double r_cut = 6.0;
  std::string path;
};

struct DiagnosticsConfig {
  std::vector<double> virial_r;   // localized virial radii
  double morawetz_r0 = 0.0;       // 0 disables the Morawetz ladder
  bool strichartz = false;
};

struct RunConfig {
  double r_max = 30.0;
  int n = 3000;
  SolverConfig solver;
  InitialSpec initial;
  DiagnosticsConfig diag;
  std::string out_dir = "out";

  RadialGrid grid() const { return make_grid(r_max, n); }
  // canonical key=value dump; identical configs hash identically
  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a of canonical()
};

RunConfig parse_config_file(const std::string& path);
RunConfig preset_scattering();
RunConfig preset_blowup();

Field build_initial(const RunConfig& cfg);

// Output root: cfg.out_dir, or $CNLS_LAB_OUT/<out_dir> when the env var is set.
std::string resolve_out_dir(const std::string& out_dir);

std::string format_g17(double v);

// Deterministic CSV for a recorded run: '#' metadata lines (config hash,
// grid), fixed column order
//   t,mass,energy,energy_c,grad_l2,l4,l10_3,k_2m1,label,dt,boundary_mag,
// all floats at 17 significant digits.
std::string timeseries_csv(const TimeSeries& ts, const RunConfig& cfg);

}  // namespace cnls

#endif
