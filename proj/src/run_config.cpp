#include "cnls/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cnls/ground_state.hpp"

namespace cnls {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::runtime_error("config: bad number for " + key + ": '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::runtime_error("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> to_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, key));
  }
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "grid.r_max=" << format_g17(r_max) << "\ngrid.n=" << n
     << "\nsolver.dt0=" << format_g17(solver.dt0)
     << "\nsolver.dt_min=" << format_g17(solver.dt_min)
     << "\nsolver.t_end=" << format_g17(solver.t_end)
     << "\nsolver.tol_drift=" << format_g17(solver.tol_drift)
     << "\nsolver.blowup_factor=" << format_g17(solver.blowup_factor)
     << "\nsolver.record_stride=" << solver.record_stride << "\ninitial.type=";
  switch (initial.kind) {
    case InitialSpec::Kind::ZERO: os << "zero"; break;
    case InitialSpec::Kind::GAUSSIAN:
      os << "gaussian a=" << format_g17(initial.a) << " width=" << format_g17(initial.width);
      break;
    case InitialSpec::Kind::RESCALED_W:
      os << "rescaled_w a=" << format_g17(initial.a) << " lam=" << format_g17(initial.lam)
         << " r_cut=" << format_g17(initial.r_cut);
      break;
    case InitialSpec::Kind::FILE: os << "file path=" << initial.path; break;
  }
  os << "\ndiag.virial_r=";
  for (size_t i = 0; i < diag.virial_r.size(); ++i)
    os << (i ? "," : "") << format_g17(diag.virial_r[i]);
  os << "\ndiag.morawetz_r0=" << format_g17(diag.morawetz_r0)
     << "\ndiag.strichartz=" << (diag.strichartz ? "true" : "false") << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  const std::string s = canonical();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hashpos = line.find('#');
    if (hashpos != std::string::npos) line = line.substr(0, hashpos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "grid.r_max") cfg.r_max = to_double(val, full);
    else if (full == "grid.n") cfg.n = static_cast<int>(to_double(val, full));
    else if (full == "solver.dt0") cfg.solver.dt0 = to_double(val, full);
    else if (full == "solver.dt_min") cfg.solver.dt_min = to_double(val, full);
    else if (full == "solver.t_end") cfg.solver.t_end = to_double(val, full);
    else if (full == "solver.tol_drift") cfg.solver.tol_drift = to_double(val, full);
    else if (full == "solver.blowup_factor") cfg.solver.blowup_factor = to_double(val, full);
    else if (full == "solver.record_stride")
      cfg.solver.record_stride = static_cast<int>(to_double(val, full));
    else if (full == "initial.type") {
      if (val == "zero") cfg.initial.kind = InitialSpec::Kind::ZERO;
      else if (val == "gaussian") cfg.initial.kind = InitialSpec::Kind::GAUSSIAN;
      else if (val == "rescaled_w") cfg.initial.kind = InitialSpec::Kind::RESCALED_W;
      else if (val == "file") cfg.initial.kind = InitialSpec::Kind::FILE;
      else throw std::runtime_error("config: unknown initial.type '" + val + "'");
    } else if (full == "initial.a") cfg.initial.a = to_double(val, full);
    else if (full == "initial.width") cfg.initial.width = to_double(val, full);
    else if (full == "initial.lam") cfg.initial.lam = to_double(val, full);
    else if (full == "initial.r_cut") cfg.initial.r_cut = to_double(val, full);
    else if (full == "initial.path") cfg.initial.path = val;
    else if (full == "diagnostics.virial_r") cfg.diag.virial_r = to_list(val, full);
    else if (full == "diagnostics.morawetz_r0") cfg.diag.morawetz_r0 = to_double(val, full);
    else if (full == "diagnostics.strichartz") cfg.diag.strichartz = to_bool(val, full);
    else if (full == "output.dir") cfg.out_dir = val;
    else throw std::runtime_error("config: unknown key '" + full + "'");
  }
  return cfg;
}

RunConfig preset_scattering() {
  RunConfig cfg;
  cfg.r_max = 30.0;
  cfg.n = 3000;
  cfg.solver.t_end = 20.0;
  cfg.initial.kind = InitialSpec::Kind::GAUSSIAN;
  cfg.initial.a = 0.5;
  cfg.initial.width = 1.0;
  cfg.diag.virial_r = {1.0, 2.0, 4.0};
  cfg.diag.morawetz_r0 = 8.0;
  cfg.diag.strichartz = true;
  cfg.out_dir = "out/scattering";
  return cfg;
}

RunConfig preset_blowup() {
  RunConfig cfg;
  cfg.r_max = 20.0;
  cfg.n = 16384;
  cfg.solver.t_end = 5.0;
  cfg.initial.kind = InitialSpec::Kind::RESCALED_W;
  cfg.initial.a = 1.2;
  cfg.initial.lam = 32.0;
  cfg.initial.r_cut = 6.0;
  cfg.diag.virial_r = {1.0, 2.0, 4.0};
  cfg.out_dir = "out/blowup";
  return cfg;
}

Field build_initial(const RunConfig& cfg) {
  const RadialGrid grid = cfg.grid();
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::ZERO:
      return Field(grid);
    case InitialSpec::Kind::GAUSSIAN: {
      Field u(grid);
      const double w2 = cfg.initial.width * cfg.initial.width;
      for (int i = 0; i < u.size(); ++i) {
        const double r = grid.node(i);
        u.values[i] = cfg.initial.a * std::exp(-r * r / (2.0 * w2));
      }
      return u;
    }
    case InitialSpec::Kind::RESCALED_W:
      return preset_rescaled_w(grid, cfg.initial.a, cfg.initial.lam, cfg.initial.r_cut);
    case InitialSpec::Kind::FILE: {
      Field u = read_snapshot(cfg.initial.path);
      if (!u.grid.compatible(grid))
        throw std::runtime_error("initial file grid does not match configured grid");
      return u;
    }
  }
  throw std::logic_error("unreachable");
}

std::string timeseries_csv(const TimeSeries& ts, const RunConfig& cfg) {
  static const char* cols[] = {"mass",  "energy", "energy_c", "grad_l2",     "l4",
                               "l10_3", "k_2m1",  "dt",       "boundary_mag"};
  std::ostringstream os;
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(cfg.hash()));
  os << "# config_hash=" << hex << "\n# grid r_max=" << format_g17(cfg.r_max)
     << " n=" << cfg.n << "\n";
  os << "t,mass,energy,energy_c,grad_l2,l4,l10_3,k_2m1,label,dt,boundary_mag\n";
  for (const auto& rec : ts.records) {
    os << format_g17(rec.t);
    for (int c = 0; c < 7; ++c) os << "," << format_g17(rec.scalars.at(cols[c]));
    os << "," << rec.label;
    os << "," << format_g17(rec.scalars.at("dt"))
       << "," << format_g17(rec.scalars.at("boundary_mag")) << "\n";
  }
  return os.str();
}

std::string resolve_out_dir(const std::string& out_dir) {
  const char* root = std::getenv("CNLS_LAB_OUT");
  if (root && *root) return std::string(root) + "/" + out_dir;
  return out_dir;
}

}  // namespace cnls
