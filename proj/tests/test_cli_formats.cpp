#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cnls/run_config.hpp"
#include "doctest.h"

using namespace cnls;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

const char* kSample =
    "# comment line\n"
    "[grid]\n"
    "r_max = 24\n"
    "n = 1200\n"
    "\n"
    "[solver]\n"
    "dt0 = 5e-4\n"
    "dt_min = 1e-9\n"
    "t_end = 2.5\n"
    "tol_drift = 1e-7\n"
    "blowup_factor = 15\n"
    "record_stride = 25\n"
    "\n"
    "[initial]\n"
    "type = rescaled_w\n"
    "a = 1.2\n"
    "lam = 32\n"
    "r_cut = 6\n"
    "\n"
    "[diagnostics]\n"
    "virial_r = 1, 2, 4\n"
    "morawetz_r0 = 4\n"
    "strichartz = true\n"
    "\n"
    "[output]\n"
    "dir = out/sample\n";

}  // namespace

TEST_CASE("parse_config_file reads every section") {
  auto p = write_temp("cnls_cfg_ok.cfg", kSample);
  RunConfig cfg = parse_config_file(p.string());
  CHECK(cfg.r_max == 24.0);
  CHECK(cfg.n == 1200);
  CHECK(cfg.solver.dt0 == 5e-4);
  CHECK(cfg.solver.dt_min == 1e-9);
  CHECK(cfg.solver.t_end == 2.5);
  CHECK(cfg.solver.tol_drift == 1e-7);
  CHECK(cfg.solver.blowup_factor == 15.0);
  CHECK(cfg.solver.record_stride == 25);
  CHECK(cfg.initial.kind == InitialSpec::Kind::RESCALED_W);
  CHECK(cfg.initial.a == 1.2);
  CHECK(cfg.initial.lam == 32.0);
  CHECK(cfg.initial.r_cut == 6.0);
  REQUIRE(cfg.diag.virial_r.size() == 3);
  CHECK(cfg.diag.virial_r[0] == 1.0);
  CHECK(cfg.diag.virial_r[2] == 4.0);
  CHECK(cfg.diag.morawetz_r0 == 4.0);
  CHECK(cfg.diag.strichartz);
  CHECK(cfg.out_dir == "out/sample");
}

TEST_CASE("parse_config_file rejects malformed input") {
  auto bad_key = write_temp("cnls_cfg_badkey.cfg", "[grid]\nradius = 3\n");
  CHECK_THROWS_AS(parse_config_file(bad_key.string()), std::runtime_error);

  auto bad_num = write_temp("cnls_cfg_badnum.cfg", "[grid]\nr_max = wide\n");
  CHECK_THROWS_AS(parse_config_file(bad_num.string()), std::runtime_error);

  auto bad_line = write_temp("cnls_cfg_badline.cfg", "[grid]\nno equals sign\n");
  CHECK_THROWS_AS(parse_config_file(bad_line.string()), std::runtime_error);

  auto bad_type = write_temp("cnls_cfg_badtype.cfg", "[initial]\ntype = vortex\n");
  CHECK_THROWS_AS(parse_config_file(bad_type.string()), std::runtime_error);

  CHECK_THROWS_AS(parse_config_file("/nonexistent/cnls.cfg"), std::runtime_error);
}

TEST_CASE("canonical form and hash are stable") {
  auto p = write_temp("cnls_cfg_hash.cfg", kSample);
  RunConfig a = parse_config_file(p.string());
  RunConfig b = parse_config_file(p.string());
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());

  b.solver.t_end = 3.0;
  CHECK(a.canonical() != b.canonical());
  CHECK(a.hash() != b.hash());
}

TEST_CASE("format_g17 round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-19, -7.25, 26.318945069571931, 0.0}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("presets") {
  RunConfig sc = preset_scattering();
  CHECK(sc.r_max == 30.0);
  CHECK(sc.n == 3000);
  CHECK(sc.solver.t_end == 20.0);
  CHECK(sc.initial.kind == InitialSpec::Kind::GAUSSIAN);
  CHECK(sc.initial.a == 0.5);
  CHECK(!sc.diag.virial_r.empty());
  CHECK(sc.diag.morawetz_r0 > 1.0);
  CHECK(sc.diag.strichartz);

  RunConfig bl = preset_blowup();
  CHECK(bl.r_max == 20.0);
  CHECK(bl.n == 16384);
  CHECK(bl.solver.t_end == 5.0);
  CHECK(bl.initial.kind == InitialSpec::Kind::RESCALED_W);
  CHECK(bl.initial.a == 1.2);
  CHECK(bl.initial.lam == 32.0);
  CHECK(bl.initial.r_cut == 6.0);

  CHECK(sc.hash() != bl.hash());
}

TEST_CASE("build_initial covers every kind") {
  RunConfig cfg;
  cfg.r_max = 20.0;
  cfg.n = 400;

  cfg.initial.kind = InitialSpec::Kind::ZERO;
  Field z = build_initial(cfg);
  for (const Complex& v : z.values) CHECK(v == Complex(0.0));

  cfg.initial.kind = InitialSpec::Kind::GAUSSIAN;
  cfg.initial.a = 0.5;
  cfg.initial.width = 2.0;
  Field gsn = build_initial(cfg);
  CHECK(gsn.values[0] == Complex(0.5));
  const double r = gsn.grid.node(100);
  CHECK(gsn.values[100].real() ==
        doctest::Approx(0.5 * std::exp(-r * r / 8.0)).epsilon(1e-14));

  cfg.initial.kind = InitialSpec::Kind::RESCALED_W;
  cfg.initial.a = 1.0;
  cfg.initial.lam = 4.0;
  cfg.initial.r_cut = 6.0;
  Field rw = build_initial(cfg);
  CHECK(rw.values[0].real() == doctest::Approx(4.0));  // a lam W(0)

  // FILE round trip, and grid mismatch rejection
  const auto snap = std::filesystem::temp_directory_path() / "cnls_cfg_snap.dat";
  write_snapshot(snap.string(), gsn);
  cfg.initial.kind = InitialSpec::Kind::FILE;
  cfg.initial.path = snap.string();
  Field loaded = build_initial(cfg);
  for (int i = 0; i < gsn.size(); ++i) CHECK(loaded.values[i] == gsn.values[i]);

  cfg.n = 500;
  CHECK_THROWS_AS(build_initial(cfg), std::runtime_error);
}

TEST_CASE("resolve_out_dir honors the environment override") {
  unsetenv("CNLS_LAB_OUT");
  CHECK(resolve_out_dir("out/run1") == "out/run1");
  setenv("CNLS_LAB_OUT", "/tmp/cnls_root", 1);
  const std::string resolved = resolve_out_dir("out/run1");
  unsetenv("CNLS_LAB_OUT");
  CHECK(resolved == "/tmp/cnls_root/out/run1");
}

TEST_CASE("timeseries_csv is deterministic with a fixed layout") {
  RunConfig cfg = preset_scattering();
  TimeSeries ts;
  for (int k = 0; k < 3; ++k) {
    TimeSeries::Record rec;
    rec.t = 0.1 * k;
    rec.label = "K_PLUS";
    rec.scalars = {{"mass", 1.0 / 3.0 + k},  {"energy", -0.25},
                   {"energy_c", 0.5},        {"grad_l2", 1.5},
                   {"l4", 0.75},             {"l10_3", 0.6},
                   {"k_2m1", 2.0},           {"dt", 1e-3},
                   {"boundary_mag", 1e-16}};
    ts.records.push_back(rec);
  }

  const std::string csv = timeseries_csv(ts, cfg);
  const std::string csv2 = timeseries_csv(ts, cfg);
  CHECK(csv == csv2);  // bit-identical on identical input

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.find("# config_hash=") == 0);
  std::getline(in, line);
  CHECK(line.find("# grid") == 0);
  CHECK(line.find("r_max=30") != std::string::npos);
  CHECK(line.find("n=3000") != std::string::npos);
  std::getline(in, line);
  CHECK(line == "t,mass,energy,energy_c,grad_l2,l4,l10_3,k_2m1,label,dt,boundary_mag");
  std::getline(in, line);
  // first data row: t = 0, mass = 1/3 at 17 significant digits
  CHECK(line.find("0," + format_g17(1.0 / 3.0) + ",") == 0);
  CHECK(line.find(",K_PLUS,") != std::string::npos);
  int rows = 1;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);

  // the hash line tracks the config
  RunConfig other = preset_blowup();
  CHECK(timeseries_csv(ts, other) != csv);
}
