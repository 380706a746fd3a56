// svc: command-line driver for SVC(rho, n) scattering sweeps and analyses.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "svc/analysis.hpp"
#include "svc/error.hpp"
#include "svc/oracle.hpp"
#include "svc/spp.hpp"
#include "svc/sweep.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitIo = 4;

constexpr const char* kConfigHelp = R"(Configuration file: flat `key = value` lines, '#' starts a comment.
  rho            removal base, > 1                       (default 2)
  n              exponent power, removal fraction rho^-(g^n)  (default 1)
  G              stage, >= 0                             (default 0)
  V              barrier height (V_0 for R_scaled/scaling) (default 10)
  L              total length, > 0                       (default 10)
  k              wave number when k is not a sweep axis  (default 1)
  exponent_poly  a0,a1,... : exponent a0 + a1 g + ... replaces g^n
  quantity       T | R | R_scaled                        (default T)
  oracle_check   true | false: compare each cell with the brute-force product (G <= 14)
  seed           integer used by randomized validation
  axis           k:min:max:count | rho:min:max:count | n:min:max:count | G:g1,g2,...
                 repeatable, at most two; the first axis indexes rows.
Units: hbar = 2m = 1, E = k^2.

Exit codes: 0 success, 2 invalid configuration, 3 oracle mismatch, 4 I/O error.)";

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<std::string> axes;
  std::string output;
  bool reproducible = false;
};

void add_common(CLI::App* cmd, Common& common, bool with_axes) {
  cmd->add_option("config", common.config_path, "configuration file (optional; defaults apply)");
  cmd->add_option("--set", common.overrides, "override a config key, e.g. --set G=5 (repeatable)")
      ->type_name("KEY=VALUE");
  if (with_axes) {
    cmd->add_option("--axis", common.axes, "add a sweep axis, e.g. --axis k:2:10:400 (repeatable)")
        ->type_name("AXIS");
  }
  cmd->add_option("-o,--output", common.output, "write to this file instead of stdout");
  cmd->add_flag("--reproducible", common.reproducible, "omit the timestamp so identical runs are byte-identical");
}

svc::RunConfig load(const Common& common) {
  svc::RunConfig config = common.config_path.empty() ? svc::RunConfig{} : svc::load_config(common.config_path);
  for (const auto& item : common.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw svc::InvalidArgument("--set expects KEY=VALUE, got '" + item + "'");
    try {
      config.set(item.substr(0, eq), item.substr(eq + 1));
    } catch (const svc::InvalidArgument& e) {
      throw svc::InvalidArgument(std::string("--set ") + item + ": " + e.what());
    }
  }
  for (const auto& axis : common.axes) config.axes.push_back(svc::Axis::parse(axis));
  return config;
}

void emit(const Common& common, const std::string& text) {
  if (common.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(common.output, std::ios::binary | std::ios::trunc);
  if (!out) throw svc::IoError("cannot open " + common.output + " for writing");
  out << text;
  out.close();
  if (!out) throw svc::IoError("failed writing " + common.output);
}

std::string spec_header(const svc::PotentialSpec& spec) {
  std::ostringstream os;
  os << "# rho: " << svc::format_number(spec.rho) << "\n# n: " << svc::format_number(spec.n)
     << "\n# G: " << spec.stage << "\n# V: " << svc::format_number(spec.V)
     << "\n# L: " << svc::format_number(spec.L) << "\n";
  return os.str();
}

int run_sweep_command(const Common& common) {
  const auto config = load(common);
  const auto grid = svc::run_sweep(config);
  emit(common, svc::format_grid(grid, {.reproducible = common.reproducible}));
  return 0;
}

struct RangeOptions {
  double k_min = 0.0;
  double k_max = 0.0;
  int points = 0;
};

int run_resonances_command(const Common& common, const RangeOptions& range, double threshold) {
  const auto config = load(common);
  config.spec.validate();
  const auto list = svc::find_resonances(config.spec, range.k_min, range.k_max, threshold, range.points);
  std::string out = "# svcscatter resonances\n" + spec_header(config.spec);
  out += "# threshold: " + svc::format_number(threshold) + "\n";
  out += "# grid: " + svc::format_number(range.k_min) + " " + svc::format_number(range.k_max) + " " +
         std::to_string(range.points) + "\n";
  if (list.trivially_transparent) out += "# trivially transparent (V = 0)\n";
  out += "k_center,width,T_peak\n";
  for (const auto& r : list.resonances) {
    out += svc::format_number(r.k_center) + "," + svc::format_number(r.width) + "," +
           svc::format_number(r.T_peak) + "\n";
  }
  emit(common, out);
  return 0;
}

int run_scaling_command(const Common& common, RangeOptions range) {
  const auto config = load(common);
  config.spec.validate();
  const double v_g = svc::renormalized_height(config.spec);
  if (range.k_min <= 0.0) range.k_min = 10.0 * std::sqrt(std::max(v_g, 0.0));
  const auto fit = svc::fit_scaling(config.spec, range.k_min, range.k_max, range.points);
  std::string out = "# svcscatter scaling fit\n" + spec_header(config.spec);
  out += "V_G: " + svc::format_number(v_g) + "\n";
  out += "k_min: " + svc::format_number(fit.k_min) + "\n";
  out += "k_max: " + svc::format_number(fit.k_max) + "\n";
  out += "maxima: " + std::to_string(fit.maxima) + "\n";
  out += "slope: " + svc::format_number(fit.slope) + "\n";
  out += "intercept: " + svc::format_number(fit.intercept) + "\n";
  out += "r_squared: " + svc::format_number(fit.r_squared) + "\n";
  emit(common, out);
  return 0;
}

int run_saturation_command(const Common& common, const RangeOptions& range, double n_a, double n_b) {
  const auto config = load(common);
  config.spec.validate();
  const auto grid = svc::linear_grid(range.k_min, range.k_max, range.points);
  const double metric = svc::saturation_metric(config.spec, n_a, n_b, grid);
  std::string out = "# svcscatter saturation\n" + spec_header(config.spec);
  out += "n_a: " + svc::format_number(n_a) + "\n";
  out += "n_b: " + svc::format_number(n_b) + "\n";
  out += "sup_abs_dT: " + svc::format_number(metric) + "\n";
  emit(common, out);
  return 0;
}

struct VerifyOptions {
  int specs = 50;
  int kpoints = 200;
  int max_stage = 6;
  double tolerance = 1e-9;
  std::uint64_t seed = 1;
};

int run_verify_command(const Common& common, const VerifyOptions& opts) {
  if (opts.specs < 1 || opts.kpoints < 1) throw svc::InvalidArgument("--specs and --kpoints must be >= 1");
  if (opts.max_stage < 0 || opts.max_stage > svc::RunConfig::kMaxOracleStage) {
    throw svc::InvalidArgument("--max-stage must lie in [0, " + std::to_string(svc::RunConfig::kMaxOracleStage) + "]");
  }
  std::mt19937_64 rng(opts.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  double worst = 0.0;
  long evaluated = 0;
  std::string failure;
  for (int s = 0; s < opts.specs && failure.empty(); ++s) {
    svc::PotentialSpec spec;
    spec.rho = uniform(1.2, 5.0);
    spec.n = uniform(-0.75, 2.0);
    spec.stage = std::uniform_int_distribution<int>(0, opts.max_stage)(rng);
    spec.V = uniform(1.0, 50.0);
    spec.L = uniform(1.0, 20.0);
    const svc::SvcEngine engine(spec);
    const auto chain = svc::chain_from_layout(svc::build_layout(spec));
    const double k_top = 3.0 * std::sqrt(spec.V);
    for (int i = 0; i < opts.kpoints; ++i) {
      const double k = k_top * (i + 0.5) / opts.kpoints;
      const double closed = engine.at_wave_number(k).T;
      const double brute = svc::brute_force_T(chain, spec.V, k * k).T;
      const double diff = std::abs(closed - brute);
      worst = std::max(worst, diff);
      ++evaluated;
      if (!(diff < opts.tolerance)) {
        std::ostringstream os;
        os << "oracle mismatch at (rho=" << svc::format_number(spec.rho) << ", n=" << svc::format_number(spec.n)
           << ", G=" << spec.stage << ", V=" << svc::format_number(spec.V) << ", L=" << svc::format_number(spec.L)
           << ", k=" << svc::format_number(k) << "): closed form T=" << svc::format_number(closed)
           << ", brute force T=" << svc::format_number(brute);
        failure = os.str();
        break;
      }
    }
  }
  std::string out = "# svcscatter oracle verification\n";
  out += "specs: " + std::to_string(opts.specs) + "\n";
  out += "points: " + std::to_string(evaluated) + "\n";
  out += "max_abs_diff: " + svc::format_number(worst) + "\n";
  out += "tolerance: " + svc::format_number(opts.tolerance) + "\n";
  out += std::string("result: ") + (failure.empty() ? "pass" : "fail") + "\n";
  emit(common, out);
  if (!failure.empty()) throw svc::OracleMismatch(failure);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering through Smith-Volterra-Cantor potentials of power n.", "svc"};
  app.footer(kConfigHelp);
  app.set_version_flag("--version", std::string(SVC_VERSION));
  app.require_subcommand(1);

  Common common;
  RangeOptions resonance_range;
  RangeOptions scaling_range;
  RangeOptions saturation_range;
  double threshold = 0.999;
  double n_a = 1.0;
  double n_b = 3.0;
  VerifyOptions verify;

  auto* sweep = app.add_subcommand("sweep", "evaluate T, R or R_scaled over one or two axes and write a CSV grid");
  add_common(sweep, common, true);

  auto* resonances = app.add_subcommand("resonances", "list transmission peaks with T >= threshold and their widths");
  add_common(resonances, common, false);
  resonances->add_option("--k-min", resonance_range.k_min, "lower end of the k window")->default_val(2.0);
  resonances->add_option("--k-max", resonance_range.k_max, "upper end of the k window")->default_val(5.0);
  resonances->add_option("--grid", resonance_range.points, "uniform scan points before refinement")->default_val(20000);
  resonances->add_option("--threshold", threshold, "minimum peak transmission, in (0, 1)")->default_val(0.999);

  auto* scaling = app.add_subcommand("scaling", "fit the log-log slope of R_G/V_0^2 at the renormalized height");
  add_common(scaling, common, false);
  scaling->add_option("--k-min", scaling_range.k_min, "lower end of the fit window (default 10 sqrt(V_G))");
  scaling->add_option("--k-max", scaling_range.k_max, "upper end of the fit window")->default_val(1000.0);
  scaling->add_option("--points", scaling_range.points, "log-uniform grid points, >= 50")->default_val(20000);

  auto* saturation = app.add_subcommand("saturation", "sup over a k-grid of |T(n_a) - T(n_b)|");
  add_common(saturation, common, false);
  saturation->add_option("--na", n_a, "first power n")->default_val(1.0);
  saturation->add_option("--nb", n_b, "second power n")->default_val(3.0);
  saturation->add_option("--k-min", saturation_range.k_min, "lower end of the k grid")->default_val(2.0);
  saturation->add_option("--k-max", saturation_range.k_max, "upper end of the k grid")->default_val(10.0);
  saturation->add_option("--points", saturation_range.points, "uniform grid points")->default_val(2000);

  auto* verify_cmd = app.add_subcommand("verify", "compare the closed form with the brute-force product on random potentials");
  add_common(verify_cmd, common, false);
  verify_cmd->add_option("--specs", verify.specs, "number of random potentials")->default_val(50);
  verify_cmd->add_option("--kpoints", verify.kpoints, "k-points per potential, spread over (0, 3 sqrt(V))")->default_val(200);
  verify_cmd->add_option("--max-stage", verify.max_stage, "largest stage drawn")->default_val(6);
  verify_cmd->add_option("--tol", verify.tolerance, "allowed |T_closed - T_brute|")->default_val(1e-9);
  verify_cmd->add_option("--seed", verify.seed, "random seed")->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*sweep) return run_sweep_command(common);
    if (*resonances) return run_resonances_command(common, resonance_range, threshold);
    if (*scaling) return run_scaling_command(common, scaling_range);
    if (*saturation) return run_saturation_command(common, saturation_range, n_a, n_b);
    if (*verify_cmd) return run_verify_command(common, verify);
  } catch (const svc::InvalidArgument& e) {
    std::cerr << "svc: invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const svc::OracleMismatch& e) {
    std::cerr << "svc: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const svc::IoError& e) {
    std::cerr << "svc: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const svc::DegenerateFit& e) {
    std::cerr << "svc: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "svc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
