#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "roughreflect/config.hpp"
#include "roughreflect/csv.hpp"
#include "roughreflect/errors.hpp"
#include "roughreflect/fbm.hpp"
#include "roughreflect/fraccalc.hpp"
#include "roughreflect/skorokhod.hpp"
#include "roughreflect/tensor.hpp"
#include "roughreflect/verify.hpp"

/// rough-reflect: solve reflected rough delay equations, sample fBm drivers,
/// reflect paths and run the verification suites.
///
/// Exit codes: 0 success, 1 invariant violation, 2 configuration or usage
/// error.
namespace {

using namespace roughreflect;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfig = 2;

int cmd_solve(const std::string& config, const std::string& out, const std::string& report) {
  RunConfig cfg = load_config(config);
  if (!out.empty()) cfg.output.solution = out;
  if (!report.empty()) cfg.output.report = report;
  return run_simulate(cfg, std::cerr);
}

int cmd_verify(const std::string& suite, bool quick, const std::string& out) {
  const auto reports = verify::run_suites(suite, quick ? verify::Scale::quick : verify::Scale::full);
  bool pass = true;
  for (const auto& r : reports) {
    std::cerr << verify::summary_line(r) << "\n";
    for (const auto& c : r.checks) {
      if (!c.pass) std::cerr << "  FAIL " << c.name << ": " << c.value << " vs " << c.tol << "  [" << c.witness << "]\n";
    }
    pass = pass && r.pass();
  }
  const std::string json = verify::to_json(reports);
  if (out.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream os(out);
    if (!os) throw ConfigError("cannot write " + out);
    os << json << "\n";
  }
  return pass ? kOk : kViolation;
}

struct FbmArgs {
  double hurst = 0.45;
  std::size_t dims = 1;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  double delay = 1.0;
  double horizon = 1.0;
  std::size_t steps = 128;
  std::size_t refinement = 8;
  std::string out, tensor;
};

int cmd_fbm(const FbmArgs& a) {
  FbmSpec spec;
  spec.hurst = a.hurst;
  spec.dims = a.dims;
  spec.seed = a.seed;
  spec.refinement = a.refinement;
  try {
    spec.grid = Grid::delay_grid(a.delay, a.steps, a.horizon);
    spec.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const FbmSample smp = sample_fbm(spec, a.replication);
  for (const auto& w : smp.warnings) std::cerr << "warning: " << w << "\n";
  write_path_file(a.out, smp.path, "w");
  if (!a.tensor.empty()) write_field_file(a.tensor, stratonovich_tensor(smp, a.delay));
  return kOk;
}

int cmd_skorokhod(const std::string& in, const std::string& out) {
  const GridPath xi = read_path_file(in);
  const auto dec = solve_skorokhod(xi);
  std::ofstream os(out);
  if (!os) throw ConfigError("cannot write " + out);
  write_paths(os, {&dec.x, &dec.z}, {"x", "z"});
  const auto vr = verify_decomposition(dec);
  if (!vr.pass) std::cerr << "decomposition check failed\n";
  return vr.pass ? kOk : kViolation;
}

MatrixMap named_map(const std::string& name) {
  if (name == "id") return MatrixMap::scalar([](double u) { return u; }, [](double) { return 1.0; });
  if (name == "sin") return MatrixMap::scalar([](double u) { return std::sin(u); }, [](double u) { return std::cos(u); });
  if (name == "cos") {
    return MatrixMap::scalar([](double u) { return std::cos(u); }, [](double u) { return -std::sin(u); });
  }
  if (name == "bounded") {
    return MatrixMap::scalar([](double u) { return 1.0 / std::sqrt(1.0 + u * u); },
                             [](double u) { return -u / std::pow(1.0 + u * u, 1.5); });
  }
  throw ConfigError("unknown map '" + name + "' (id, sin, cos, bounded)");
}

struct IntegrateArgs {
  std::string x, y, tensor, map = "id", scheme = "fractional";
  double beta = 0.4, gamma = 1.0, alpha = 0.0;
  double a = NAN, b = NAN;
};

int cmd_integrate(const IntegrateArgs& a) {
  const GridPath x = read_path_file(a.x);
  const GridPath y = read_path_file(a.y, x.grid().step());
  if (x.dim() != 1 || y.dim() != 1) throw ConfigError("integrate expects one-dimensional x and y");
  const TwoParamField xy =
      a.tensor.empty() ? smooth_tensor(x, y) : read_field_file(a.tensor, 1, 1, x.grid().step());
  const double lo = std::isnan(a.a) ? std::max(x.grid().t0(), y.grid().t0()) : a.a;
  const double hi = std::isnan(a.b) ? std::min(x.grid().t1(), y.grid().t1()) : a.b;
  const MatrixMap f = named_map(a.map);
  double v = 0.0;
  if (a.scheme == "fractional") {
    FracParams p = a.alpha == 0.0 ? FracParams::with_default_alpha(a.beta, a.gamma) : FracParams{a.alpha, a.beta, a.gamma};
    try {
      p.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    v = rough_integral(f, x.restrict(lo, hi), y.restrict(lo, hi), xy, p, lo, hi)[0];
  } else if (a.scheme == "interpolated") {
    const GridPath I = interpolated_rough_integral_cumulative(f, x.restrict(lo, hi), y.restrict(lo, hi), xy, lo, hi);
    v = I(I.size() - 1, 0);
  } else {
    throw ConfigError("scheme must be fractional or interpolated");
  }
  std::cout << format_double(v) << "\n";
  return kOk;
}

int cmd_calibrate(std::size_t threads) {
  const auto cal = verify::calibrate_bound(kCalibratedBoundConstant, threads);
  std::cout << "case,lhs,rhs,minimal_K,pass\n";
  for (std::size_t q = 0; q < cal.reports.size(); ++q) {
    const auto& r = cal.reports[q];
    std::cout << q << "," << format_double(r.lhs) << "," << format_double(r.rhs) << "," << format_double(r.minimal_K)
              << "," << (r.pass ? 1 : 0) << "\n";
  }
  std::cerr << "largest minimal K " << format_double(cal.k_star) << " (case " << cal.argmax << "), configured K "
            << kCalibratedBoundConstant << ", " << cal.failures << " violation(s)\n";
  return cal.failures == 0 ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflected rough delay equations: solver, drivers and verification suites"};
  app.require_subcommand(1);

  std::string config, out, report;
  auto* solve = app.add_subcommand("solve", "Solve the equation described by a JSON config");
  solve->add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "solution CSV (overrides output.solution)");
  solve->add_option("--report", report, "diagnostics JSON (overrides output.report)");

  std::string suite = "all", vout;
  bool quick = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run property and oracle suites");
  verify_cmd->add_option("--suite", suite, "skorokhod | fraccalc | tensor | fbm | solver | bound | degenerate | fault | all");
  verify_cmd->add_flag("--quick", quick, "reduced sample sizes");
  verify_cmd->add_option("--out", vout, "JSON report file (default: stdout)");

  FbmArgs fa;
  auto* fbm = app.add_subcommand("fbm", "Sample a two-sided fBm driver on [-delay, horizon]");
  fbm->add_option("--hurst", fa.hurst, "Hurst index in (1/3, 1/2)");
  fbm->add_option("--dims", fa.dims, "number of components");
  fbm->add_option("--seed", fa.seed, "random seed");
  fbm->add_option("--replication", fa.replication, "replication index");
  fbm->add_option("--delay", fa.delay, "delay r");
  fbm->add_option("--horizon", fa.horizon, "horizon T");
  fbm->add_option("--steps", fa.steps, "grid steps per delay window");
  fbm->add_option("--refinement", fa.refinement, "fine steps per grid step");
  fbm->add_option("--out", fa.out, "path CSV")->required();
  fbm->add_option("--tensor", fa.tensor, "delayed Stratonovich tensor CSV");

  std::string sin_path, sout;
  auto* sk = app.add_subcommand("skorokhod", "Reflect a path CSV at the origin");
  sk->add_option("--in", sin_path, "xi CSV")->required()->check(CLI::ExistingFile);
  sk->add_option("--out", sout, "x and z CSV")->required();

  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "Rough integral of f(x) against y");
  integ->add_option("--x", ia.x, "x CSV")->required()->check(CLI::ExistingFile);
  integ->add_option("--y", ia.y, "y CSV")->required()->check(CLI::ExistingFile);
  integ->add_option("--tensor", ia.tensor, "x (x) y CSV (default: trapezoid lift)");
  integ->add_option("--map", ia.map, "id | sin | cos | bounded");
  integ->add_option("--scheme", ia.scheme, "fractional | interpolated");
  integ->add_option("--beta", ia.beta);
  integ->add_option("--gamma", ia.gamma);
  integ->add_option("--alpha", ia.alpha, "0 selects the midpoint of the admissible window");
  integ->add_option("--from", ia.a);
  integ->add_option("--to", ia.b);

  std::size_t threads = 1;
  auto* cal = app.add_subcommand("calibrate", "Evaluate the a-priori bound on the calibration corpus");
  cal->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*solve) return cmd_solve(config, out, report);
    if (*verify_cmd) return cmd_verify(suite, quick, vout);
    if (*fbm) return cmd_fbm(fa);
    if (*sk) return cmd_skorokhod(sin_path, sout);
    if (*integ) return cmd_integrate(ia);
    if (*cal) return cmd_calibrate(threads);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kConfig;
}
