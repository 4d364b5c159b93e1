#include "roughreflect/config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "roughreflect/csv.hpp"
#include "roughreflect/errors.hpp"
#include "roughreflect/skorokhod.hpp"

namespace roughreflect {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key + ": " + e.what());
  }
}

/// Flat list of numbers; nested lists are flattened row by row.
std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return {};
  std::vector<double> out;
  const json& v = j.at(key);
  auto push = [&](const json& e) {
    if (!e.is_number()) fail(where + "." + key + " must contain numbers");
    out.push_back(e.get<double>());
  };
  if (v.is_number()) {
    push(v);
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (e.is_array()) {
        for (const auto& f : e) push(f);
      } else {
        push(e);
      }
    }
  } else {
    fail(where + "." + key + " must be a number or a list");
  }
  return out;
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute() || base.empty()) return p;
  return (std::filesystem::path(base) / fp).string();
}

void expect_size(const std::vector<double>& v, std::size_t n, const std::string& what) {
  if (v.size() != n) {
    std::ostringstream os;
    os << what << " has " << v.size() << " entries, expected " << n;
    fail(os.str());
  }
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& base_dir) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"dims", "delay", "horizon", "steps_per_window", "driver", "sigma", "drift", "eta", "frac", "tolerances",
             "bound", "replications", "threads", "moments", "verbosity", "output"});
  RunConfig c;
  c.base_dir = base_dir;
  if (j.contains("dims")) {
    only_keys(j["dims"], "dims", {"d", "m"});
    c.d = get<std::size_t>(j["dims"], "d", "dims", 1);
    c.m = get<std::size_t>(j["dims"], "m", "dims", 1);
  }
  c.delay = get<double>(j, "delay", "config", 1.0);
  c.horizon = get<double>(j, "horizon", "config", 1.0);
  c.steps_per_window = get<std::size_t>(j, "steps_per_window", "config", 128);

  if (j.contains("driver")) {
    const json& dj = j["driver"];
    only_keys(dj, "driver", {"kind", "hurst", "seed", "refinement", "path", "amplitude", "frequency"});
    const auto kind = get<std::string>(dj, "kind", "driver", "fbm");
    if (kind == "fbm") {
      c.driver.kind = DriverConfig::Kind::fbm;
    } else if (kind == "csv") {
      c.driver.kind = DriverConfig::Kind::csv;
    } else if (kind == "sine") {
      c.driver.kind = DriverConfig::Kind::sine;
    } else {
      fail("driver.kind must be fbm, csv or sine");
    }
    c.driver.hurst = get<double>(dj, "hurst", "driver", 0.45);
    c.driver.seed = get<std::uint64_t>(dj, "seed", "driver", 0);
    c.driver.refinement = get<std::size_t>(dj, "refinement", "driver", 8);
    c.driver.path = resolve(base_dir, get<std::string>(dj, "path", "driver", ""));
    c.driver.amplitude = numbers(dj, "amplitude", "driver");
    c.driver.frequency = numbers(dj, "frequency", "driver");
  }

  if (j.contains("sigma")) {
    const json& sj = j["sigma"];
    only_keys(sj, "sigma", {"name", "C", "A", "nodes", "values"});
    c.sigma.name = get<std::string>(sj, "name", "sigma", "zero");
    c.sigma.C = numbers(sj, "C", "sigma");
    c.sigma.A = numbers(sj, "A", "sigma");
    c.sigma.nodes = numbers(sj, "nodes", "sigma");
    c.sigma.values = numbers(sj, "values", "sigma");
  }

  c.drift = Drift::zero(c.d);
  if (j.contains("drift")) {
    const json& bj = j["drift"];
    only_keys(bj, "drift", {"c", "A", "B", "kappa", "phi", "functional"});
    c.drift.c = numbers(bj, "c", "drift");
    c.drift.A = numbers(bj, "A", "drift");
    c.drift.B = numbers(bj, "B", "drift");
    c.drift.kappa = numbers(bj, "kappa", "drift");
    const auto phi = get<std::string>(bj, "phi", "drift", "linear");
    if (phi == "linear") {
      c.drift.phi = Phi::linear;
    } else if (phi == "tanh") {
      c.drift.phi = Phi::tanh;
    } else {
      fail("drift.phi must be linear or tanh");
    }
    const auto fn = get<std::string>(bj, "functional", "drift", "none");
    if (fn == "none") {
      c.drift.functional = HistoryFunctional::none;
    } else if (fn == "running_sup") {
      c.drift.functional = HistoryFunctional::running_sup;
    } else if (fn == "window_mean") {
      c.drift.functional = HistoryFunctional::window_mean;
    } else {
      fail("drift.functional must be none, running_sup or window_mean");
    }
  }

  if (j.contains("eta")) {
    const json& ej = j["eta"];
    only_keys(ej, "eta", {"constant", "csv"});
    c.eta_constant = numbers(ej, "constant", "eta");
    c.eta_csv = resolve(base_dir, get<std::string>(ej, "csv", "eta", ""));
  }
  if (j.contains("frac")) {
    only_keys(j["frac"], "frac", {"beta", "gamma", "alpha"});
    c.beta = get<double>(j["frac"], "beta", "frac", 0.4);
    c.gamma = get<double>(j["frac"], "gamma", "frac", 1.0);
    c.alpha = get<double>(j["frac"], "alpha", "frac", 0.0);
  }
  if (j.contains("tolerances")) {
    const json& tj = j["tolerances"];
    only_keys(tj, "tolerances", {"picard", "max_iter", "tensor", "residual"});
    c.solver.tol = get<double>(tj, "picard", "tolerances", c.solver.tol);
    c.solver.max_iter = get<std::size_t>(tj, "max_iter", "tolerances", c.solver.max_iter);
    c.solver.tensor_tol = get<double>(tj, "tensor", "tolerances", c.solver.tensor_tol);
    c.residual_tol = get<double>(tj, "residual", "tolerances", c.residual_tol);
  }
  if (j.contains("bound")) {
    only_keys(j["bound"], "bound", {"K", "k"});
    c.bound_K = get<double>(j["bound"], "K", "bound", c.bound_K);
    c.bound_k = get<double>(j["bound"], "k", "bound", c.bound_k);
  }
  c.replications = get<std::size_t>(j, "replications", "config", 1);
  c.threads = get<std::size_t>(j, "threads", "config", 1);
  if (j.contains("moments")) {
    only_keys(j["moments"], "moments", {"p"});
    c.moment_p = get<double>(j["moments"], "p", "moments", 2.0);
  }
  c.verbosity = get<int>(j, "verbosity", "config", 0);
  if (j.contains("output")) {
    const json& oj = j["output"];
    only_keys(oj, "output", {"solution", "driver", "tensor", "report", "moments"});
    c.output.solution = resolve(base_dir, get<std::string>(oj, "solution", "output", ""));
    c.output.driver = resolve(base_dir, get<std::string>(oj, "driver", "output", ""));
    c.output.tensor = resolve(base_dir, get<std::string>(oj, "tensor", "output", ""));
    c.output.report = resolve(base_dir, get<std::string>(oj, "report", "output", ""));
    c.output.moments = resolve(base_dir, get<std::string>(oj, "moments", "output", ""));
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open config file " + path);
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_config(is, dir.empty() ? "." : dir);
}

void RunConfig::validate() const {
  if (d == 0 || m == 0) fail("dims.d and dims.m must be positive");
  if (!(delay > 0.0)) fail("delay must be positive");
  if (!(horizon > 0.0)) fail("horizon must be positive");
  if (steps_per_window < 2) fail("steps_per_window must be at least 2");
  const double h = delay / static_cast<double>(steps_per_window);
  const double q = horizon / h;
  if (std::abs(q - std::nearbyint(q)) > 1e-7 * std::max(1.0, q)) fail("horizon must be a multiple of delay/steps");
  if (!(beta > 1.0 / 3.0 && beta < 0.5)) fail("frac.beta must lie in (1/3, 1/2)");
  if (!(gamma > 1.0 / beta - 2.0 && gamma <= 1.0)) fail("frac.gamma must lie in (1/beta - 2, 1]");
  if (alpha != 0.0) {
    try {
      FracParams{alpha, beta, gamma}.validate();
    } catch (const std::exception& e) {
      fail(std::string("frac.alpha: ") + e.what());
    }
  }
  switch (driver.kind) {
    case DriverConfig::Kind::fbm:
      if (!(driver.hurst > 1.0 / 3.0 && driver.hurst < 0.5)) fail("driver.hurst must lie in (1/3, 1/2)");
      if (!(beta < driver.hurst)) fail("frac.beta must be below driver.hurst");
      if (driver.refinement == 0) fail("driver.refinement must be at least 1");
      break;
    case DriverConfig::Kind::csv:
      if (driver.path.empty()) fail("driver.path is required for a csv driver");
      if (!std::filesystem::exists(driver.path)) fail("driver file not found: " + driver.path);
      break;
    case DriverConfig::Kind::sine:
      expect_size(driver.amplitude, m, "driver.amplitude");
      expect_size(driver.frequency, m, "driver.frequency");
      break;
  }
  if (eta_csv.empty()) {
    expect_size(eta_constant, d, "eta.constant");
    for (double v : eta_constant) {
      if (v < 0.0) fail("eta must be nonnegative");
    }
  } else if (!std::filesystem::exists(eta_csv)) {
    fail("eta file not found: " + eta_csv);
  }
  if (drift.dim != d) fail("drift dimension differs from dims.d");
  try {
    drift.validate();
  } catch (const std::exception& e) {
    fail(std::string("drift: ") + e.what());
  }
  if (replications == 0) fail("replications must be at least 1");
  if (replications > 1 && driver.kind != DriverConfig::Kind::fbm) fail("replications need an fbm driver");
  if (threads == 0) fail("threads must be at least 1");
  if (moment_p < 1.0) fail("moments.p must be at least 1");
  if (!(solver.tol > 0.0) || solver.max_iter == 0) fail("Picard tolerance and max_iter must be positive");
  if (bound_K < 0.0 || bound_k < 0.0) fail("bound constants must be nonnegative");
  try {
    (void)make_sigma(sigma, d, m);
  } catch (const ArgumentError& e) {
    fail(std::string("sigma: ") + e.what());
  }
}

Diffusion make_sigma(const SigmaConfig& s, std::size_t d, std::size_t m) {
  const std::size_t n = d * m;
  auto C = s.C;
  if (s.name == "zero") return sigma_zero(d, m);
  expect_size(C, n, "sigma.C");
  if (s.name == "constant") return sigma_constant(d, m, C);
  if (s.name == "linear") {
    expect_size(s.A, n, "sigma.A");
    return sigma_linear(d, m, C, s.A);
  }
  if (s.name == "bounded") return sigma_bounded(d, m, C);
  if (s.name == "sine") return sigma_sine(d, m, C);
  if (s.name == "tabulated") return sigma_tabulated(d, m, C, s.nodes, s.values);
  fail("sigma.name must be zero, constant, linear, bounded, sine or tabulated");
}

Coefficients make_coefficients(const RunConfig& cfg) {
  Coefficients c;
  c.sigma = make_sigma(cfg.sigma, cfg.d, cfg.m);
  c.drift = cfg.drift;
  c.frac = cfg.alpha == 0.0 ? FracParams::with_default_alpha(cfg.beta, cfg.gamma)
                            : FracParams{cfg.alpha, cfg.beta, cfg.gamma};
  const Grid gh = Grid::history(cfg.delay, cfg.steps_per_window);
  if (cfg.eta_csv.empty()) {
    c.eta = GridPath(gh, cfg.d);
    for (std::size_t k = 0; k < gh.size(); ++k) {
      for (std::size_t i = 0; i < cfg.d; ++i) c.eta(k, i) = cfg.eta_constant[i];
    }
  } else {
    const GridPath raw = read_path_file(cfg.eta_csv, gh.step());
    if (raw.dim() != cfg.d) fail("eta file has the wrong number of columns");
    if (!(raw.grid() == gh)) fail("eta file must cover exactly [-delay, 0] on the solver grid");
    c.eta = GridPath(gh, cfg.d, raw.values());
  }
  try {
    c.validate();
  } catch (const DomainError& e) {
    fail(std::string("coefficients: ") + e.what());
  } catch (const ArgumentError& e) {
    fail(std::string("coefficients: ") + e.what());
  }
  return c;
}

Driver make_driver(const RunConfig& cfg, const Coefficients& coefs, std::uint64_t replication) {
  const std::size_t N = cfg.steps_per_window;
  const Grid g = Grid::delay_grid(cfg.delay, N, cfg.horizon);
  switch (cfg.driver.kind) {
    case DriverConfig::Kind::fbm: {
      FbmSpec spec;
      spec.hurst = cfg.driver.hurst;
      spec.dims = cfg.m;
      spec.grid = g;
      spec.seed = cfg.driver.seed;
      spec.refinement = cfg.driver.refinement;
      return fbm_driver(sample_fbm(spec, replication), coefs.eta);
    }
    case DriverConfig::Kind::sine: {
      const auto& A = cfg.driver.amplitude;
      const auto& F = cfg.driver.frequency;
      const GridPath y = GridPath::from_function(g, cfg.m, [&](double t, std::span<double> out) {
        for (std::size_t b = 0; b < out.size(); ++b) out[b] = A[b] * std::sin(F[b] * t);
      });
      return smooth_driver(y, coefs.eta);
    }
    case DriverConfig::Kind::csv: {
      const GridPath raw = read_path_file(cfg.driver.path, g.step());
      if (raw.dim() != cfg.m) fail("driver file has the wrong number of columns");
      if (!raw.grid().contains_lattice(g.first()) || !raw.grid().contains_lattice(g.last())) {
        fail("driver file must cover [-delay, horizon]");
      }
      const GridPath y(g, cfg.m, raw.restrict_lattice(g.first(), g.last()).values());
      return smooth_driver(y, coefs.eta);
    }
  }
  fail("unknown driver kind");
}

namespace {

TwoParamField glue_tensors(const Solution& sol, const GridPath& y) {
  TwoParamField full = sol.tensors.front();
  for (std::size_t n = 1; n < sol.tensors.size(); ++n) full = extend_delayed_tensor(full, sol.tensors[n], sol.x, y);
  return full;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  os << text;
}

json holder_json(const HolderReport& h) {
  return {{"norm", h.norm}, {"s", h.s}, {"t", h.t}, {"exponent", h.exponent}};
}

}  // namespace

int run_simulate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Coefficients coefs = make_coefficients(cfg);
  SolverConfig scfg = cfg.solver;
  scfg.horizon = cfg.horizon;

  if (cfg.replications > 1) {
    const std::size_t R = cfg.replications;
    std::vector<double> sup(R, 0.0);
    std::vector<char> ok(R, 0);
    std::vector<std::string> errors(R);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t q = next.fetch_add(1);
        if (q >= R) return;
        try {
          const Driver dr = make_driver(cfg, coefs, q);
          const Solution sol = solve(coefs, dr, scfg);
          sup[q] = sup_norm(sol.x);
          ok[q] = check_solution(sol, coefs, cfg.residual_tol).pass ? 1 : 0;
        } catch (const std::exception& e) {
          errors[q] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(cfg.threads, R); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    double mean = 0.0, sq = 0.0, lo = kInfinity, hi = 0.0;
    std::size_t passed = 0;
    for (std::size_t q = 0; q < R; ++q) {
      const double v = std::pow(sup[q], cfg.moment_p);
      mean += v;
      sq += v * v;
      lo = std::min(lo, sup[q]);
      hi = std::max(hi, sup[q]);
      passed += ok[q] ? 1 : 0;
    }
    const double n = static_cast<double>(R);
    mean /= n;
    const double var = std::max(0.0, sq / n - mean * mean) * n / (n - 1.0);
    const double se = std::sqrt(var / n);
    json mj = {{"replications", R},  {"p", cfg.moment_p},       {"moment", mean},
               {"standard_error", se}, {"min_sup", lo},          {"max_sup", hi},
               {"passed", passed}};
    for (std::size_t q = 0; q < R; ++q) {
      if (!errors[q].empty()) mj["errors"].push_back({{"replication", q}, {"what", errors[q]}});
    }
    if (!cfg.output.moments.empty()) write_text(cfg.output.moments, mj.dump(2) + "\n");
    log << "replications " << R << ": E||x||^" << cfg.moment_p << " = " << mean << " (se " << se << "), " << passed
        << " passed all checks\n";
    return passed == R ? 0 : 1;
  }

  const Driver dr = make_driver(cfg, coefs, 0);
  const Solution sol = solve(coefs, dr, scfg);
  const SolutionChecks checks = check_solution(sol, coefs, cfg.residual_tol);

  json report;
  report["checks"] = {{"negativity", checks.negativity},
                      {"skorokhod_consistent", checks.skorokhod_consistent},
                      {"eta_mismatch", checks.eta_mismatch},
                      {"residual", checks.residual},
                      {"pass", checks.pass}};
  for (const auto& w : sol.windows) {
    report["windows"].push_back({{"index", w.index},
                                 {"start", w.start},
                                 {"end", w.end},
                                 {"iterations", w.iterations},
                                 {"change", w.change},
                                 {"holder_x", holder_json(w.holder_x)}});
  }
  if (coefs.drift.bounded() && coefs.sigma.bounded()) {
    const BoundReport b = a_priori_bound(coefs, dr, sol, cfg.bound_K, cfg.bound_k);
    report["bound"] = {{"mu", b.mu},   {"delta_y", b.delta_y}, {"K", b.K},
                       {"rhs", b.rhs}, {"lhs", b.lhs},         {"minimal_K", b.minimal_K},
                       {"pass", b.pass}};
  }
  report["sup_x"] = sup_norm(sol.x);

  if (!cfg.output.solution.empty()) {
    std::ostringstream os;
    write_paths(os, {&sol.x, &sol.z, &sol.xi}, {"x", "z", "xi"});
    write_text(cfg.output.solution, os.str());
  }
  if (!cfg.output.driver.empty()) {
    std::ostringstream os;
    write_path(os, dr.y, "y");
    write_text(cfg.output.driver, os.str());
  }
  if (!cfg.output.tensor.empty()) {
    std::ostringstream os;
    write_field(os, glue_tensors(sol, dr.y));
    write_text(cfg.output.tensor, os.str());
  }
  if (!cfg.output.report.empty()) write_text(cfg.output.report, report.dump(2) + "\n");
  if (cfg.verbosity > 0) log << report.dump(2) << "\n";
  log << "solved " << sol.windows.size() << " window(s); sup x = " << sup_norm(sol.x)
      << "; residual = " << sol.residual << "; checks " << (checks.pass ? "pass" : "FAIL") << "\n";
  return checks.pass ? 0 : 1;
}

}  // namespace roughreflect
