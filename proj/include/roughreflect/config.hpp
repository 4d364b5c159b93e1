#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughreflect/solver.hpp"

/// JSON run configuration for `rough-reflect solve`.
///
///   {
///     "dims": {"d": 1, "m": 1},
///     "delay": 1.0, "horizon": 2.0, "steps_per_window": 256,
///     "driver": {"kind": "fbm", "hurst": 0.45, "seed": 7, "refinement": 8},
///     "sigma": {"name": "bounded", "C": [1.0]},
///     "drift": {"c": [0.0], "B": [-1.0], "phi": "linear"},
///     "eta": {"constant": [0.5]},
///     "frac": {"beta": 0.4, "gamma": 1.0},
///     "tolerances": {"picard": 1e-10, "max_iter": 500},
///     "output": {"solution": "sol.csv"}
///   }
///
/// Relative file names are resolved against the directory of the config.
namespace roughreflect {

struct DriverConfig {
  enum class Kind { fbm, csv, sine };
  Kind kind = Kind::fbm;
  double hurst = 0.45;
  std::uint64_t seed = 0;
  std::size_t refinement = 8;
  std::string path;         ///< csv: y on [-r, T] (or [0, T])
  std::vector<double> amplitude, frequency;  ///< sine: y_b = amplitude_b sin(frequency_b t)
};

struct SigmaConfig {
  std::string name = "zero";  ///< zero | constant | linear | bounded | sine | tabulated
  std::vector<double> C, A, nodes, values;
};

struct OutputConfig {
  std::string solution;  ///< t, x.., z.., xi..
  std::string driver;    ///< t, y..
  std::string tensor;    ///< s, t, (x_{.-r} (x) y) entries on [0, T]
  std::string report;    ///< JSON diagnostics
  std::string moments;   ///< JSON moment summary over replications
};

struct RunConfig {
  std::size_t d = 1, m = 1;
  double delay = 1.0;
  double horizon = 1.0;
  std::size_t steps_per_window = 128;
  DriverConfig driver;
  SigmaConfig sigma;
  Drift drift;
  std::vector<double> eta_constant;
  std::string eta_csv;
  double beta = 0.4, gamma = 1.0;
  double alpha = 0.0;  ///< 0 selects the midpoint of the admissible window
  SolverConfig solver;
  double residual_tol = 1e-6;
  double bound_K = kCalibratedBoundConstant;
  double bound_k = 1.0;
  std::size_t replications = 1;
  std::size_t threads = 1;
  double moment_p = 2.0;
  int verbosity = 0;
  OutputConfig output;
  std::string base_dir;  ///< directory of the config file

  /// Parameter windows and file existence; throws ConfigError.
  void validate() const;
};

RunConfig parse_config(std::istream& is, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Builders for the objects a run needs.
Diffusion make_sigma(const SigmaConfig& s, std::size_t d, std::size_t m);
Coefficients make_coefficients(const RunConfig& cfg);
Driver make_driver(const RunConfig& cfg, const Coefficients& coefs, std::uint64_t replication = 0);

/// Solves, checks and writes every configured artifact.  Returns the exit
/// status: 0 when all invariant checks pass, 1 otherwise.
int run_simulate(const RunConfig& cfg, std::ostream& log);

}  // namespace roughreflect
