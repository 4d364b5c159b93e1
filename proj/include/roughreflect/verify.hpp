#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "roughreflect/config.hpp"
#include "roughreflect/solver.hpp"

/// Property and oracle suites.  Every suite returns a list of named checks
/// with the measured value, the tolerance it is held to and a witness
/// (where the worst case was found).
namespace roughreflect::verify {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tol = 0.0;
  std::string witness;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
  /// value <= tol.
  Check& at_most(std::string name, double value, double tol, std::string witness = {});
  /// value >= tol.
  Check& at_least(std::string name, double value, double tol, std::string witness = {});
  Check& flag(std::string name, bool ok, std::string witness = {});
};

/// quick: reduced sample counts for interactive use; full: the sizes the
/// acceptance thresholds are stated for.
enum class Scale { quick, full };

SuiteReport skorokhod_suite(Scale scale);
SuiteReport fraccalc_suite(Scale scale);
SuiteReport tensor_suite(Scale scale);
SuiteReport fbm_suite(Scale scale);
SuiteReport solver_suite(Scale scale);
SuiteReport bound_suite(Scale scale);
/// All-zero inputs through every stage; must pass.
SuiteReport degenerate_suite();
/// Real checks run on deliberately corrupted inputs; every check is
/// expected to fail and to name a witness.
SuiteReport fault_suite();

/// skorokhod, fraccalc, tensor, fbm, solver, bound, degenerate, fault.
const std::vector<std::string>& suite_names();
/// One suite by name, or every suite except `fault` for "all".
std::vector<SuiteReport> run_suites(const std::string& name, Scale scale);

std::string to_json(const std::vector<SuiteReport>& reports);
std::string summary_line(const SuiteReport& report);

// ------------------------------------------------------------ bound corpus

/// The 50 run configurations the a-priori bound constant is calibrated on:
/// beta in {0.35, 0.4, 0.45}, d, m in {1, 2}, smooth and fBm drivers
/// (H = beta + 0.04), bounded coefficients, including strong constant
/// drifts for which the bound is not trivially satisfied.
std::vector<RunConfig> bound_corpus();

struct Calibration {
  std::vector<BoundReport> reports;
  double k_star = 0.0;       ///< max of the per-case minimal K
  std::size_t argmax = 0;    ///< case attaining it
  std::size_t failures = 0;  ///< cases violating the bound at the given K
};

/// Solves every corpus case and evaluates the bound at K.
Calibration calibrate_bound(double K = kCalibratedBoundConstant, std::size_t threads = 1);

}  // namespace roughreflect::verify
