#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "roughreflect/config.hpp"
#include "roughreflect/verify.hpp"

/// Acceptance run: one PASS/FAIL line per criterion, full-scale suites,
/// runtime limits where they apply.  Exit status 0 iff every line passes.
namespace {

using namespace roughreflect;
namespace fs = std::filesystem;

struct Criterion {
  int id;
  const char* suite;
  double limit_seconds;  ///< 0: no runtime limit
};

bool report_suite(const Criterion& c) {
  const auto reports = verify::run_suites(c.suite, verify::Scale::full);
  const verify::SuiteReport& r = reports.front();
  std::size_t failed = 0;
  for (const auto& ch : r.checks) {
    if (ch.pass) continue;
    ++failed;
    std::cerr << "  [" << c.suite << "] " << ch.name << ": " << ch.value << " vs " << ch.tol << " (" << ch.witness
              << ")\n";
  }
  const bool in_time = c.limit_seconds == 0.0 || r.seconds < c.limit_seconds;
  const bool pass = failed == 0 && in_time;
  std::ostringstream line;
  line << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.suite << " suite, "
       << r.checks.size() - failed << "/" << r.checks.size() << " checks, " << r.seconds << " s";
  if (c.limit_seconds > 0.0) line << " (limit " << c.limit_seconds << " s)";
  std::cout << line.str() << std::endl;
  return pass;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool determinism() {
  const char* text = R"({
    "dims": {"d": 2, "m": 2}, "delay": 1.0, "horizon": 3.0, "steps_per_window": 128,
    "driver": {"kind": "fbm", "hurst": 0.45, "seed": 2024, "refinement": 8},
    "sigma": {"name": "sine", "C": [[0.6, 0.2], [0.1, 0.5]]},
    "drift": {"c": [0.2, 0.1], "A": [[-0.5, 0.0], [0.1, -0.5]], "B": [[0.0, 0.3], [0.2, 0.0]], "phi": "tanh"},
    "eta": {"constant": [0.4, 0.1]},
    "output": {"solution": "solution.csv", "driver": "driver.csv", "tensor": "tensor.csv", "report": "report.json"}
  })";
  std::string out[2];
  bool ran = true;
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = fs::temp_directory_path() / ("roughreflect_acceptance_" + std::to_string(i));
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::istringstream is(text);
    std::ostringstream log;
    ran = ran && run_simulate(parse_config(is, dir.string()), log) == 0;
    out[i] = slurp(dir / "solution.csv") + slurp(dir / "driver.csv") + slurp(dir / "tensor.csv");
  }
  const bool pass = ran && !out[0].empty() && out[0] == out[1];
  std::cout << "criterion 7: " << (pass ? "PASS" : "FAIL") << "  run_simulate twice with seed 2024, "
            << out[0].size() << " bytes of CSV, " << (out[0] == out[1] ? "identical" : "different") << std::endl;
  return pass;
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "skorokhod", 30.0}, {2, "fraccalc", 120.0}, {3, "tensor", 0.0},
      {4, "fbm", 300.0},      {5, "solver", 300.0},   {6, "bound", 0.0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    try {
      all = report_suite(c) && all;
    } catch (const std::exception& e) {
      std::cout << "criterion " << c.id << ": FAIL  " << c.suite << " suite threw: " << e.what() << std::endl;
      all = false;
    }
  }
  try {
    all = determinism() && all;
  } catch (const std::exception& e) {
    std::cout << "criterion 7: FAIL  run_simulate threw: " << e.what() << std::endl;
    all = false;
  }
  return all ? 0 : 1;
}
