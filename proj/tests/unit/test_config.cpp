#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "roughreflect/config.hpp"
#include "roughreflect/csv.hpp"
#include "roughreflect/errors.hpp"

using namespace roughreflect;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text, const std::string& dir = ".") {
  std::istringstream is(text);
  return parse_config(is, dir);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("roughreflect_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kMinimal = R"({
  "dims": {"d": 1, "m": 1}, "delay": 1.0, "horizon": 2.0, "steps_per_window": 32,
  "driver": {"kind": "sine", "amplitude": [1.0], "frequency": [6.0]},
  "sigma": {"name": "zero"}, "eta": {"constant": [0.75]}
})";

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig c = parse(kMinimal);
  CHECK(c.d == 1);
  CHECK(c.steps_per_window == 32);
  CHECK(c.driver.kind == DriverConfig::Kind::sine);
  CHECK(c.beta == 0.4);
  CHECK(c.bound_K == kCalibratedBoundConstant);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse("{"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"dims": {"d": 1, "m": 1}, "delay": 1.0, "colour": 3})"), ConfigError);
  auto with = [](const std::string& extra) {
    std::string s = kMinimal;
    s.insert(s.rfind('}'), ", " + extra);
    return s;
  };
  CHECK_THROWS_AS(parse(with(R"("frac": {"beta": 0.6})")), ConfigError);
  CHECK_THROWS_AS(parse(with(R"("frac": {"beta": 0.4, "alpha": 0.95})")), ConfigError);
  CHECK_THROWS_AS(parse(with(R"("replications": 4)")), ConfigError);
  CHECK_NOTHROW(parse(with(R"("frac": {"beta": 0.35, "gamma": 1.0})")));
  std::string neg = kMinimal;
  neg.replace(neg.find("0.75"), 4, "-0.1");
  CHECK_THROWS_AS(parse(neg), ConfigError);
  std::string csv = kMinimal;
  csv.replace(csv.find(R"("kind": "sine")"), 14, R"("kind": "csv", "path": "missing.csv")");
  CHECK_THROWS_AS(parse(csv), ConfigError);
}

TEST_CASE("sigma = 0 run writes a constant solution") {
  const fs::path dir = scratch("zero");
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "output": {"solution": "sol.csv", "report": "rep.json"})");
  const RunConfig c = parse(text, dir.string());
  std::ostringstream log;
  CHECK(run_simulate(c, log) == 0);
  const GridPath x = read_path_file((dir / "sol.csv").string());
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(x(k, 0) == 0.75);
  const auto rep = nlohmann::json::parse(slurp(dir / "rep.json"));
  CHECK(rep.is_object());
}

TEST_CASE("seeded fBm runs are byte-identical") {
  const char* text = R"({
    "dims": {"d": 1, "m": 1}, "delay": 1.0, "horizon": 2.0, "steps_per_window": 64,
    "driver": {"kind": "fbm", "hurst": 0.45, "seed": 11, "refinement": 4},
    "sigma": {"name": "bounded", "C": [1.0]},
    "drift": {"c": [0.1], "B": [-0.5], "phi": "tanh"},
    "eta": {"constant": [0.3]},
    "output": {"solution": "sol.csv", "driver": "y.csv"}
  })";
  std::string out[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = scratch("det" + std::to_string(i));
    std::ostringstream log;
    REQUIRE(run_simulate(parse(text, dir.string()), log) == 0);
    out[i] = slurp(dir / "sol.csv") + slurp(dir / "y.csv");
  }
  CHECK(out[0].size() > 1000);
  CHECK(out[0] == out[1]);
}

TEST_CASE("replicated runs summarize the moment") {
  const fs::path dir = scratch("moments");
  const char* text = R"({
    "dims": {"d": 1, "m": 1}, "delay": 1.0, "horizon": 1.0, "steps_per_window": 32,
    "driver": {"kind": "fbm", "hurst": 0.45, "seed": 3, "refinement": 2},
    "sigma": {"name": "constant", "C": [1.0]},
    "eta": {"constant": [0.5]},
    "replications": 8, "threads": 2,
    "output": {"moments": "m.json"}
  })";
  std::ostringstream log;
  CHECK(run_simulate(parse(text, dir.string()), log) == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "m.json"));
  CHECK(m["replications"] == 8);
  CHECK(m["passed"] == 8);
  CHECK(m["moment"].get<double>() >= 0.25);
  CHECK(m["standard_error"].get<double>() > 0.0);
}
