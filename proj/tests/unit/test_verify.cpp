#include "doctest.h"
#include "json.hpp"
#include "roughreflect/verify.hpp"

using namespace roughreflect;

TEST_CASE("degenerate inputs pass every stage") {
  const auto r = verify::degenerate_suite();
  CHECK(r.pass());
  CHECK(r.checks.size() >= 5);
}

TEST_CASE("every fault is detected and located") {
  const auto r = verify::fault_suite();
  REQUIRE_FALSE(r.checks.empty());
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK_FALSE(c.pass);
    CHECK_FALSE(c.witness.empty());
  }
}

TEST_CASE("suite registry and JSON report") {
  const auto& names = verify::suite_names();
  CHECK(names.size() == 8);
  CHECK_THROWS(verify::run_suites("nonexistent", verify::Scale::quick));
  const auto reports = verify::run_suites("degenerate", verify::Scale::quick);
  REQUIRE(reports.size() == 1);
  const auto j = nlohmann::json::parse(verify::to_json(reports));
  CHECK(j.dump().find("degenerate") != std::string::npos);
  CHECK(verify::summary_line(reports[0]).find("PASS") != std::string::npos);
}

TEST_CASE("bound corpus shape") {
  const auto corpus = verify::bound_corpus();
  CHECK(corpus.size() == 50);
  bool fbm = false, smooth = false, d2 = false, m2 = false;
  for (const auto& c : corpus) {
    fbm = fbm || c.driver.kind == DriverConfig::Kind::fbm;
    smooth = smooth || c.driver.kind != DriverConfig::Kind::fbm;
    d2 = d2 || c.d == 2;
    m2 = m2 || c.m == 2;
  }
  CHECK((fbm && smooth && d2 && m2));
}
