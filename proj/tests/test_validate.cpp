#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "dadist/errors.hpp"
#include "dadist/validate.hpp"

using namespace dadist;

TEST_CASE("suite registry") {
  const auto names = suite_names();
  CHECK(names.size() == 7);
  CHECK_THROWS_AS(run_suite("no-such-suite"), config_error);
}

TEST_CASE("algebra suite passes") {
  const SuiteReport r = run_suite("algebra");
  CHECK(r.passed());
  CHECK(r.checks.size() == 3);
}

TEST_CASE("jacobians suite passes and documents the printed exponent") {
  const SuiteReport r = run_suite("jacobians");
  CHECK(r.passed());
  bool found = false;
  for (const auto& c : r.checks)
    if (c.name == "stereographic-matrix-exponent") {
      found = true;
      CHECK(c.detail.find("fails") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("reductions suite passes") { CHECK(run_suite("reductions").passed()); }

TEST_CASE("table suite skips gracefully without external data") {
  const SuiteReport r = run_suite("table");
  REQUIRE(r.checks.size() == 1);
  CHECK(r.passed());
  CHECK(r.checks[0].detail.find("skipped") != std::string::npos);
}

TEST_CASE("report serializes to parseable JSON") {
  const auto json = report_json({run_suite("algebra")});
  const auto parsed = nlohmann::json::parse(json);
  REQUIRE(parsed.is_array());
  CHECK(parsed[0]["suite"] == "algebra");
  CHECK(parsed[0]["passed"] == true);
  CHECK(parsed[0]["checks"].size() == 3);
}
