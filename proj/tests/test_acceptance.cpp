#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "pslat/verification.hpp"

using namespace pslat;

// The acceptance gate: every numbered check must pass, and each prints one
// line so the gate is readable in raw test output.
TEST_CASE("acceptance checks") {
  std::vector<CheckLine> lines = run_acceptance();
  REQUIRE(lines.size() == 10);
  for (const CheckLine& line : lines) {
    std::printf("ACCEPTANCE %2d %s: %s%s%s\n", line.number, line.pass ? "PASS" : "FAIL",
                line.label.c_str(), line.detail.empty() ? "" : " - ",
                line.detail.c_str());
    INFO("criterion " << line.number << " (" << line.label << "): " << line.detail);
    CHECK(line.pass);
  }
}
