#include <doctest.h>

#include <cmath>

#include "twosex/error.hpp"
#include "twosex/mating.hpp"

using namespace twosex;

TEST_CASE("mating rule evaluation") {
  const auto prom = MatingRule::promiscuous();
  CHECK(prom(5, 0) == 0);
  CHECK(prom(5, 3) == 5);
  CHECK(MatingRule::polygamous(2)(5, 2) == 4);
  CHECK(MatingRule::identity()(7, 0) == 7);
  CHECK_THROWS_AS(MatingRule::polygamous(0), ModelError);
  CHECK(MatingRule::polygamous(3).name() == "polygamous(k=3)");
}

TEST_CASE("built-in rules are monotone with the expected boundary values") {
  for (const auto& rule : {MatingRule::promiscuous(), MatingRule::polygamous(1), MatingRule::polygamous(3),
                           MatingRule::identity()}) {
    CAPTURE(rule.name());
    for (Count x = 0; x <= 50; ++x)
      for (Count y = 0; y <= 50; ++y) {
        if (x < 50) CHECK_LE(rule(x, y), rule(x + 1, y));
        if (y < 50) CHECK_LE(rule(x, y), rule(x, y + 1));
      }
    for (Count y = 0; y <= 50; ++y) CHECK(rule(0, y) == 0);
    const Count expected = rule.kind() == MatingRule::Kind::Identity ? 9 : 0;
    CHECK(rule(9, 0) == expected);
  }
}

TEST_CASE("superadditivity holds for built-ins on the grid") {
  const auto prom = check_superadditive(MatingRule::promiscuous(), 20);
  CHECK(prom.holds);
  CHECK(prom.holds_analytically);
  CHECK(prom.cap == 20);
  CHECK(check_superadditive(MatingRule::polygamous(3), 20).holds);
  CHECK(check_superadditive(MatingRule::identity(), 10).holds);
  CHECK_THROWS_AS(check_superadditive(MatingRule::identity(), 0), ModelError);
}

TEST_CASE("superadditivity checker finds an injected violation") {
  // ceil(x/2): zeta(2,0) = 1 < zeta(1,0) + zeta(1,0) = 2.
  const auto half = MatingRule::custom("ceil-half", [](Count x, Count) { return (x + 1) / 2; });
  const auto report = check_superadditive(half, 5);
  REQUIRE_FALSE(report.holds);
  CHECK_FALSE(report.holds_analytically);
  REQUIRE(report.counterexample);
  const auto& c = *report.counterexample;
  CHECK(c.x1 == 1);
  CHECK(c.y1 == 0);
  CHECK(c.x2 == 1);
  CHECK(c.y2 == 0);
  CHECK(c.merged == 1);
  CHECK(c.split == 2);
}

TEST_CASE("female domination") {
  CHECK(check_female_dominated(MatingRule::promiscuous(), 50).holds);
  CHECK(check_female_dominated(MatingRule::polygamous(2), 50).holds);
  const auto plus = MatingRule::custom("x+y", [](Count x, Count y) { return x + y; });
  const auto report = check_female_dominated(plus, 50);
  REQUIRE_FALSE(report.holds);
  REQUIRE(report.counterexample);
  CHECK(report.counterexample->x == 0);
  CHECK(report.counterexample->y == 1);
  CHECK(report.counterexample->value == 1);
}

TEST_CASE("custom superadditive rule passes on the grid but is not certified analytically") {
  const auto sqrtish = MatingRule::custom("min(x,y*y)", [](Count x, Count y) { return std::min(x, y * y); });
  const auto report = check_superadditive(sqrtish, 8);
  CHECK(report.holds);
  CHECK_FALSE(report.holds_analytically);
}
