#include <doctest.h>

#include <algorithm>

#include "lac/scenario.hpp"

using lac::ScenarioKind;
using lac::ScenarioSpec;
using lac::Vec2;

namespace {

constexpr double kR = 10.0;

double min_pair(const std::vector<Vec2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, (pts[i] - pts[j]).norm());
  }
  return best;
}

void check_separated(const lac::Scenario& s, double sep) {
  std::vector<Vec2> starts, targets;
  for (const auto& a : s.agents) {
    starts.push_back(a.start);
    targets.push_back(a.target);
  }
  CHECK(min_pair(starts) >= sep);
  CHECK(min_pair(targets) >= sep);
}

bool lex_less(const Vec2& a, const Vec2& b) {
  return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
}

}  // namespace

TEST_CASE("minimal reflection is a two-agent swap on one line") {
  const auto s = lac::gen_reflection(1, 1, 30, 200, kR, 1.0);
  REQUIRE(s.agents.size() == 2);
  CHECK(s.agents[0].start.y() == s.agents[1].start.y());
  CHECK(s.agents[0].target == s.agents[1].start);
  CHECK(s.agents[1].target == s.agents[0].start);
  CHECK(s.agents[0].group != s.agents[1].group);
}

TEST_CASE("reflection targets mirror starts across x = 0 exactly") {
  for (int per_side : {1, 5, 50}) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::reflection;
    spec.agents = 2 * per_side;
    const auto s = lac::generate(spec, kR);
    REQUIRE(static_cast<int>(s.agents.size()) == 2 * per_side);
    std::vector<Vec2> starts, mirrored;
    for (const auto& a : s.agents) {
      CHECK(a.target.x() == -a.start.x());
      CHECK(a.target.y() == a.start.y());
      starts.push_back(a.start);
      mirrored.push_back(Vec2(-a.start.x(), a.start.y()));
    }
    // the mirror maps the start multiset onto itself, and so onto the targets
    std::sort(starts.begin(), starts.end(), lex_less);
    std::sort(mirrored.begin(), mirrored.end(), lex_less);
    CHECK(starts == mirrored);
    check_separated(s, 2 * kR + 1.0);
  }
}

TEST_CASE("reflection rejects infeasible packing") {
  CHECK_THROWS_AS(lac::gen_reflection(4, 2, 20.5, 200, kR, 1.0), lac::ScenarioError);
  ScenarioSpec spec;
  spec.kind = ScenarioKind::reflection;
  spec.agents = 3;
  CHECK_THROWS_AS(lac::generate(spec, kR), lac::ScenarioError);
}

TEST_CASE("two-agent circle swaps diametrically opposite agents") {
  const auto s = lac::gen_circle(2, 1, 100, 40, kR, 1.0);
  REQUIRE(s.agents.size() == 2);
  CHECK((s.agents[0].start + s.agents[1].start).norm() <= 1e-12);
  CHECK(s.agents[0].start.norm() == doctest::Approx(100.0));
}

TEST_CASE("circle targets are exact antipodes") {
  for (int n : {2, 12, 24, 120}) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::circle;
    spec.agents = n;
    const auto s = lac::generate(spec, kR);
    REQUIRE(static_cast<int>(s.agents.size()) == n);
    for (const auto& a : s.agents) {
      CHECK(a.target.x() == -a.start.x());
      CHECK(a.target.y() == -a.start.y());
    }
    check_separated(s, 2 * kR + 1.0);
  }
}

TEST_CASE("120 agents fill five rings of 24") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::circle;
  spec.agents = 120;
  const auto s = lac::generate(spec, kR);
  std::vector<int> per_ring(5, 0);
  for (const auto& a : s.agents) {
    REQUIRE(a.group >= 0);
    REQUIRE(a.group < 5);
    ++per_ring[a.group];
  }
  CHECK(per_ring == std::vector<int>(5, 24));
}

TEST_CASE("circle rejects rings too small for their share") {
  CHECK_THROWS_AS(lac::gen_circle(24, 1, 50, 40, kR, 1.0), lac::ScenarioError);
}

TEST_CASE("crowd sampling is deterministic per seed") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::crowd;
  spec.agents = 100;
  spec.seed = 17;
  const auto a = lac::generate(spec, kR);
  const auto b = lac::generate(spec, kR);
  REQUIRE(a.agents.size() == 100);
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    CHECK(a.agents[i].start == b.agents[i].start);
    CHECK(a.agents[i].target == b.agents[i].target);
  }
  spec.seed = 18;
  const auto c = lac::generate(spec, kR);
  CHECK(c.agents[0].start != a.agents[0].start);
}

TEST_CASE("crowd stays inside its square with the declared spacings") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::crowd;
  spec.agents = 100;
  spec.area_side = 600;
  const auto s = lac::generate(spec, kR);
  for (const auto& a : s.agents) {
    for (const Vec2& p : {a.start, a.target}) {
      CHECK(std::abs(p.x()) <= 300 - kR);
      CHECK(std::abs(p.y()) <= 300 - kR);
    }
  }
  std::vector<Vec2> starts, targets;
  for (const auto& a : s.agents) {
    starts.push_back(a.start);
    targets.push_back(a.target);
  }
  CHECK(min_pair(starts) >= 2 * kR + 1.0);
  // arrived agents must leave a passable gap between them
  CHECK(min_pair(targets) >= 4 * kR + 1.0);
}

TEST_CASE("single crowd agent") {
  const auto s = lac::gen_crowd(1, 600, kR, 3, 1.0, 41.0);
  REQUIRE(s.agents.size() == 1);
}

TEST_CASE("overfull crowd reports its achieved density") {
  try {
    lac::gen_crowd(200, 200, kR, 1, 1.0, 21.0);
    FAIL("expected a ScenarioError");
  } catch (const lac::ScenarioError& e) {
    CHECK(std::string(e.what()).find("density") != std::string::npos);
  }
  CHECK_THROWS_AS(lac::gen_crowd(2, 600, kR, 1, 1.0, 15.0), lac::ScenarioError);
}

TEST_CASE("custom layouts are checked for separation") {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::custom;
  spec.tasks = {{Vec2(0, 0), Vec2(100, 0), 0}, {Vec2(15, 0), Vec2(0, 100), 0}};
  spec.agents = 2;
  CHECK_THROWS_AS(lac::generate(spec, kR), lac::ScenarioError);
  spec.tasks[1].start = Vec2(30, 0);
  CHECK(lac::generate(spec, kR).agents.size() == 2);
  spec.tasks[1].target = Vec2(110, 0);
  CHECK_THROWS_AS(lac::generate(spec, kR), lac::ScenarioError);
}
