#include <doctest.h>

#include <numbers>
#include <random>

#include "lac/cell.hpp"
#include "oracles.hpp"

using lac::AgentSnapshot;
using lac::LacParams;
using lac::Vec2;

namespace {

LacParams default_params() { return {}; }

std::vector<AgentSnapshot> snapshots(const std::vector<oracle::Agent>& agents) {
  std::vector<AgentSnapshot> out;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    out.push_back({static_cast<lac::AgentId>(i), agents[i].p, agents[i].v, 10.0});
  }
  return out;
}

}  // namespace

TEST_CASE("bvc_bound examples") {
  const LacParams p = default_params();
  auto b = lac::bvc_bound(Vec2(0, 0), Vec2(40, 0), p);
  CHECK(b.normal.isApprox(Vec2(1, 0)));
  CHECK(b.slack == doctest::Approx(1000.0));

  b = lac::bvc_bound(Vec2(0, 0), Vec2(20, 0), p);
  CHECK(b.slack == 0.0);

  b = lac::bvc_bound(Vec2(0, 0), Vec2(0, 20.4), p);
  CHECK(b.normal.isApprox(Vec2(0, 1)));
  CHECK(b.slack == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("bvc_bound hard-errors on overlap with both ids") {
  try {
    lac::bvc_bound(Vec2(0, 0), Vec2(15, 0), default_params(), 3, 7);
    FAIL("expected OverlapError");
  } catch (const lac::OverlapError& e) {
    CHECK(e.first() == 3);
    CHECK(e.second() == 7);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("risk_scale examples") {
  const LacParams p = default_params();
  CHECK(lac::risk_scale(1000, Vec2(1, 0), Vec2(0, 0), 40, p) == doctest::Approx(0.4));
  // neighbor retreating at least as fast as the slack: no risk
  CHECK(lac::risk_scale(1000, Vec2(1, 0), Vec2(1000, 0), 40, p) == 1.0);
  CHECK(lac::risk_scale(1000, Vec2(1, 0), Vec2(2000, 0), 40, p) == 1.0);
  // large gap relative to approach within tau clamps at 1
  CHECK(lac::risk_scale(10, Vec2(1, 0), Vec2(0, 0), 40, p) == 1.0);
}

TEST_CASE("safe_half_plane examples") {
  const LacParams p = default_params();
  const AgentSnapshot me{0, Vec2(0, 0), Vec2(0, 0), 10};
  const AgentSnapshot other{1, Vec2(40, 0), Vec2(0, 0), 10};
  const auto plane = lac::safe_half_plane(me, other, p);
  CHECK(plane.bound == doctest::Approx(700.0));
  CHECK(plane.source == 1);

  LacParams no_relax = p;
  no_relax.lambda = 0.0;
  CHECK(lac::safe_half_plane(me, other, no_relax).bound == doctest::Approx(1000.0));

  const auto b = lac::bvc_bound(me.position, other.position, p);
  CHECK(lac::scaled_half_plane(b, 1.0, 0.5, 1).bound == doctest::Approx(1000.0));
}

TEST_CASE("build_cell without neighbors is unconstrained") {
  const LacParams p = default_params();
  const AgentSnapshot me{0, Vec2(0, 0), Vec2(0, 0), 10};
  const auto cell = lac::build_cell(me, Vec2(1000, 0), {}, p);
  REQUIRE(cell.size() == 8);
  for (const auto& a : cell.actions) CHECK(a.norm() == doctest::Approx(50.0));
  CHECK(cell.actions[0].isApprox(Vec2(50, 0)));

  // close target caps the speed so the agent lands exactly
  const auto near = lac::build_cell(me, Vec2(0.3, 0), {}, p);
  CHECK(near.max_speed == doctest::Approx(30.0));
  CHECK((me.position + p.delta * near.actions[0]).isApprox(Vec2(0.3, 0)));
}

TEST_CASE("build_cell worked example with one stationary neighbor") {
  const LacParams p = default_params();
  const AgentSnapshot me{0, Vec2(0, 0), Vec2(0, 0), 10};
  const std::vector<AgentSnapshot> nb{{1, Vec2(20.4, 0), Vec2(0, 0), 10}};
  const auto cell = lac::build_cell(me, Vec2(1000, 0), nb, p);
  CHECK(cell.actions[0].x() == doctest::Approx(14.0).epsilon(1e-12));
  CHECK(cell.actions[0].y() == doctest::Approx(0.0));
  CHECK(cell.actions[2].norm() == doctest::Approx(50.0));
  CHECK(cell.actions[6].norm() == doctest::Approx(50.0));
  // oracle agrees on every action
  const auto plane = oracle::safe_plane(Vec2(0, 0), {Vec2(20.4, 0), Vec2(0, 0)}, 10, 0.01, 0.05, 0.5);
  for (int k = 0; k < 8; ++k) {
    const Vec2 ray = oracle::cell_ray(Vec2(0, 0), Vec2(1000, 0), k, 8, 50, 0.01);
    const double s = oracle::max_feasible_scale(ray, {plane});
    CHECK(cell.actions[k].norm() == doctest::Approx(s * ray.norm()).epsilon(1e-6));
  }
}

TEST_CASE("lambda = 0 makes theta irrelevant") {
  std::mt19937_64 rng(5);
  LacParams p = default_params();
  p.lambda = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto agents = oracle::random_layout(rng, 5, 10, 40, 50);
    const auto snaps = snapshots(agents);
    const Vec2 target(300, -120);
    const auto cell = lac::build_cell(snaps[0], target, std::span(snaps).subspan(1), p);
    std::vector<lac::SafeHalfPlane> unrelaxed;
    for (std::size_t j = 1; j < snaps.size(); ++j) {
      const auto b = lac::bvc_bound(snaps[0].position, snaps[j].position, p);
      unrelaxed.push_back(lac::scaled_half_plane(b, 1.0, p.lambda, snaps[j].id));
    }
    const auto ref = lac::build_cell_from_planes(snaps[0].position, target, unrelaxed, p);
    for (int k = 0; k < 8; ++k) CHECK(cell.actions[k] == ref.actions[k]);
  }
}

TEST_CASE("cell actions match the grid-search oracle") {
  std::mt19937_64 rng(21);
  const LacParams p = default_params();
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> tgt(-400, 400);
  for (int trial = 0; trial < 60; ++trial) {
    const auto agents = oracle::random_layout(rng, count(rng), 10, 35, 50);
    const auto snaps = snapshots(agents);
    const Vec2 target(tgt(rng), tgt(rng));
    const auto cell = lac::build_cell(snaps[0], target, std::span(snaps).subspan(1), p);
    std::vector<oracle::Plane> planes;
    for (std::size_t j = 1; j < agents.size(); ++j) {
      planes.push_back(oracle::safe_plane(agents[0].p, agents[j], 10, 0.01, 0.05, 0.5));
    }
    for (int k = 0; k < 8; ++k) {
      const Vec2 ray = oracle::cell_ray(agents[0].p, target, k, 8, 50, 0.01);
      const double expected = oracle::max_feasible_scale(ray, planes) * ray.norm();
      CHECK(std::abs(cell.actions[k].norm() - expected) <= 1e-6 * std::max(expected, 1.0));
    }
  }
}

TEST_CASE("cell stays inside the unscaled safe domain") {
  std::mt19937_64 rng(22);
  const LacParams p = default_params();
  for (int trial = 0; trial < 200; ++trial) {
    const auto agents = oracle::random_layout(rng, 6, 10, 40, 50);
    const auto snaps = snapshots(agents);
    const auto cell = lac::build_cell(snaps[0], Vec2(500, 500), std::span(snaps).subspan(1), p);
    for (const auto& a : cell.actions) {
      CHECK(a.norm() <= cell.max_speed * (1 + 1e-12));
      for (std::size_t j = 1; j < snaps.size(); ++j) {
        const auto b = lac::bvc_bound(snaps[0].position, snaps[j].position, p);
        CHECK(a.dot(b.normal) <= b.slack * (1 + 1e-12) + 1e-12);
      }
    }
  }
}

TEST_CASE("lowering one theta never lengthens an action") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const LacParams p = default_params();
  for (int trial = 0; trial < 200; ++trial) {
    const auto agents = oracle::random_layout(rng, 4, 10, 30, 50);
    std::vector<lac::BvcBound> bounds;
    std::vector<double> thetas;
    for (std::size_t j = 1; j < agents.size(); ++j) {
      bounds.push_back(lac::bvc_bound(agents[0].p, agents[j].p, p));
      thetas.push_back(0.01 + 0.99 * unit(rng));
    }
    auto cell_with = [&](const std::vector<double>& th) {
      std::vector<lac::SafeHalfPlane> planes;
      for (std::size_t j = 0; j < bounds.size(); ++j) {
        planes.push_back(lac::scaled_half_plane(bounds[j], th[j], p.lambda, 0));
      }
      return lac::build_cell_from_planes(agents[0].p, Vec2(-250, 90), planes, p);
    };
    const auto base = cell_with(thetas);
    auto lowered = thetas;
    lowered[trial % lowered.size()] *= unit(rng);
    const auto tighter = cell_with(lowered);
    for (int k = 0; k < 8; ++k) {
      CHECK(tighter.actions[k].norm() <= base.actions[k].norm() + 1e-12);
    }
  }
}

TEST_CASE("rotating the neighborhood rotates the cell") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  const LacParams p = default_params();
  for (int trial = 0; trial < 200; ++trial) {
    const auto agents = oracle::random_layout(rng, 5, 10, 35, 50);
    const double phi = ang(rng);
    const Vec2 target(200, 75);
    const Vec2 origin = agents[0].p;
    auto snaps = snapshots(agents);
    auto turned = snaps;
    for (auto& s : turned) {
      s.position = origin + lac::rotate_ccw(Vec2(s.position - origin), phi);
      s.velocity = lac::rotate_ccw(s.velocity, phi);
    }
    const Vec2 turned_target = origin + lac::rotate_ccw(Vec2(target - origin), phi);
    const auto a = lac::build_cell(snaps[0], target, std::span(snaps).subspan(1), p);
    const auto b = lac::build_cell(turned[0], turned_target, std::span(turned).subspan(1), p);
    for (int k = 0; k < 8; ++k) {
      CHECK((lac::rotate_ccw(a.actions[k], phi) - b.actions[k]).norm() <= 1e-9);
    }
  }
}

TEST_CASE("neighbor_cutoff examples") {
  LacParams p = default_params();
  CHECK(lac::neighbor_cutoff(p) == doctest::Approx(25.0));
  p.tau = 0.0;
  CHECK(lac::neighbor_cutoff(p) == doctest::Approx(20.0));
  p = default_params();
  p.v_max = 0.0;
  CHECK(lac::neighbor_cutoff(p) == doctest::Approx(20.0));
}

TEST_CASE("neighbors beyond the cutoff never change the cell") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    LacParams p = default_params();
    p.tau = p.delta * (1.0 + 9.0 * unit(rng));
    p.lambda = unit(rng);
    const auto agents = oracle::random_layout(rng, 4, 10, 30, p.v_max);
    auto snaps = snapshots(agents);
    const Vec2 target(400 * unit(rng) - 200, 400 * unit(rng) - 200);
    const auto base = lac::build_cell(snaps[0], target, std::span(snaps).subspan(1), p);

    const double ell = lac::neighbor_cutoff(p);
    const double a = 2 * std::numbers::pi * unit(rng);
    const double dist = ell * (1.0 + unit(rng));
    const double va = 2 * std::numbers::pi * unit(rng);
    AgentSnapshot far{99, snaps[0].position + dist * Vec2(std::cos(a), std::sin(a)),
                      p.v_max * unit(rng) * Vec2(std::cos(va), std::sin(va)), 10};
    snaps.push_back(far);
    const auto with_far = lac::build_cell(snaps[0], target, std::span(snaps).subspan(1), p);
    for (int k = 0; k < 8; ++k) CHECK(base.actions[k] == with_far.actions[k]);
  }
}

TEST_CASE("LacParams validation") {
  LacParams p;
  CHECK_NOTHROW(p.validate());
  p.lambda = 1.5;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("[0, 1]"), std::invalid_argument);
  p = {};
  p.tau = 0.005;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.n_actions = 3;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("configurable action count keeps uniform spacing") {
  LacParams p;
  p.n_actions = 12;
  const AgentSnapshot me{0, Vec2(0, 0), Vec2(0, 0), 10};
  const auto cell = lac::build_cell(me, Vec2(0, 500), {}, p);
  REQUIRE(cell.size() == 12);
  for (int k = 0; k < 12; ++k) {
    const double expected = std::numbers::pi / 2 + 2 * std::numbers::pi * k / 12;
    CHECK(lac::angular_distance(lac::rho(cell.actions[k]), lac::Angle(expected)) <= 1e-9);
  }
}

TEST_CASE("agent at its target cannot build a cell") {
  const AgentSnapshot me{0, Vec2(3, 4), Vec2(0, 0), 10};
  CHECK_THROWS_AS(lac::build_cell(me, Vec2(3, 4), {}, LacParams{}), lac::DomainError);
}
