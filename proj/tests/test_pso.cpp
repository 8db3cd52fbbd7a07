#include "doctest.h"

#include "aqpe/phase.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/pso.hpp"
#include "aqpe/rng.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

using namespace aqpe;

namespace {

EvalConfig small_frozen_cfg(std::size_t n) {
  EvalConfig cfg = make_eval_config(n);
  cfg.k_instances = 100;
  cfg.m_repeats = 2;
  cfg.mode = EvalMode::Frozen;
  cfg.eval_seed = 99;
  return cfg;
}

PsoSwarm tiny_swarm() {
  PsoSwarm s;
  s.positions = {{1.0, 1.0}, {2.0, 2.0}};
  s.velocities = {{0.0, 0.0}, {0.0, 0.0}};
  s.pbest_pos = {{6.0, 6.0}, {2.0, 2.0}};
  s.pbest_fit = {1.0, 2.0};
  s.gbest_pos = {6.0, 6.0};
  s.gbest_fit = 1.0;
  return s;
}

}  // namespace

TEST_CASE("velocity clamp schedule") {
  const double v0 = 0.2;
  CHECK(vmax_schedule(v0, 0, 50) == doctest::Approx(v0).epsilon(1e-15));
  // at the end of the budget the linear decay leaves v0/(G+1), still above
  // the default one-percent floor
  CHECK(vmax_schedule(v0, 50, 50) == doctest::Approx(v0 / 51.0).epsilon(1e-12));
  // a higher floor takes over instead
  CHECK(vmax_schedule(v0, 50, 50, 0.5) == doctest::Approx(0.1).epsilon(1e-15));
  double prev = vmax_schedule(v0, 0, 50);
  for (std::size_t g = 1; g <= 50; ++g) {
    const double cur = vmax_schedule(v0, g, 50);
    CHECK(cur <= prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
}

TEST_CASE("velocity update pinned examples") {
  PsoParams params;
  SUBCASE("pull toward a distant personal best saturates the clamp") {
    PsoSwarm s = tiny_swarm();
    params.alpha = 1.0;
    params.beta = 0.0;
    auto v = pso_velocity_update(s, 0, params, 0.2, 1.0, 0.5);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == 0.2);  // 0 + 1*1*(6-1) = 5, clamped to vmax
    CHECK(v[1] == 0.2);
  }
  SUBCASE("negative pull saturates the lower clamp") {
    PsoSwarm s = tiny_swarm();
    s.pbest_pos[0] = {-4.0, -4.0};
    params.alpha = 1.0;
    params.beta = 0.0;
    auto v = pso_velocity_update(s, 0, params, 0.2, 1.0, 0.5);
    CHECK(v[0] == -0.2);
  }
  SUBCASE("a particle sitting at both bests with zero velocity stays put") {
    PsoSwarm s = tiny_swarm();
    s.positions[0] = {6.0, 6.0};
    auto v = pso_velocity_update(s, 0, params, 0.2, 0.7, 0.3);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }
  SUBCASE("zero coefficients leave the velocity unchanged up to the clamp") {
    PsoSwarm s = tiny_swarm();
    s.velocities[0] = {0.15, -0.05};
    params.alpha = 0.0;
    params.beta = 0.0;
    auto v = pso_velocity_update(s, 0, params, 0.2, 0.9, 0.9);
    CHECK(v[0] == 0.15);
    CHECK(v[1] == -0.05);
  }
  SUBCASE("in-range linear combination is exact") {
    PsoSwarm s = tiny_swarm();
    // v = 0 + 0.8*0.1*(6-1) + 0.8*0.05*(6-1) = 0.4 + 0.2 -> clamped at 0.3
    auto v = pso_velocity_update(s, 0, params, 0.3, 0.1, 0.05);
    CHECK(v[0] == doctest::Approx(0.3).epsilon(1e-15));
    auto v2 = pso_velocity_update(s, 0, params, 10.0, 0.1, 0.05);
    CHECK(v2[0] == doctest::Approx(0.6).epsilon(1e-14));
  }
  SUBCASE("drawing variant consumes exactly two uniforms per particle") {
    PsoSwarm s = tiny_swarm();
    RngStream rng = RngStream::from_seed(12);
    (void)pso_velocity_update(s, 0, params, 0.2, rng);
    CHECK(rng.counter == 2);
  }
}

TEST_CASE("position update pinned examples") {
  SUBCASE("wraps around the circle") {
    auto x = pso_position_update({6.2}, {0.2}, 1.0);
    CHECK(x[0] == doctest::Approx(6.4 - kTwoPi).epsilon(1e-12));
  }
  SUBCASE("damped step") {
    auto x = pso_position_update({1.0}, {0.1}, 0.8);
    CHECK(x[0] == doctest::Approx(1.08).epsilon(1e-15));
  }
  SUBCASE("zero damping freezes the particle") {
    auto x = pso_position_update({1.0, 5.5}, {0.2, -0.1}, 0.0);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 5.5);
  }
  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS((void)pso_position_update({1.0}, {0.1, 0.2}, 1.0), std::domain_error);
  }
}

TEST_CASE("swarm initialization invariants") {
  PsoParams params;
  params.population = 10;
  params.v_max0 = 0.2;
  EvalConfig cfg = small_frozen_cfg(4);
  RngStream a = RngStream::from_seed(3);
  RngStream b = RngStream::from_seed(3);
  PsoSwarm sa = pso_init(params, 4, cfg, a);
  PsoSwarm sb = pso_init(params, 4, cfg, b);
  CHECK(sa.positions == sb.positions);
  CHECK(sa.velocities == sb.velocities);
  CHECK(sa.pbest_fit == sb.pbest_fit);
  REQUIRE(sa.positions.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (double v : sa.positions[i]) {
      CHECK(v >= 0.0);
      CHECK(v < kTwoPi);
    }
    for (double v : sa.velocities[i]) {
      CHECK(std::fabs(v) <= params.v_max0);
    }
    CHECK(sa.pbest_pos[i] == sa.positions[i]);
    CHECK(sa.gbest_fit <= sa.pbest_fit[i]);
  }
  // gbest is one of the particles' bests
  bool found = false;
  for (std::size_t i = 0; i < 10; ++i)
    if (sa.pbest_pos[i] == sa.gbest_pos && sa.pbest_fit[i] == sa.gbest_fit) found = true;
  CHECK(found);
  SUBCASE("invalid parameters are rejected") {
    PsoParams bad = params;
    bad.population = 1;
    RngStream s = RngStream::from_seed(1);
    CHECK_THROWS_AS((void)pso_init(bad, 4, cfg, s), std::domain_error);
    bad = params;
    bad.v_max0 = 0.0;
    CHECK_THROWS_AS((void)pso_init(bad, 4, cfg, s), std::domain_error);
  }
}

TEST_CASE("manual swarm loop respects the decaying clamp") {
  PsoParams params;
  params.population = 6;
  params.max_generations = 10;
  EvalConfig cfg = small_frozen_cfg(3);
  cfg.k_instances = 20;
  cfg.m_repeats = 1;
  RngStream rng = RngStream::from_seed(44);
  PsoSwarm swarm = pso_init(params, 3, cfg, rng);
  for (std::size_t g = 0; g < params.max_generations; ++g) {
    const double vmax =
        vmax_schedule(params.v_max0, g, params.max_generations, params.v_max_floor_frac);
    for (std::size_t i = 0; i < swarm.positions.size(); ++i) {
      swarm.velocities[i] = pso_velocity_update(swarm, i, params, vmax, rng);
      swarm.positions[i] = pso_position_update(swarm.positions[i], swarm.velocities[i], params.w);
      for (double v : swarm.velocities[i]) CHECK(std::fabs(v) <= vmax);
      for (double x : swarm.positions[i]) {
        CHECK(x >= 0.0);
        CHECK(x < kTwoPi);
      }
    }
  }
}

TEST_CASE("zero-generation training returns the mean of the fresh swarm") {
  PsoParams params;
  params.population = 7;
  params.max_generations = 0;
  EvalConfig cfg = small_frozen_cfg(3);
  TrainResult res = pso_train(params, cfg, RngStream::from_seed(29));
  RngStream replay = RngStream::from_seed(29);
  PsoSwarm swarm = pso_init(params, 3, cfg, replay);
  for (std::size_t j = 0; j < 3; ++j) {
    double m = 0.0;
    for (const auto& row : swarm.positions) m += row[j];
    m = canonical_phase(m / static_cast<double>(swarm.positions.size()));
    CHECK(res.policy[j] == m);
  }
  CHECK(res.generations == 0);
  CHECK(res.trace.size() == 1);
  CHECK(res.best_member == swarm.gbest_pos);
  CHECK(res.best_fit == swarm.gbest_fit);
}

TEST_CASE("swarm-best fitness is exactly non-increasing even with fresh scoring") {
  PsoParams params;
  params.population = 8;
  params.max_generations = 12;
  params.convergence_threshold = 0.0;
  EvalConfig cfg = small_frozen_cfg(4);
  for (EvalMode mode : {EvalMode::Frozen, EvalMode::Fresh}) {
    cfg.mode = mode;
    TrainResult res = pso_train(params, cfg, RngStream::from_seed(13));
    CHECK(res.generations == 12);
    REQUIRE(res.trace.size() == 13);
    for (std::size_t g = 1; g < res.trace.size(); ++g)
      CHECK(res.trace[g].best_fit <= res.trace[g - 1].best_fit);
    CHECK(res.best_fit == res.trace.back().best_fit);
    for (const auto& row : res.final_members)
      for (double v : row) {
        CHECK(v >= 0.0);
        CHECK(v < kTwoPi);
      }
  }
}

TEST_CASE("no social pull means no convergence") {
  PsoParams params;
  params.alpha = 0.8;
  params.beta = 0.0;
  params.population = 20;
  params.max_generations = 50;
  EvalConfig cfg = make_eval_config(10);
  cfg.k_instances = 500;
  cfg.m_repeats = 3;
  cfg.mode = EvalMode::Frozen;
  cfg.eval_seed = 2024;
  TrainResult res = pso_train(params, cfg, RngStream::from_seed(5));
  CHECK(res.terminal_l > 0.1256);
  CHECK_FALSE(res.converged);
  CHECK(res.generations == 50);
}
