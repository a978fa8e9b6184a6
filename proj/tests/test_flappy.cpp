#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctxskill/env/flappy.hpp"

using namespace ctxskill::flappy;

namespace {

// Scripted reference pilot used as a solvability oracle: tracks a desired
// vertical velocity toward the gap center of the nearest touchable pipe and
// coasts horizontally when approaching a pipe misaligned. Tuned on base
// physics only.
FlappyAction scripted_pilot(const FlappyState& st) {
  double target = 256;
  double dx_left = 1e9;
  for (const Pipe& p : st.pipes) {
    if (p.x_left + FlappyEnv::kPipeWidth >=
        FlappyEnv::kAgentX - FlappyEnv::kAgentRadius) {
      target = 0.5 * (p.gap_top + p.gap_bottom);
      dx_left = p.x_left - (FlappyEnv::kAgentX + FlappyEnv::kAgentRadius);
      break;
    }
  }
  const double err = target - st.y;
  const double vy_des = std::clamp(0.15 * err, -8.0, 8.0);
  FlappyAction a;
  a.up = (st.vy + 1.0) - vy_des >= 6.0;
  a.fwd = st.vx < 1.0 && !(dx_left < 50.0 && std::abs(err) > 15.0);
  return a;
}

}  // namespace

TEST_CASE("reset is deterministic and uses the documented geometry") {
  FlappyEnv a(FlappyParams{}, 7);
  FlappyEnv b(FlappyParams{}, 7);
  REQUIRE(a.state().pipes.size() == 25);
  for (std::size_t i = 0; i < a.state().pipes.size(); ++i) {
    CHECK(a.state().pipes[i].x_left == b.state().pipes[i].x_left);
    CHECK(a.state().pipes[i].gap_top == b.state().pipes[i].gap_top);
    CHECK(a.state().pipes[i].x_left == 300.0 + 180.0 * i);
    CHECK(a.state().pipes[i].gap_bottom - a.state().pipes[i].gap_top ==
          doctest::Approx(140.0).epsilon(1e-12));
  }
  CHECK(a.state().y == 256.0);
  CHECK(a.state().vx == 2.0);
  CHECK(a.state().vy == 0.0);
  CHECK(a.observe()[0] == 0.5);
}

TEST_CASE("gap centers stay inside [120, 392] across 10^4 seeds") {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    FlappyEnv env(FlappyParams{}, seed);
    for (const Pipe& p : env.state().pipes) {
      const double center = 0.5 * (p.gap_top + p.gap_bottom);
      REQUIRE(center >= 120.0);
      REQUIRE(center <= 392.0);
    }
  }
}

TEST_CASE("step follows the documented update order") {
  SUBCASE("glide from rest: gravity only") {
    FlappyEnv env(FlappyParams{}, 1);  // y=256, vx=2, vy=0
    env.step({false, false});
    CHECK(env.state().vy == 1.0);
    CHECK(env.state().y == 257.0);
    CHECK(env.state().vx == 2.0 * 0.9);
  }
  SUBCASE("up+fwd from the start state") {
    FlappyEnv env(FlappyParams{}, 1);
    env.step({true, true});
    CHECK(env.state().vy == -11.0);  // -12 flap + 1 gravity
    CHECK(env.state().y == 245.0);
    CHECK(env.state().vx == (2.0 + 5.0) * 0.9);
  }
  SUBCASE("fwd impulse then decay reproduces (vx + fwd) * 0.9") {
    FlappyEnv env(FlappyParams{}, 1);
    env.step({false, true});
    const double vx_before = env.state().vx;
    env.step({false, true});
    CHECK(env.state().vx == (vx_before + 5.0) * 0.9);
  }
  SUBCASE("zero drag never slows gliding") {
    FlappyParams p;
    p.drag = 0.0;
    FlappyEnv env(p, 1);
    double prev = env.state().vx;
    for (int t = 0; t < 50; ++t) {
      env.step({false, false});
      CHECK(env.state().vx >= prev);
      prev = env.state().vx;
    }
  }
  SUBCASE("vy clamps at +-16 and boundary clamping is penalized") {
    FlappyEnv env(FlappyParams{}, 1);
    for (int t = 0; t < 60 && !env.state().done; ++t) env.step({false, false});
    CHECK(env.state().vy == 16.0);
    CHECK(env.state().y == 512.0);
    CHECK(env.state().boundary_ticks > 0);
  }
}

TEST_CASE("observation components and endpoints") {
  FlappyEnv env(FlappyParams{}, 3);
  const Eigen::VectorXd obs = env.observe();
  REQUIRE(obs.size() == 6);
  CHECK(obs[0] == 0.5);
  CHECK(obs[1] == (2.0 + 16.0) / 32.0);
  CHECK(obs[2] == 0.5);  // vy = 0
  CHECK(obs[3] == doctest::Approx(280.0 / 512.0));  // right edge 360 - 80
  const Pipe& p = env.state().pipes.front();
  CHECK(obs[4] == p.gap_top / 512.0);
  CHECK(obs[5] == (512.0 - p.gap_bottom) / 512.0);
  for (int k = 0; k < 6; ++k) {
    CHECK(obs[k] >= 0.0);
    CHECK(obs[k] <= 1.0);
  }
}

TEST_CASE("observation saturates at the vy endpoints") {
  FlappyEnv env(FlappyParams{}, 1);
  for (int t = 0; t < 5; ++t) env.step({true, false});
  CHECK(env.state().vy == -16.0);
  CHECK(env.observe()[2] == 0.0);
}

TEST_CASE("no remaining pipes saturates the distance component") {
  FlappyEnv env(FlappyParams{}, 5);
  while (!env.state().done) env.step(scripted_pilot(env.state()));
  REQUIRE(env.state().pipes_passed == 25);  // all pipes consumed
  const Eigen::VectorXd obs = env.observe();
  CHECK(obs[3] == 1.0);
  CHECK(obs[4] == 0.0);
  CHECK(obs[5] == 0.0);
}

TEST_CASE("decode_action thresholds at zero") {
  CHECK(decode_action({0.0, 0.0}).up == false);
  CHECK(decode_action({0.0, 0.0}).fwd == false);
  CHECK(decode_action({0.5, -0.5}).up == true);
  CHECK(decode_action({0.5, -0.5}).fwd == false);
  CHECK(decode_action({0.9, 0.9}).up == true);
  CHECK(decode_action({0.9, 0.9}).fwd == true);
}

TEST_CASE("perpetual glide falls to the ground and scores zero pipes") {
  FlappyEnv env(FlappyParams{}, 11);
  while (!env.state().done) env.step({false, false});
  CHECK(env.state().y == 512.0);
  CHECK(env.objectives()[0] >= 5.0);  // boundary penalty accrued
  CHECK(env.objectives()[1] == 0.0);
  CHECK(env.state().tick == FlappyEnv::kTickCap);
}

TEST_CASE("pipe accounting: passed + hit-through + remaining = 25") {
  SUBCASE("ground-scraper consumes every pipe") {
    FlappyEnv env(FlappyParams{}, 13);
    while (!env.state().done) env.step({false, true});
    int uncrossed = 0;
    for (const Pipe& p : env.state().pipes) uncrossed += p.crossed ? 0 : 1;
    CHECK(env.state().pipes_passed + env.state().pipes_hit_through + uncrossed ==
          25);
    CHECK(env.state().pipes_passed + env.state().pipes_hit_through == 25);
  }
  SUBCASE("stalled glide leaves pipes unconsumed at timeout") {
    FlappyEnv env(FlappyParams{}, 13);
    while (!env.state().done) env.step({false, false});
    int uncrossed = 0;
    for (const Pipe& p : env.state().pipes) uncrossed += p.crossed ? 0 : 1;
    CHECK(env.state().pipes_passed + env.state().pipes_hit_through + uncrossed ==
          25);
    CHECK(uncrossed > 0);
  }
}

TEST_CASE("episodes are bit-deterministic given params, seed and actions") {
  auto trace = [](std::uint64_t seed) {
    FlappyParams params;
    params.gravity = 1.1;
    params.flap = -10.0;
    FlappyEnv env(params, seed);
    std::vector<double> out;
    while (!env.state().done) {
      env.step(scripted_pilot(env.state()));
      out.push_back(env.state().y);
      out.push_back(env.state().vx);
      out.push_back(env.state().vy);
    }
    return out;
  };
  CHECK(trace(21) == trace(21));
}

TEST_CASE("the task is solvable: scripted pilot scores 25 pipes, 0 hits") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FlappyEnv env(FlappyParams{}, seed);
    while (!env.state().done) env.step(scripted_pilot(env.state()));
    CHECK(env.state().pipes_passed == 25);
    CHECK(env.state().hit_ticks == 0);
    CHECK(env.state().boundary_ticks == 0);
    CHECK(env.objectives()[0] == 0.0);
    CHECK(env.objectives()[1] == 25.0);
  }
}

TEST_CASE("stepping a finished episode is a contract violation") {
  FlappyEnv env(FlappyParams{}, 2);
  while (!env.state().done) env.step({false, false});
  CHECK_THROWS_AS(env.step({false, false}), std::logic_error);
}
