#include "ctxskill/env/lander.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctxskill/rng.hpp"

namespace ctxskill::lander {

namespace {

double wrap_angle(double a) {
  // Wrap to (-pi, pi].
  const double pi = std::numbers::pi;
  a = std::fmod(a, 2 * pi);
  if (a <= -pi) a += 2 * pi;
  if (a > pi) a -= 2 * pi;
  return a;
}

double fuel_cost(LanderAction a) {
  switch (a) {
    case LanderAction::MainEngine: return LanderEnv::kFuelMain;
    case LanderAction::LeftEngine:
    case LanderAction::RightEngine: return LanderEnv::kFuelSide;
    default: return 0.0;
  }
}

double terminal_bonus(Terminal t) {
  if (t == Terminal::Rest) return LanderEnv::kTerminalBonus;
  if (t == Terminal::Crash) return -LanderEnv::kTerminalBonus;
  return 0.0;
}

struct LegHeights {
  double left, right;
};

LegHeights leg_heights(const LanderState& s) {
  const double sin_t = std::sin(s.theta), cos_t = std::cos(s.theta);
  // World y of the body-frame leg tips (+-kLegX, kLegY).
  const double left = s.y + (-LanderEnv::kLegX) * sin_t + LanderEnv::kLegY * cos_t;
  const double right = s.y + (LanderEnv::kLegX) * sin_t + LanderEnv::kLegY * cos_t;
  return {left, right};
}

}  // namespace

LanderAction decode_action(const Eigen::VectorXd& raw) {
  int best = 0;
  for (int i = 1; i < raw.size(); ++i)
    if (raw[i] > raw[best]) best = i;
  return static_cast<LanderAction>(best);
}

double shaping(const LanderState& s) {
  const double dist = std::hypot(s.x, s.y);
  const double speed = std::hypot(s.vx, s.vy);
  return -100.0 * dist - 100.0 * speed - 100.0 * std::abs(s.theta) +
         10.0 * (s.leg_left ? 1.0 : 0.0) + 10.0 * (s.leg_right ? 1.0 : 0.0);
}

LanderEnv::LanderEnv(const LanderParams& params, std::uint64_t seed)
    : params_(params) {
  Rng rng(seed);
  state_.x = rng.uniform(-0.3, 0.3);
  state_.y = 1.0;
  state_.vx = rng.uniform(-0.005, 0.005);
  state_.vy = rng.uniform(-0.005, 0.0);
  state_.omega = rng.uniform(-0.003, 0.003);
}

Eigen::VectorXd LanderEnv::observe() const {
  Eigen::VectorXd obs(8);
  obs << state_.x, state_.y, kVelObsScale * state_.vx, kVelObsScale * state_.vy,
      state_.theta, kVelObsScale * state_.omega,
      state_.leg_left ? 1.0 : 0.0, state_.leg_right ? 1.0 : 0.0;
  return obs;
}

void LanderEnv::resolve_contact(double) {
  // Soft touchdown: settle onto the pad. Positions are corrected so legs do
  // not sink; velocities and tilt decay deterministically.
  const LegHeights legs = leg_heights(state_);
  const double lowest = std::min(legs.left, legs.right);
  if (lowest < 0) state_.y -= lowest;
  state_.vy = 0;
  state_.vx *= 0.5;
  state_.omega = 0;
  state_.theta *= 0.8;
}

double LanderEnv::step(LanderAction action) {
  if (done()) throw std::logic_error("step() on a finished episode");

  const double prev_shaping = shaping(state_);

  // Accelerations. Body-up is (-sin theta, cos theta); body-right is
  // (cos theta, sin theta). The left engine pushes right and spins one way,
  // the right engine mirrors it.
  const double sin_t = std::sin(state_.theta), cos_t = std::cos(state_.theta);
  double ax = 0, ay = -kGravity, alpha = 0;
  if (action == LanderAction::MainEngine) {
    const double a = params_.main_thrust / params_.mass * kMainScale;
    ax += a * -sin_t;
    ay += a * cos_t;
  } else if (action == LanderAction::LeftEngine ||
             action == LanderAction::RightEngine) {
    // Side thrusters sit above the center of mass: the left engine pushes
    // the craft right (+body-x) while tilting it clockwise, so the induced
    // main-thrust component reinforces the lateral push.
    const double dir = action == LanderAction::LeftEngine ? 1.0 : -1.0;
    const double a = params_.side_thrust / params_.mass * kSideScale;
    ax += dir * a * cos_t;
    ay += dir * a * sin_t;
    alpha -= dir * params_.side_thrust / params_.mass * kSideTorque;
  }

  // Symplectic update: velocities first, then positions.
  state_.vx += ax;
  state_.vy += ay;
  state_.x += state_.vx;
  state_.y += state_.vy;
  state_.omega += alpha;
  state_.theta = wrap_angle(state_.theta + state_.omega);

  const double vy_at_impact = state_.vy;

  // Contact and crash resolution.
  if (state_.y <= kBodyRadius) {
    state_.terminal = Terminal::Crash;  // body (non-leg) contact
  } else {
    const LegHeights legs = leg_heights(state_);
    if (std::min(legs.left, legs.right) <= 0) {
      if (std::abs(vy_at_impact) > kCrashSpeed ||
          std::abs(state_.theta) > kCrashTilt) {
        state_.terminal = Terminal::Crash;
      } else {
        resolve_contact(vy_at_impact);
      }
    }
  }

  // Leg flags from geometry.
  {
    const LegHeights legs = leg_heights(state_);
    state_.leg_left = legs.left <= kContactEps;
    state_.leg_right = legs.right <= kContactEps;
  }

  state_.tick++;

  if (state_.terminal == Terminal::None) {
    const bool settled = state_.leg_left && state_.leg_right &&
                         std::hypot(state_.vx, state_.vy) < kRestSpeed;
    state_.rest_ticks = settled ? state_.rest_ticks + 1 : 0;
    if (state_.rest_ticks >= kRestTicks) state_.terminal = Terminal::Rest;
  }
  if (state_.terminal == Terminal::None && state_.tick >= kTickCap)
    state_.terminal = Terminal::Timeout;

  const double fuel = fuel_cost(action);
  state_.fuel_spent += fuel;
  const double delta = shaping(state_) - prev_shaping - fuel +
                       terminal_bonus(state_.terminal);
  state_.total_reward += delta;
  return delta;
}

Eigen::Vector2d LanderEnv::objectives() const {
  const double f1 = state_.terminal == Terminal::Crash ||
                            state_.terminal == Terminal::Rest
                        ? static_cast<double>(state_.tick)
                        : static_cast<double>(kTickCap);
  return {state_.total_reward, f1};
}

Eigen::Vector2d reward_and_score(const LanderState& initial,
                                 const std::vector<TraceEntry>& trace) {
  double total = 0;
  double prev = shaping(initial);
  for (const TraceEntry& e : trace) {
    const double cur = shaping(e.state);
    total += cur - prev - fuel_cost(e.action) + terminal_bonus(e.state.terminal);
    prev = cur;
  }
  double f1 = static_cast<double>(LanderEnv::kTickCap);
  if (!trace.empty()) {
    const Terminal t = trace.back().state.terminal;
    if (t == Terminal::Crash || t == Terminal::Rest)
      f1 = static_cast<double>(trace.back().state.tick);
  }
  return {total, f1};
}

}  // namespace ctxskill::lander
