#include "ctxskill/env/flappy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctxskill::flappy {

FlappyAction decode_action(const Eigen::Vector2d& raw) {
  return {raw[0] > 0.0, raw[1] > 0.0};
}

FlappyEnv::FlappyEnv(const FlappyParams& params, std::uint64_t seed)
    : params_(params) {
  Rng rng(seed);
  state_.pipes.reserve(kPipeCount);
  for (int i = 0; i < kPipeCount; ++i) {
    const double center = rng.uniform(kGapCenterMin, kGapCenterMax);
    Pipe p;
    p.x_left = kFirstPipeX + kPipeSpacing * i;
    p.gap_top = center - kGapHeight / 2;
    p.gap_bottom = p.gap_top + kGapHeight;
    state_.pipes.push_back(p);
  }
}

Eigen::VectorXd FlappyEnv::observe() const {
  Eigen::VectorXd obs(6);
  obs[0] = state_.y / kWorldHeight;
  obs[1] = (state_.vx + kVyClamp) / (2 * kVyClamp);
  obs[2] = (state_.vy + kVyClamp) / (2 * kVyClamp);
  const Pipe* closest = nullptr;
  for (const Pipe& p : state_.pipes) {
    if (!p.crossed) {
      closest = &p;
      break;
    }
  }
  if (closest) {
    const double dx = closest->x_left + kPipeWidth - kAgentX;
    obs[3] = std::clamp(dx / kWorldHeight, 0.0, 1.0);
    obs[4] = closest->gap_top / kWorldHeight;
    obs[5] = (kWorldHeight - closest->gap_bottom) / kWorldHeight;
  } else {
    obs[3] = 1.0;
    obs[4] = 0.0;
    obs[5] = 0.0;
  }
  return obs;
}

bool FlappyEnv::overlaps_pipe(const Pipe& p) const {
  // Disc at (kAgentX, y) vs the two axis-aligned pipe rectangles.
  const double cx = std::clamp(kAgentX, p.x_left, p.x_left + kPipeWidth);
  const double dx = kAgentX - cx;
  auto hits_rect = [&](double y_lo, double y_hi) {
    const double cy = std::clamp(state_.y, y_lo, y_hi);
    const double dy = state_.y - cy;
    return dx * dx + dy * dy <= kAgentRadius * kAgentRadius;
  };
  return hits_rect(0.0, p.gap_top) || hits_rect(p.gap_bottom, kWorldHeight);
}

bool FlappyEnv::step(const FlappyAction& action) {
  if (state_.done) throw std::logic_error("step() on a finished episode");

  // 1-2: vertical impulses, then gravity, then clamp.
  if (action.up) state_.vy += params_.flap;
  state_.vy += 1.0 * params_.gravity;
  state_.vy = std::clamp(state_.vy, -kVyClamp, kVyClamp);

  // 3-4: horizontal impulse, then drag decay, then clamp.
  if (action.fwd) state_.vx += params_.fwd;
  state_.vx *= 1.0 - 0.1 * params_.drag;
  state_.vx = std::clamp(state_.vx, 0.0, kVxMax);

  // 5: integrate vertically; clamping at either boundary is penalized.
  state_.y += state_.vy;
  if (state_.y < 0.0 || state_.y > kWorldHeight) {
    state_.y = std::clamp(state_.y, 0.0, kWorldHeight);
    state_.boundary_ticks++;
  }

  // 6: world scrolls left under the agent.
  for (Pipe& p : state_.pipes) p.x_left -= state_.vx;

  // 7: collision accrual and pipe consumption.
  bool hit = false;
  for (Pipe& p : state_.pipes) {
    if (p.x_left > kAgentX + kAgentRadius) break;
    const bool overlap = overlaps_pipe(p);
    hit = hit || overlap;
    if (!p.crossed && p.x_left + kPipeWidth < kAgentX) {
      p.crossed = true;
      if (overlap)
        state_.pipes_hit_through++;
      else
        state_.pipes_passed++;
    }
  }
  if (hit) state_.hit_ticks++;

  // Drop pipes that can no longer touch the agent.
  while (!state_.pipes.empty() &&
         state_.pipes.front().x_left + kPipeWidth < kAgentX - kAgentRadius) {
    state_.pipes.erase(state_.pipes.begin());
  }

  state_.tick++;
  const int consumed = state_.pipes_passed + state_.pipes_hit_through;
  if (state_.tick >= kTickCap || consumed >= kPipeCount) state_.done = true;
  return state_.done;
}

Eigen::Vector2d FlappyEnv::objectives() const {
  return {static_cast<double>(state_.hit_ticks + 5 * state_.boundary_ticks),
          static_cast<double>(state_.pipes_passed)};
}

}  // namespace ctxskill::flappy
