#ifndef CTXSKILL_ENV_FLAPPY_HPP
#define CTXSKILL_ENV_FLAPPY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "ctxskill/rng.hpp"

namespace ctxskill::flappy {

// Physical task parameters. Order in flat vectors: flap, fwd, gravity, drag.
struct FlappyParams {
  double flap = -12.0;   // upward impulse (negative = up)
  double fwd = 5.0;      // forward impulse
  double gravity = 1.0;  // per-tick downward acceleration scale
  double drag = 1.0;     // horizontal decay scale
};

struct Pipe {
  double x_left = 0;
  double gap_top = 0;     // y of the gap's upper edge (bottom of top pipe)
  double gap_bottom = 0;  // y of the gap's lower edge (top of bottom pipe)
  bool crossed = false;   // right edge has passed the agent column
};

struct FlappyState {
  double y = 256;  // 0 = ceiling, 512 = ground
  double vx = 2;
  double vy = 0;
  std::vector<Pipe> pipes;
  int pipes_passed = 0;
  int pipes_hit_through = 0;  // consumed while overlapping at the crossing tick
  int hit_ticks = 0;
  int boundary_ticks = 0;
  int tick = 0;
  bool done = false;
};

struct FlappyAction {
  bool up = false;
  bool fwd = false;
};

// up/fwd thresholding of the two raw controller outputs.
FlappyAction decode_action(const Eigen::Vector2d& raw);

class FlappyEnv {
 public:
  static constexpr double kWorldHeight = 512.0;
  static constexpr double kAgentX = 80.0;
  static constexpr double kAgentRadius = 12.0;
  static constexpr double kPipeWidth = 60.0;
  static constexpr double kPipeSpacing = 180.0;
  static constexpr double kFirstPipeX = 300.0;
  static constexpr double kGapHeight = 140.0;
  static constexpr double kGapCenterMin = 120.0;
  static constexpr double kGapCenterMax = 392.0;
  static constexpr double kVyClamp = 16.0;
  static constexpr double kVxMax = 12.0;
  static constexpr int kPipeCount = 25;
  static constexpr int kTickCap = 2400;

  FlappyEnv(const FlappyParams& params, std::uint64_t seed);

  // [y, vx, vy, dx to closest pipe's right edge, top pipe height, bottom
  // pipe height], all normalized to [0, 1].
  Eigen::VectorXd observe() const;

  // Advances one tick. Throws std::logic_error if the episode is done.
  // Returns done.
  bool step(const FlappyAction& action);

  const FlappyState& state() const { return state_; }
  const FlappyParams& params() const { return params_; }

  // Raw objectives: (hits, pipes) = (hit_ticks + 5 * boundary_ticks,
  // pipes_passed). Senses: minimize hits, maximize pipes.
  Eigen::Vector2d objectives() const;

 private:
  bool overlaps_pipe(const Pipe& p) const;

  FlappyParams params_;
  FlappyState state_;
};

}  // namespace ctxskill::flappy

#endif
