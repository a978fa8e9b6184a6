#ifndef CTXSKILL_ENV_LANDER_HPP
#define CTXSKILL_ENV_LANDER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ctxskill::lander {

// Physical task parameters. Order in flat vectors: main, side, mass.
struct LanderParams {
  double main_thrust = 20.0;
  double side_thrust = 1.0;
  double mass = 8.0;
};

enum class LanderAction { Noop = 0, LeftEngine = 1, MainEngine = 2, RightEngine = 3 };

// Highest raw output wins; ties break toward the lower index.
LanderAction decode_action(const Eigen::VectorXd& raw);

enum class Terminal { None, Crash, Rest, Timeout };

struct LanderState {
  double x = 0, y = 1.0;
  double vx = 0, vy = 0;
  double theta = 0;  // wrapped to (-pi, pi]
  double omega = 0;
  bool leg_left = false, leg_right = false;
  double fuel_spent = 0;
  int tick = 0;
  Terminal terminal = Terminal::None;
  int rest_ticks = 0;     // consecutive settled ticks
  double total_reward = 0;
};

// Potential term of the reward: -100*dist_to_pad - 100*speed - 100*|theta|
// + 10 per touching leg. Pad center is the origin.
double shaping(const LanderState& s);

class LanderEnv {
 public:
  static constexpr double kGravity = 0.006;
  static constexpr double kMainScale = 0.004;
  static constexpr double kSideScale = 0.004;
  static constexpr double kSideTorque = 0.003;
  static constexpr double kCrashSpeed = 0.02;
  static constexpr double kCrashTilt = 0.35;
  static constexpr double kLegX = 0.05, kLegY = -0.06;
  static constexpr double kBodyRadius = 0.03;
  static constexpr double kPadHalfWidth = 0.2;
  static constexpr double kContactEps = 1e-3;
  static constexpr double kRestSpeed = 0.005;
  static constexpr int kRestTicks = 10;
  static constexpr double kFuelMain = 0.3, kFuelSide = 0.03;
  static constexpr double kTerminalBonus = 100.0;
  static constexpr double kVelObsScale = 10.0;
  static constexpr int kTickCap = 1000;

  LanderEnv(const LanderParams& params, std::uint64_t seed);

  // [x, y, 10*vx, 10*vy, theta, 10*omega, leg_left, leg_right]
  Eigen::VectorXd observe() const;

  // Advances one tick; returns the per-tick reward delta (shaping difference
  // minus fuel, plus the terminal bonus on the final tick). Throws
  // std::logic_error if the episode is done.
  double step(LanderAction action);

  bool done() const { return state_.terminal != Terminal::None || state_.tick >= kTickCap; }
  const LanderState& state() const { return state_; }
  const LanderParams& params() const { return params_; }

  // Raw objectives: (total_reward, terminal tick). Senses: maximize reward,
  // minimize time. f1 is the tick cap when no terminal event occurred.
  Eigen::Vector2d objectives() const;

 private:
  void resolve_contact(double vy_at_impact);

  LanderParams params_;
  LanderState state_;
};

// Recomputes (f0, f1) from a recorded trace of states and actions; the last
// entry must be terminal (or the trace is treated as a timeout). Independent
// of the env's online accumulation except for the shared shaping formula.
struct TraceEntry {
  LanderState state;       // state after the step
  LanderAction action;     // action applied on that step
};
Eigen::Vector2d reward_and_score(const LanderState& initial,
                                 const std::vector<TraceEntry>& trace);

}  // namespace ctxskill::lander

#endif
