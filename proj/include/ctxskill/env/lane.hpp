#ifndef CTXSKILL_ENV_LANE_HPP
#define CTXSKILL_ENV_LANE_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

namespace ctxskill::lane {

// Actuation gain scales. Order in flat vectors: alpha, beta.
struct LaneParams {
  double alpha = 1.0;  // steering gain scale
  double beta = 1.0;   // accelerating torque scale
};

struct Track {
  std::string name;
  std::vector<Eigen::Vector2d> points;  // centerline polyline, metres
  double half_width = 3.0;
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
  double target_radius = 5.0;
};

Track load_track_json(const std::string& path);
void save_track_json(const std::string& path, const Track& track);

// Fixture tracks. The training track is a gentle S-curve (|curvature| <=
// 0.02 / m); the evaluation track has hairpin segments up to 0.06 / m.
Track make_training_track();
Track make_eval_track();

// Distance from a point to the centerline polyline.
double distance_to_centerline(const Track& track, const Eigen::Vector2d& p);

// Ray distances to the lane boundary along bearings {-90, -45, 0, +45, +90}
// degrees relative to the heading, capped at 30 m and normalized by the cap.
Eigen::VectorXd rangefinders(const Track& track, const Eigen::Vector2d& pos,
                             double heading);

struct CarState {
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  double heading = 0;
  double speed = 0;
  double steer_prev = 0;
  int tick = 0;
  bool done = false;
};

class LaneEnv {
 public:
  static constexpr double kDt = 1.0 / 30.0;
  static constexpr int kTickCap = 600;  // 20 s at 30 Hz
  static constexpr double kAccelGain = 2.0;
  static constexpr double kSteerGain = 0.8;
  static constexpr double kDragCoef = 0.1;
  static constexpr double kSensorCap = 30.0;
  static constexpr double kLambda = 5.5;

  LaneEnv(const Track& track, const LaneParams& params);

  Eigen::VectorXd observe() const;

  // Advances one tick with steering and throttle in [-1, 1]. Throws
  // std::logic_error if the episode is done. Returns done.
  bool step(double steer, double throttle);

  const CarState& state() const { return state_; }
  const Track& track() const { return *track_; }

  // Per-tick records for the safety objective, t = 1..tick.
  const std::vector<double>& centerline_distances() const { return d_; }
  const std::vector<double>& steering_history() const { return s_; }

  // Raw objectives: (safety penalty, distance to target at episode end),
  // both minimized.
  Eigen::Vector2d objectives() const;

 private:
  const Track* track_;
  LaneParams params_;
  CarState state_;
  std::vector<double> d_;
  std::vector<double> s_;
};

// Cumulative lane-keeping penalty: sum over ticks of d(t) plus lambda times
// the steering jerk |s(t) - s(t-1)|, with s(0) = 0.
double safety_objective(const std::vector<double>& d,
                        const std::vector<double>& s, double lambda = 5.5);

}  // namespace ctxskill::lane

#endif
