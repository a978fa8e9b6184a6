#include "ctxskill/env/lane.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

namespace ctxskill::lane {

using nlohmann::json;

Track load_track_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open track file: " + path);
  json j = json::parse(in);
  Track t;
  t.name = j.at("name").get<std::string>();
  for (const auto& p : j.at("points"))
    t.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  t.half_width = j.at("half_width").get<double>();
  t.target = {j.at("target").at("x").get<double>(),
              j.at("target").at("y").get<double>()};
  t.target_radius = j.at("target").at("r").get<double>();
  if (t.points.size() < 2)
    throw std::invalid_argument("track needs at least 2 centerline points");
  return t;
}

void save_track_json(const std::string& path, const Track& track) {
  json j;
  j["name"] = track.name;
  json pts = json::array();
  for (const auto& p : track.points) pts.push_back({p.x(), p.y()});
  j["points"] = pts;
  j["half_width"] = track.half_width;
  j["target"] = {{"x", track.target.x()},
                 {"y", track.target.y()},
                 {"r", track.target_radius}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

namespace {

// Appends an arc of given length and constant curvature, sampled at 1 m.
void append_arc(std::vector<Eigen::Vector2d>& pts, double& heading,
                double length, double curvature) {
  Eigen::Vector2d p = pts.back();
  const double step = 1.0;
  for (double s = step; s <= length + 1e-9; s += step) {
    heading += curvature * step;
    p += step * Eigen::Vector2d(std::cos(heading), std::sin(heading));
    pts.push_back(p);
  }
}

Track track_from_arcs(const std::string& name,
                      const std::vector<std::pair<double, double>>& arcs) {
  Track t;
  t.name = name;
  t.points.emplace_back(0.0, 0.0);
  double heading = 0.0;
  for (const auto& [length, curvature] : arcs)
    append_arc(t.points, heading, length, curvature);
  t.target = t.points.back();
  t.target_radius = 5.0;
  return t;
}

}  // namespace

Track make_training_track() {
  return track_from_arcs("train_s_curve",
                         {{40, 0.0}, {50, 0.02}, {50, -0.02}, {40, 0.0}});
}

Track make_eval_track() {
  return track_from_arcs("eval_hairpin", {{30, 0.0},
                                          {40, 0.06},
                                          {25, 0.0},
                                          {40, -0.06},
                                          {25, 0.0}});
}

double distance_to_centerline(const Track& track, const Eigen::Vector2d& p) {
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < track.points.size(); ++i) {
    const Eigen::Vector2d& a = track.points[i];
    const Eigen::Vector2d& b = track.points[i + 1];
    const Eigen::Vector2d ab = b - a;
    const double len_sq = ab.squaredNorm();
    double t = len_sq > 0 ? (p - a).dot(ab) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best_sq = std::min(best_sq, (p - (a + t * ab)).squaredNorm());
  }
  return std::sqrt(best_sq);
}

Eigen::VectorXd rangefinders(const Track& track, const Eigen::Vector2d& pos,
                             double heading) {
  const double bearings[5] = {-std::numbers::pi / 2, -std::numbers::pi / 4,
                              0.0, std::numbers::pi / 4, std::numbers::pi / 2};
  auto inside = [&](const Eigen::Vector2d& p) {
    return distance_to_centerline(track, p) <= track.half_width;
  };
  Eigen::VectorXd out(5);
  for (int r = 0; r < 5; ++r) {
    const double a = heading + bearings[r];
    const Eigen::Vector2d dir(std::cos(a), std::sin(a));
    // Coarse march to bracket the boundary, then bisect.
    double lo = 0.0, hi = LaneEnv::kSensorCap;
    bool found = false;
    for (double s = 1.0; s <= LaneEnv::kSensorCap + 1e-9; s += 1.0) {
      if (!inside(pos + s * dir)) {
        hi = s;
        found = true;
        break;
      }
      lo = s;
    }
    if (!found) {
      out[r] = 1.0;
      continue;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(pos + mid * dir) ? lo : hi) = mid;
    }
    out[r] = 0.5 * (lo + hi) / LaneEnv::kSensorCap;
  }
  return out;
}

LaneEnv::LaneEnv(const Track& track, const LaneParams& params)
    : track_(&track), params_(params) {
  state_.pos = track.points.front();
  const Eigen::Vector2d d0 = track.points[1] - track.points[0];
  state_.heading = std::atan2(d0.y(), d0.x());
}

Eigen::VectorXd LaneEnv::observe() const {
  return rangefinders(*track_, state_.pos, state_.heading);
}

bool LaneEnv::step(double steer, double throttle) {
  if (state_.done) throw std::logic_error("step() on a finished episode");
  steer = std::clamp(steer, -1.0, 1.0);
  throttle = std::clamp(throttle, -1.0, 1.0);

  const double speed_prev = state_.speed;
  state_.speed = std::max(
      0.0, state_.speed + kDt * (params_.beta * kAccelGain * throttle -
                                 kDragCoef * state_.speed));
  state_.heading += kDt * params_.alpha * kSteerGain * steer * speed_prev;
  state_.pos += kDt * state_.speed *
                Eigen::Vector2d(std::cos(state_.heading), std::sin(state_.heading));

  state_.tick++;
  d_.push_back(distance_to_centerline(*track_, state_.pos));
  s_.push_back(steer);
  state_.steer_prev = steer;

  const bool in_target =
      (state_.pos - track_->target).norm() <= track_->target_radius;
  if (state_.tick >= kTickCap || in_target) state_.done = true;
  return state_.done;
}

double safety_objective(const std::vector<double>& d,
                        const std::vector<double>& s, double lambda) {
  if (d.size() != s.size())
    throw std::invalid_argument("d and s traces must have equal length");
  double total = 0;
  double prev_s = 0.0;
  for (std::size_t t = 0; t < d.size(); ++t) {
    total += d[t] + lambda * std::abs(s[t] - prev_s);
    prev_s = s[t];
  }
  return total;
}

Eigen::Vector2d LaneEnv::objectives() const {
  return {safety_objective(d_, s_, kLambda),
          (state_.pos - track_->target).norm()};
}

}  // namespace ctxskill::lane
