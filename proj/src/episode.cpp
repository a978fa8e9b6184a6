#include "ctxskill/episode.hpp"

#include <stdexcept>

#include "ctxskill/env/flappy.hpp"
#include "ctxskill/env/lander.hpp"

namespace ctxskill {

using moea::Sense;

const DomainInfo& domain_info(Domain domain) {
  static const DomainInfo flappy_info{
      4,
      {"flap", "fwd", "gravity", "drag"},
      (Eigen::VectorXd(4) << -12.0, 5.0, 1.0, 1.0).finished(),
      {Sense::Minimize, Sense::Maximize},
      {"hits", "pipes"},
      flappy::FlappyEnv::kTickCap};
  static const DomainInfo lander_info{
      3,
      {"main", "side", "mass"},
      (Eigen::VectorXd(3) << 20.0, 1.0, 8.0).finished(),
      {Sense::Maximize, Sense::Minimize},
      {"reward", "time"},
      lander::LanderEnv::kTickCap};
  static const DomainInfo lane_info{
      2,
      {"alpha", "beta"},
      (Eigen::VectorXd(2) << 1.0, 1.0).finished(),
      {Sense::Minimize, Sense::Minimize},
      {"safety", "dist"},
      lane::LaneEnv::kTickCap};
  switch (domain) {
    case Domain::Flappy: return flappy_info;
    case Domain::Lander: return lander_info;
    case Domain::Lane: return lane_info;
  }
  throw std::invalid_argument("unknown domain");
}

namespace {

Eigen::Vector2d run_flappy(const Eigen::VectorXd& p, const Network& net,
                           LstmState& state, std::uint64_t seed,
                           EpisodeRecorder* rec) {
  flappy::FlappyParams params{p[0], p[1], p[2], p[3]};
  flappy::FlappyEnv env(params, seed);
  if (rec)
    rec->traj_header = {"tick", "y", "vx", "vy", "action_up", "action_fwd",
                        "pipes_passed", "hit_ticks", "boundary_ticks"};
  Eigen::VectorXd obs = env.observe();
  while (!env.state().done) {
    const double t_norm = static_cast<double>(env.state().tick) /
                          flappy::FlappyEnv::kTickCap;
    const ActDetail out = act_detail(net, obs, state, t_norm);
    const flappy::FlappyAction action = flappy::decode_action(out.raw.head<2>());
    env.step(action);
    obs = env.observe();
    if (rec) {
      const auto& s = env.state();
      rec->traj_rows.push_back({static_cast<double>(s.tick), s.y, s.vx, s.vy,
                                action.up ? 1.0 : 0.0, action.fwd ? 1.0 : 0.0,
                                static_cast<double>(s.pipes_passed),
                                static_cast<double>(s.hit_ticks),
                                static_cast<double>(s.boundary_ticks)});
      if (out.skill_out.size()) rec->skill_rows.push_back(out.skill_out);
      if (out.context_out.size()) rec->context_rows.push_back(out.context_out);
    }
  }
  return env.objectives();
}

Eigen::Vector2d run_lander(const Eigen::VectorXd& p, const Network& net,
                           LstmState& state, std::uint64_t seed,
                           EpisodeRecorder* rec) {
  lander::LanderParams params{p[0], p[1], p[2]};
  lander::LanderEnv env(params, seed);
  if (rec)
    rec->traj_header = {"tick", "x", "y", "vx", "vy", "theta", "omega",
                        "action", "reward_delta"};
  Eigen::VectorXd obs = env.observe();
  while (!env.done()) {
    const double t_norm = static_cast<double>(env.state().tick) /
                          lander::LanderEnv::kTickCap;
    const ActDetail out = act_detail(net, obs, state, t_norm);
    const lander::LanderAction action = lander::decode_action(out.raw);
    const double delta = env.step(action);
    obs = env.observe();
    if (rec) {
      const auto& s = env.state();
      rec->traj_rows.push_back({static_cast<double>(s.tick), s.x, s.y, s.vx,
                                s.vy, s.theta, s.omega,
                                static_cast<double>(action), delta});
      if (out.skill_out.size()) rec->skill_rows.push_back(out.skill_out);
      if (out.context_out.size()) rec->context_rows.push_back(out.context_out);
    }
  }
  return env.objectives();
}

Eigen::Vector2d run_lane(const Eigen::VectorXd& p, const Network& net,
                         LstmState& state, const lane::Track* track,
                         EpisodeRecorder* rec) {
  if (!track) throw std::invalid_argument("lane episodes require a track");
  lane::LaneParams params{p[0], p[1]};
  lane::LaneEnv env(*track, params);
  if (rec)
    rec->traj_header = {"tick", "x", "y", "heading", "speed",
                        "steer", "throttle", "d"};
  Eigen::VectorXd obs = env.observe();
  while (!env.state().done) {
    const double t_norm =
        static_cast<double>(env.state().tick) / lane::LaneEnv::kTickCap;
    const ActDetail out = act_detail(net, obs, state, t_norm);
    const double steer = out.raw[0];
    const double throttle = out.raw[1];
    env.step(steer, throttle);
    obs = env.observe();
    if (rec) {
      const auto& s = env.state();
      rec->traj_rows.push_back({static_cast<double>(s.tick), s.pos.x(),
                                s.pos.y(), s.heading, s.speed, steer, throttle,
                                env.centerline_distances().back()});
      if (out.skill_out.size()) rec->skill_rows.push_back(out.skill_out);
      if (out.context_out.size()) rec->context_rows.push_back(out.context_out);
    }
  }
  return env.objectives();
}

}  // namespace

Eigen::Vector2d run_episode(Domain domain, const Eigen::VectorXd& params,
                            const Network& net, LstmState& state,
                            std::uint64_t seed, const lane::Track* track,
                            EpisodeRecorder* rec) {
  const DomainInfo& info = domain_info(domain);
  if (params.size() != info.n_params)
    throw std::invalid_argument("parameter vector has wrong length");
  switch (domain) {
    case Domain::Flappy: return run_flappy(params, net, state, seed, rec);
    case Domain::Lander: return run_lander(params, net, state, seed, rec);
    case Domain::Lane: return run_lane(params, net, state, track, rec);
  }
  throw std::invalid_argument("unknown domain");
}

}  // namespace ctxskill
