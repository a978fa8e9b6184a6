#ifndef CTXSKILL_EPISODE_HPP
#define CTXSKILL_EPISODE_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ctxskill/arch.hpp"
#include "ctxskill/env/lane.hpp"
#include "ctxskill/moea.hpp"
#include "ctxskill/network.hpp"

namespace ctxskill {

// Static description of one experimental domain: its physical parameter
// axes (order fixed for flat vectors) and objective senses.
struct DomainInfo {
  int n_params;
  std::vector<std::string> param_names;
  Eigen::VectorXd base;
  std::array<moea::Sense, 2> senses;
  std::array<std::string, 2> objective_names;
  int tick_cap;
};

const DomainInfo& domain_info(Domain domain);

// Optional per-tick capture used by replay and behavior analysis.
struct EpisodeRecorder {
  std::vector<std::string> traj_header;
  std::vector<std::vector<double>> traj_rows;
  std::vector<Eigen::VectorXd> skill_rows;
  std::vector<Eigen::VectorXd> context_rows;
};

// Runs one episode of `domain` at the given physical parameters and returns
// the raw objective pair. The LstmState is carried in and out so callers
// control the context-memory protocol (reset per task, carry across
// episodes). `track` is required for the lane domain and ignored otherwise.
Eigen::Vector2d run_episode(Domain domain, const Eigen::VectorXd& params,
                            const Network& net, LstmState& state,
                            std::uint64_t seed,
                            const lane::Track* track = nullptr,
                            EpisodeRecorder* rec = nullptr);

}  // namespace ctxskill

#endif
