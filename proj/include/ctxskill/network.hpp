#ifndef CTXSKILL_NETWORK_HPP
#define CTXSKILL_NETWORK_HPP

#include <Eigen/Core>
#include <optional>

#include "ctxskill/arch.hpp"
#include "ctxskill/genome.hpp"

namespace ctxskill {

// Recurrent memory of the context module. reset() zeroes both vectors.
struct LstmState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;

  explicit LstmState(int lstm_size = 0)
      : h(Eigen::VectorXd::Zero(lstm_size)),
        c(Eigen::VectorXd::Zero(lstm_size)) {}

  void reset() {
    h.setZero();
    c.setZero();
  }
};

struct SkillModule {
  Eigen::MatrixXd w1;  // skill_hidden x sensory_dim
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // skill_out x skill_hidden
  Eigen::VectorXd b2;
};

// Vanilla LSTM cell, gates in order input/forget/cell/output, no peepholes.
// Each gate weight is lstm_size x (lstm_in + lstm_size) acting on [x; h].
struct ContextModule {
  Eigen::MatrixXd wi, wf, wg, wo;
  Eigen::VectorXd bi, bf, bg, bo;
};

struct ControllerModule {
  Eigen::MatrixXd wh;  // ctrl_hidden x controller_in
  Eigen::VectorXd bh;
  Eigen::MatrixXd wo;  // action_dim x ctrl_hidden
  Eigen::VectorXd bo;
};

// Decoded network. Immutable after decode; concurrent evaluation is safe as
// long as each evaluation owns its LstmState.
struct Network {
  ArchSpec arch;
  std::optional<SkillModule> skill;
  std::optional<ContextModule> context;
  ControllerModule controller;
};

// Bijective mapping between flat genomes and layer matrices, in the order
// documented by genome_layout(). Throws std::invalid_argument on a length
// mismatch.
Network decode(const Genome& genome, const ArchSpec& arch);
Genome encode(const Network& net, double lo = -5.0, double hi = 5.0);

// Feed-forward skill module: tanh hidden, tanh output.
Eigen::VectorXd skill_forward(const SkillModule& skill,
                              const Eigen::VectorXd& obs);

// One LSTM step. x is the full cell input [obs; aux]. Updates state in
// place and returns the new h.
Eigen::VectorXd lstm_step(const ContextModule& ctx, const Eigen::VectorXd& x,
                          LstmState& state);

Eigen::VectorXd controller_forward(const ControllerModule& ctrl,
                                   const Eigen::VectorXd& input);

// Per-tick forward pass, exposing the module outputs feeding the controller.
struct ActDetail {
  Eigen::VectorXd raw;          // action values, each in (-1, 1)
  Eigen::VectorXd skill_out;    // empty unless the skill module is present
  Eigen::VectorXd context_out;  // empty unless the context module is present
};

// Full forward pass. t_norm in [0,1] is the auxiliary clock input to the
// context module. State is untouched for kind S.
ActDetail act_detail(const Network& net, const Eigen::VectorXd& obs,
                     LstmState& state, double t_norm);
Eigen::VectorXd act(const Network& net, const Eigen::VectorXd& obs,
                    LstmState& state, double t_norm);

}  // namespace ctxskill

#endif
