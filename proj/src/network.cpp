#include "ctxskill/network.hpp"

#include <cmath>
#include <stdexcept>

namespace ctxskill {

namespace {

// Reads the next rows x cols block (row-major) from the flat vector.
Eigen::MatrixXd take_matrix(const Eigen::VectorXd& w, int& pos, int rows,
                            int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = w[pos++];
  return m;
}

Eigen::VectorXd take_vector(const Eigen::VectorXd& w, int& pos, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = w[pos++];
  return v;
}

void put_matrix(Eigen::VectorXd& w, int& pos, const Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) w[pos++] = m(r, c);
}

void put_vector(Eigen::VectorXd& w, int& pos, const Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) w[pos++] = v[i];
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) {
  return v.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

}  // namespace

Network decode(const Genome& genome, const ArchSpec& arch) {
  if (genome.weights.size() != param_count(arch)) {
    throw std::invalid_argument(
        "genome length " + std::to_string(genome.weights.size()) +
        " does not match param_count " + std::to_string(param_count(arch)));
  }
  Network net;
  net.arch = arch;
  const Eigen::VectorXd& w = genome.weights;
  int pos = 0;
  if (arch.has_skill()) {
    SkillModule s;
    s.w1 = take_matrix(w, pos, arch.skill_hidden, arch.sensory_dim);
    s.b1 = take_vector(w, pos, arch.skill_hidden);
    s.w2 = take_matrix(w, pos, arch.skill_out, arch.skill_hidden);
    s.b2 = take_vector(w, pos, arch.skill_out);
    net.skill = std::move(s);
  }
  if (arch.has_context()) {
    ContextModule c;
    const int in = arch.lstm_in() + arch.lstm_size;
    c.wi = take_matrix(w, pos, arch.lstm_size, in);
    c.bi = take_vector(w, pos, arch.lstm_size);
    c.wf = take_matrix(w, pos, arch.lstm_size, in);
    c.bf = take_vector(w, pos, arch.lstm_size);
    c.wg = take_matrix(w, pos, arch.lstm_size, in);
    c.bg = take_vector(w, pos, arch.lstm_size);
    c.wo = take_matrix(w, pos, arch.lstm_size, in);
    c.bo = take_vector(w, pos, arch.lstm_size);
    net.context = std::move(c);
  }
  net.controller.wh = take_matrix(w, pos, arch.ctrl_hidden, arch.controller_in());
  net.controller.bh = take_vector(w, pos, arch.ctrl_hidden);
  net.controller.wo = take_matrix(w, pos, arch.action_dim, arch.ctrl_hidden);
  net.controller.bo = take_vector(w, pos, arch.action_dim);
  return net;
}

Genome encode(const Network& net, double lo, double hi) {
  Genome g;
  g.lo = lo;
  g.hi = hi;
  g.weights.resize(param_count(net.arch));
  int pos = 0;
  if (net.skill) {
    put_matrix(g.weights, pos, net.skill->w1);
    put_vector(g.weights, pos, net.skill->b1);
    put_matrix(g.weights, pos, net.skill->w2);
    put_vector(g.weights, pos, net.skill->b2);
  }
  if (net.context) {
    put_matrix(g.weights, pos, net.context->wi);
    put_vector(g.weights, pos, net.context->bi);
    put_matrix(g.weights, pos, net.context->wf);
    put_vector(g.weights, pos, net.context->bf);
    put_matrix(g.weights, pos, net.context->wg);
    put_vector(g.weights, pos, net.context->bg);
    put_matrix(g.weights, pos, net.context->wo);
    put_vector(g.weights, pos, net.context->bo);
  }
  put_matrix(g.weights, pos, net.controller.wh);
  put_vector(g.weights, pos, net.controller.bh);
  put_matrix(g.weights, pos, net.controller.wo);
  put_vector(g.weights, pos, net.controller.bo);
  return g;
}

Eigen::VectorXd skill_forward(const SkillModule& skill,
                              const Eigen::VectorXd& obs) {
  Eigen::VectorXd hidden = (skill.w1 * obs + skill.b1).array().tanh();
  return (skill.w2 * hidden + skill.b2).array().tanh();
}

Eigen::VectorXd lstm_step(const ContextModule& ctx, const Eigen::VectorXd& x,
                          LstmState& state) {
  Eigen::VectorXd z(x.size() + state.h.size());
  z << x, state.h;
  const Eigen::VectorXd i = sigmoid(ctx.wi * z + ctx.bi);
  const Eigen::VectorXd f = sigmoid(ctx.wf * z + ctx.bf);
  const Eigen::VectorXd g = (ctx.wg * z + ctx.bg).array().tanh();
  const Eigen::VectorXd o = sigmoid(ctx.wo * z + ctx.bo);
  state.c = f.cwiseProduct(state.c) + i.cwiseProduct(g);
  state.h = o.cwiseProduct(state.c.array().tanh().matrix());
  return state.h;
}

Eigen::VectorXd controller_forward(const ControllerModule& ctrl,
                                   const Eigen::VectorXd& input) {
  Eigen::VectorXd hidden = (ctrl.wh * input + ctrl.bh).array().tanh();
  // tanh rounds to exactly +-1.0 for |x| > ~19; nudge back inside the open
  // interval so the action-output contract holds for all finite weights.
  constexpr double kOpenOne = 1.0 - 1e-16;
  return (ctrl.wo * hidden + ctrl.bo)
      .array()
      .tanh()
      .cwiseMin(kOpenOne)
      .cwiseMax(-kOpenOne);
}

ActDetail act_detail(const Network& net, const Eigen::VectorXd& obs,
                     LstmState& state, double t_norm) {
  ActDetail out;
  if (net.skill) out.skill_out = skill_forward(*net.skill, obs);
  if (net.context) {
    Eigen::VectorXd x(obs.size() + 1);
    x << obs, t_norm;
    out.context_out = lstm_step(*net.context, x, state);
  }
  Eigen::VectorXd ctrl_in(net.arch.controller_in());
  if (net.skill && net.context)
    ctrl_in << out.skill_out, out.context_out;
  else if (net.skill)
    ctrl_in = out.skill_out;
  else
    ctrl_in = out.context_out;
  out.raw = controller_forward(net.controller, ctrl_in);
  return out;
}

Eigen::VectorXd act(const Network& net, const Eigen::VectorXd& obs,
                    LstmState& state, double t_norm) {
  return act_detail(net, obs, state, t_norm).raw;
}

}  // namespace ctxskill
