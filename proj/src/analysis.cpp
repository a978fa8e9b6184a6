#include "ctxskill/analysis.hpp"

#include <cmath>

namespace ctxskill {

namespace {

Eigen::MatrixXd rows_to_matrix(const std::vector<Eigen::VectorXd>& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i];
  return m;
}

// Dominant eigenpair of a symmetric PSD matrix by power iteration.
// Returns a zero eigenvalue (and an arbitrary unit vector orthogonal to
// `avoid`, when given) for a numerically null matrix.
std::pair<double, Eigen::VectorXd> dominant_eigenpair(
    const Eigen::MatrixXd& m, const Eigen::VectorXd* avoid) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(d));
  if (avoid) v -= avoid->dot(v) * (*avoid);
  if (v.norm() < 1e-12) {
    v = Eigen::VectorXd::Zero(d);
    v[0] = 1.0;
    if (avoid) v -= avoid->dot(v) * (*avoid);
  }
  v.normalize();

  double lambda = 0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd w = m * v;
    if (avoid) w -= avoid->dot(w) * (*avoid);
    const double norm = w.norm();
    if (norm < 1e-300) {
      lambda = 0;
      break;
    }
    w /= norm;
    const double delta = (w - v).norm();
    v = w;
    lambda = v.dot(m * v);
    if (delta < 1e-14) break;
  }

  // Sign convention: largest-magnitude entry positive.
  int peak = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
  if (v[peak] < 0) v = -v;
  return {std::max(lambda, 0.0), v};
}

}  // namespace

ModuleTraces record_module_outputs(const Network& net, Domain domain,
                                   const Eigen::VectorXd& params,
                                   std::uint64_t seed,
                                   const lane::Track* track) {
  ModuleTraces traces;
  LstmState state(net.arch.lstm_size);
  traces.objectives =
      run_episode(domain, params, net, state, seed, track, &traces.recorder);
  traces.skill = rows_to_matrix(traces.recorder.skill_rows);
  traces.context = rows_to_matrix(traces.recorder.context_rows);
  return traces;
}

Eigen::MatrixXd PcaModel::project(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean.transpose()) * components.transpose();
}

PcaModel pca2(const Eigen::MatrixXd& samples) {
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (n < 3) throw DegenerateInputError("pca2 needs at least 3 samples");

  PcaModel model;
  model.mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;

  const double total_var = cov.trace();
  if (!(total_var > 0))
    throw DegenerateInputError("pca2 input has zero variance");

  auto [l1, v1] = dominant_eigenpair(cov, nullptr);
  const Eigen::MatrixXd deflated = cov - l1 * v1 * v1.transpose();
  auto [l2, v2] = dominant_eigenpair(deflated, &v1);

  model.components.resize(2, d);
  model.components.row(0) = v1;
  model.components.row(1) = v2;
  model.explained = {l1, l2};
  model.degenerate_pc2 = l2 <= 1e-12 * std::max(l1, 1.0);
  return model;
}

DiffStats trace_diff_stats(const Eigen::MatrixXd& nominal,
                           const Eigen::MatrixXd& general,
                           const PcaModel& pca) {
  const Eigen::MatrixXd pn = pca.project(nominal);
  const Eigen::MatrixXd pg = pca.project(general);
  const int ticks = static_cast<int>(std::min(pn.rows(), pg.rows()));
  if (ticks < 1) throw DegenerateInputError("empty trace");

  DiffStats stats;
  for (int pc = 0; pc < 2; ++pc) {
    double sum = 0, sum_sq = 0;
    for (int t = 0; t < ticks; ++t) {
      const double diff = pn(t, pc) - pg(t, pc);
      sum += diff;
      sum_sq += diff * diff;
    }
    const double mean = sum / ticks;
    stats.msd[pc] = sum_sq / ticks;
    stats.std_dev[pc] = std::sqrt(std::max(0.0, sum_sq / ticks - mean * mean));
  }
  return stats;
}

std::vector<ModuleDiffRow> module_diff_rows(const ModuleTraces& nominal,
                                            const ModuleTraces& general) {
  std::vector<ModuleDiffRow> rows;
  auto add_module = [&](const std::string& name, const Eigen::MatrixXd& a,
                        const Eigen::MatrixXd& b) {
    if (a.rows() == 0 || b.rows() == 0) return;
    Eigen::MatrixXd pool(a.rows() + b.rows(), a.cols());
    pool << a, b;
    const PcaModel model = pca2(pool);
    const DiffStats stats = trace_diff_stats(a, b, model);
    for (int pc = 0; pc < 2; ++pc)
      rows.push_back({name, pc + 1, stats.msd[pc], stats.std_dev[pc]});
  };
  add_module("context", nominal.context, general.context);
  add_module("skill", nominal.skill, general.skill);
  return rows;
}

}  // namespace ctxskill
