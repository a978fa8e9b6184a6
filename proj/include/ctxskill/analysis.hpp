#ifndef CTXSKILL_ANALYSIS_HPP
#define CTXSKILL_ANALYSIS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctxskill/episode.hpp"
#include "ctxskill/network.hpp"

namespace ctxskill {

// Per-episode module outputs, one row per tick.
struct ModuleTraces {
  Eigen::MatrixXd skill;    // ticks x 5 (empty when absent)
  Eigen::MatrixXd context;  // ticks x 10 (empty when absent)
  EpisodeRecorder recorder;
  Eigen::Vector2d objectives = Eigen::Vector2d::Zero();
};

ModuleTraces record_module_outputs(const Network& net, Domain domain,
                                   const Eigen::VectorXd& params,
                                   std::uint64_t seed,
                                   const lane::Track* track = nullptr);

struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Top-2 PCA of row-sample data, computed by power iteration with deflation
// on the (population) covariance. Sign convention: the largest-magnitude
// entry of each component is positive.
struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;   // 2 x dim, orthonormal rows
  Eigen::Vector2d explained;    // variances along the components
  bool degenerate_pc2 = false;  // second component carries no variance

  // Rows of x projected onto the two components after centering.
  Eigen::MatrixXd project(const Eigen::MatrixXd& x) const;
};

// Throws DegenerateInputError for fewer than 3 samples or zero total
// variance. A zero-variance *second* direction is flagged, not an error.
PcaModel pca2(const Eigen::MatrixXd& samples);

struct DiffStats {
  Eigen::Vector2d msd;      // per-PC mean squared difference
  Eigen::Vector2d std_dev;  // per-PC population std of the signed differences
};

// Projects both traces with the given model (fitted on their union by the
// caller), aligns rows by tick index (truncating to the shorter trace), and
// reports per-PC difference statistics.
DiffStats trace_diff_stats(const Eigen::MatrixXd& nominal,
                           const Eigen::MatrixXd& general,
                           const PcaModel& pca);

// Full per-module pipeline: union fit + projection + differencing.
struct ModuleDiffRow {
  std::string module;  // "context" or "skill"
  int pc;              // 1 or 2
  double msd;
  double std_dev;
};
std::vector<ModuleDiffRow> module_diff_rows(const ModuleTraces& nominal,
                                            const ModuleTraces& general);

}  // namespace ctxskill

#endif
