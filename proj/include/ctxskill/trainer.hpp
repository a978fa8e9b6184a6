#ifndef CTXSKILL_TRAINER_HPP
#define CTXSKILL_TRAINER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctxskill/arch.hpp"
#include "ctxskill/env/lane.hpp"
#include "ctxskill/episode.hpp"
#include "ctxskill/moea.hpp"

namespace ctxskill {

// Raw-valued early-stopping thresholds. A threshold is met when the raw
// mean objective is at least as good as the value under its sense, and all
// present thresholds must hold simultaneously.
struct StopRule {
  std::optional<double> f0;
  std::optional<double> f1;
};

struct TrainConfig {
  Domain domain = Domain::Flappy;
  Kind kind = Kind::CS;
  int mu = 96;
  double p_crossover = 0.9;
  int n_gen = 2500;
  int n_episodes = 5;
  double perturb = 0.2;
  Eigen::VectorXd base;  // defaults to domain_info(domain).base when empty
  StopRule stop;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string track_path;  // lane only; empty selects the built-in fixture
  double eta_c = 20.0;
  double eta_m = 20.0;
  double sbx_gene_rate = 0.5;
  double gene_lo = -5.0;
  double gene_hi = 5.0;
  // Initial genomes are drawn from a narrower band than the gene box:
  // full-range tanh networks start saturated, which flattens the search
  // landscape badly enough to block desk-scale learning.
  double init_lo = -1.0;
  double init_hi = 1.0;

  Eigen::VectorXd base_or_default() const {
    return base.size() ? base : domain_info(domain).base;
  }
};

// One episode assignment: which task (parameter axis) it belongs to and the
// full parameter vector with exactly that axis perturbed.
struct TaskEntry {
  int task_index = 0;
  Eigen::VectorXd params;
};

// Fresh per-generation task list: for each parameter axis, n_episodes
// uniform draws within +-perturb of its base value, all other axes at base.
std::vector<TaskEntry> prepare_task_params(const TrainConfig& config,
                                           Rng& rng);

// Mean canonical objectives of one genome over the whole task list. LSTM
// memory resets at every task-group boundary and is carried across the
// episodes inside a group.
Eigen::Vector2d evaluate_individual(const Genome& genome,
                                    const TrainConfig& config,
                                    const std::vector<TaskEntry>& tasks,
                                    const std::vector<std::uint64_t>& seeds,
                                    const lane::Track* track);

struct GenerationLog {
  struct Row {
    int gen;
    int ind;
    double f0, f1;  // canonical
    int rank;
    double crowding;
  };
  std::vector<Row> rows;
  long evaluation_count = 0;
  void append_population(int gen, const std::vector<moea::Individual>& pop);
  void write_csv(const std::string& path) const;
};

struct EvolutionResult {
  std::vector<moea::Individual> parents;  // final population
  std::vector<int> front0;                // indices into parents
  GenerationLog log;
  bool stopped_early = false;
  int generations_run = 0;
};

// The evolutionary loop: random init, DCD tournament selection, pairwise
// SBX at p_crossover, polynomial mutation of both children, re-evaluation
// of parents and offspring together on the fresh task list (every
// individual sees the same tasks and episode seeds), (mu + lambda)
// survival, early stop once any freshly evaluated individual meets the
// stop rule.
EvolutionResult run_evolution(const TrainConfig& config);

// Signals that no front member satisfies the safety threshold.
struct NoSafeIndividualError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Final-network choice. Flappy/lander: among front members whose raw f0
// meets stop.f0, the best raw f1 (ties: lowest index). Lane: the member
// closest to the origin after per-objective normalization by front range.
int select_final(const std::vector<moea::Individual>& front, Domain domain,
                 const StopRule& stop);

}  // namespace ctxskill

#endif
