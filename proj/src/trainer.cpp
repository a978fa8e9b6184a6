#include "ctxskill/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "ctxskill/csvio.hpp"
#include "ctxskill/network.hpp"
#include "ctxskill/parallel.hpp"

namespace ctxskill {

using moea::Individual;
using moea::Sense;

std::vector<TaskEntry> prepare_task_params(const TrainConfig& config,
                                           Rng& rng) {
  const DomainInfo& info = domain_info(config.domain);
  const Eigen::VectorXd base = config.base_or_default();
  std::vector<TaskEntry> entries;
  entries.reserve(info.n_params * config.n_episodes);
  for (int task = 0; task < info.n_params; ++task) {
    const double a = base[task] * (1.0 - config.perturb);
    const double b = base[task] * (1.0 + config.perturb);
    const double lo = std::min(a, b), hi = std::max(a, b);
    for (int e = 0; e < config.n_episodes; ++e) {
      TaskEntry entry;
      entry.task_index = task;
      entry.params = base;
      entry.params[task] = rng.uniform(lo, hi);
      entries.push_back(std::move(entry));
    }
  }
  return entries;
}

Eigen::Vector2d evaluate_individual(const Genome& genome,
                                    const TrainConfig& config,
                                    const std::vector<TaskEntry>& tasks,
                                    const std::vector<std::uint64_t>& seeds,
                                    const lane::Track* track) {
  if (tasks.size() != seeds.size())
    throw std::invalid_argument("one seed per task entry required");
  const ArchSpec arch = make_arch(config.domain, config.kind);
  const Network net = decode(genome, arch);
  const DomainInfo& info = domain_info(config.domain);

  LstmState state(arch.lstm_size);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  int prev_task = -1;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].task_index != prev_task) {
      state.reset();  // memory resets at each task boundary
      prev_task = tasks[i].task_index;
    }
    sum += run_episode(config.domain, tasks[i].params, net, state, seeds[i],
                       track);
  }
  const Eigen::Vector2d mean = sum / static_cast<double>(tasks.size());
  return moea::canonicalize(mean, info.senses);
}

void GenerationLog::append_population(int gen,
                                      const std::vector<Individual>& pop) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    rows.push_back({gen, static_cast<int>(i), pop[i].objectives[0],
                    pop[i].objectives[1], pop[i].rank, pop[i].crowding});
  }
}

void GenerationLog::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "gen,ind,f0,f1,rank,crowding\n";
  for (const Row& r : rows) {
    out << r.gen << ',' << r.ind << ',' << format_double(r.f0) << ','
        << format_double(r.f1) << ',' << r.rank << ','
        << format_double(r.crowding) << '\n';
  }
}

namespace {

// Rank/crowding assignment within one population (used for the initial
// generation and to keep the stored values self-consistent after survival).
void assign_rank_crowding(std::vector<Individual>& pop) {
  std::vector<Eigen::Vector2d> objs;
  objs.reserve(pop.size());
  for (const Individual& ind : pop) objs.push_back(ind.objectives);
  const auto fronts = moea::fast_non_dominated_sort(objs);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<Eigen::Vector2d> front_objs;
    front_objs.reserve(fronts[f].size());
    for (int idx : fronts[f]) front_objs.push_back(objs[idx]);
    const auto crowd = moea::crowding_distance(front_objs);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      pop[fronts[f][k]].rank = static_cast<int>(f);
      pop[fronts[f][k]].crowding = crowd[k];
    }
  }
}

// A stop threshold is met when the canonical value is no worse than the
// canonical threshold.
bool meets_stop(const Eigen::Vector2d& canonical, const StopRule& stop,
                const std::array<Sense, 2>& senses) {
  if (!stop.f0 && !stop.f1) return false;
  if (stop.f0) {
    const double thr =
        senses[0] == Sense::Maximize ? -*stop.f0 : *stop.f0;
    if (!(canonical[0] <= thr)) return false;
  }
  if (stop.f1) {
    const double thr =
        senses[1] == Sense::Maximize ? -*stop.f1 : *stop.f1;
    if (!(canonical[1] <= thr)) return false;
  }
  return true;
}

}  // namespace

EvolutionResult run_evolution(const TrainConfig& config) {
  if (config.mu < 4 || config.mu % 2 != 0)
    throw std::invalid_argument("mu must be even and >= 4");
  if (config.n_episodes < 1)
    throw std::invalid_argument("n_episodes must be positive");

  const DomainInfo& info = domain_info(config.domain);
  const ArchSpec arch = make_arch(config.domain, config.kind);
  const int genome_len = param_count(arch);
  const double p_m = 1.0 / genome_len;

  lane::Track track_storage;
  const lane::Track* track = nullptr;
  if (config.domain == Domain::Lane) {
    track_storage = config.track_path.empty()
                        ? lane::make_training_track()
                        : lane::load_track_json(config.track_path);
    track = &track_storage;
  }

  Rng master(config.seed);
  EvolutionResult result;

  std::vector<Individual> parents(config.mu);
  for (Individual& ind : parents) {
    ind.genome = random_genome(arch, master, config.init_lo, config.init_hi);
    ind.genome.lo = config.gene_lo;
    ind.genome.hi = config.gene_hi;
  }

  const int entries = info.n_params * config.n_episodes;
  auto draw_generation_inputs =
      [&](std::vector<TaskEntry>& tasks, std::vector<std::uint64_t>& seeds) {
        tasks = prepare_task_params(config, master);
        seeds.resize(entries);
        for (auto& s : seeds) s = master.next_u64();
      };

  auto evaluate_all = [&](std::vector<Individual>& pop,
                          const std::vector<TaskEntry>& tasks,
                          const std::vector<std::uint64_t>& seeds) {
    parallel_for(pop.size(), config.workers, [&](std::size_t i) {
      pop[i].objectives =
          evaluate_individual(pop[i].genome, config, tasks, seeds, track);
    });
    result.log.evaluation_count += static_cast<long>(pop.size()) * entries;
  };

  std::vector<TaskEntry> tasks;
  std::vector<std::uint64_t> seeds;
  draw_generation_inputs(tasks, seeds);
  evaluate_all(parents, tasks, seeds);
  assign_rank_crowding(parents);
  result.log.append_population(0, parents);

  bool stop = false;
  int gen = 0;
  for (gen = 1; gen <= config.n_gen; ++gen) {
    // Variation: DCD tournaments, pairwise SBX, mutation of both children.
    const std::vector<int> chosen =
        moea::tournament_dcd(parents, config.mu, master);
    std::vector<Individual> offspring;
    offspring.reserve(config.mu);
    for (int idx : chosen) {
      Individual child;
      child.genome = parents[idx].genome;
      offspring.push_back(std::move(child));
    }
    for (int i = 0; i + 1 < config.mu; i += 2) {
      if (master.uniform01() <= config.p_crossover) {
        moea::sbx(offspring[i].genome.weights, offspring[i + 1].genome.weights,
                  config.eta_c, config.sbx_gene_rate, config.gene_lo,
                  config.gene_hi, master);
      }
      moea::polynomial_mutation(offspring[i].genome.weights, config.eta_m, p_m,
                                config.gene_lo, config.gene_hi, master);
      moea::polynomial_mutation(offspring[i + 1].genome.weights, config.eta_m,
                                p_m, config.gene_lo, config.gene_hi, master);
    }

    // Fresh tasks for everyone: parents are re-evaluated alongside the
    // offspring so survival compares all individuals on the same episodes.
    draw_generation_inputs(tasks, seeds);
    evaluate_all(parents, tasks, seeds);
    evaluate_all(offspring, tasks, seeds);

    for (const Individual& ind : parents)
      if (meets_stop(ind.objectives, config.stop, info.senses)) stop = true;
    for (const Individual& ind : offspring)
      if (meets_stop(ind.objectives, config.stop, info.senses)) stop = true;

    parents = moea::survive_mu_plus_lambda(parents, offspring, config.mu);
    assign_rank_crowding(parents);
    result.log.append_population(gen, parents);
    if (stop) break;
  }

  result.generations_run = std::min(gen, config.n_gen);
  result.stopped_early = stop;
  result.parents = std::move(parents);
  for (std::size_t i = 0; i < result.parents.size(); ++i)
    if (result.parents[i].rank == 0) result.front0.push_back(static_cast<int>(i));
  return result;
}

int select_final(const std::vector<Individual>& front, Domain domain,
                 const StopRule& stop) {
  if (front.empty()) throw std::invalid_argument("empty front");
  const DomainInfo& info = domain_info(domain);

  if (domain == Domain::Lane) {
    Eigen::Vector2d lo(std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    for (const Individual& ind : front) {
      lo = lo.cwiseMin(ind.objectives);
      hi = hi.cwiseMax(ind.objectives);
    }
    const Eigen::Vector2d range = hi - lo;
    int best = 0;
    double best_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
      Eigen::Vector2d v;
      for (int k = 0; k < 2; ++k)
        v[k] = range[k] > 0 ? (front[i].objectives[k] - lo[k]) / range[k] : 0.0;
      const double norm = v.norm();
      if (norm < best_norm) {
        best_norm = norm;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  if (!stop.f0)
    throw std::invalid_argument("safety threshold required for selection");
  const double thr =
      info.senses[0] == Sense::Maximize ? -*stop.f0 : *stop.f0;
  int best = -1;
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (!(front[i].objectives[0] <= thr)) continue;
    if (best < 0 || front[i].objectives[1] < front[best].objectives[1])
      best = static_cast<int>(i);
  }
  if (best < 0)
    throw NoSafeIndividualError(
        "no Pareto-front member satisfies the safety threshold");
  return best;
}

}  // namespace ctxskill
