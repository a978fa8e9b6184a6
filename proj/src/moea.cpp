#include "ctxskill/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ctxskill::moea {

Eigen::Vector2d canonicalize(const Eigen::Vector2d& raw,
                             const std::array<Sense, 2>& senses) {
  Eigen::Vector2d out;
  for (int k = 0; k < 2; ++k)
    out[k] = senses[k] == Sense::Maximize ? -raw[k] : raw[k];
  return out;
}

Eigen::Vector2d decanonicalize(const Eigen::Vector2d& canonical,
                               const std::array<Sense, 2>& senses) {
  return canonicalize(canonical, senses);  // negation is an involution
}

bool dominates(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

std::vector<std::vector<int>> fast_non_dominated_sort(
    const std::vector<Eigen::Vector2d>& objectives) {
  const int n = static_cast<int>(objectives.size());
  std::vector<std::vector<int>> dominated(n);
  std::vector<int> dominators(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dominates(objectives[i], objectives[j])) {
        dominated[i].push_back(j);
        dominators[j]++;
      } else if (dominates(objectives[j], objectives[i])) {
        dominated[j].push_back(i);
        dominators[i]++;
      }
    }
  }
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int i = 0; i < n; ++i)
    if (dominators[i] == 0) current.push_back(i);
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<int> next;
    for (int i : current) {
      for (int j : dominated[i]) {
        if (--dominators[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(
    const std::vector<Eigen::Vector2d>& front_objectives) {
  const int n = static_cast<int>(front_objectives.size());
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  const double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<int> order(n);
  for (int obj = 0; obj < 2; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return front_objectives[a][obj] < front_objectives[b][obj];
    });
    const double range = front_objectives[order.back()][obj] -
                         front_objectives[order.front()][obj];
    if (range <= 0) continue;  // zero-range objective contributes nothing
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    for (int k = 1; k + 1 < n; ++k) {
      if (std::isinf(dist[order[k]])) continue;
      dist[order[k]] += (front_objectives[order[k + 1]][obj] -
                         front_objectives[order[k - 1]][obj]) /
                        range;
    }
  }
  return dist;
}

std::vector<int> tournament_dcd(const std::vector<Individual>& pop, int n,
                                Rng& rng) {
  if (pop.empty()) throw std::invalid_argument("empty population");
  std::vector<int> selected;
  selected.reserve(n);
  for (int t = 0; t < n; ++t) {
    const int i = static_cast<int>(rng.uniform_int(pop.size()));
    const int j = static_cast<int>(rng.uniform_int(pop.size()));
    int winner;
    if (pop[i].rank != pop[j].rank) {
      winner = pop[i].rank < pop[j].rank ? i : j;
    } else if (pop[i].crowding != pop[j].crowding) {
      winner = pop[i].crowding > pop[j].crowding ? i : j;
    } else {
      winner = rng.uniform01() < 0.5 ? i : j;
    }
    selected.push_back(winner);
  }
  return selected;
}

double sbx_spread(double u, double eta_c) {
  if (u <= 0.5) return std::pow(2.0 * u, 1.0 / (eta_c + 1.0));
  return std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
}

std::pair<double, double> sbx_children(double x1, double x2, double beta) {
  return {0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2),
          0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2)};
}

void sbx(Eigen::VectorXd& a, Eigen::VectorXd& b, double eta_c, double p_var,
         double lo, double hi, Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("parent size mismatch");
  for (int g = 0; g < a.size(); ++g) {
    if (rng.uniform01() > p_var) continue;
    const double x1 = a[g], x2 = b[g];
    if (std::abs(x1 - x2) <= 1e-14) continue;
    const double beta = sbx_spread(rng.uniform01(), eta_c);
    auto [c1, c2] = sbx_children(x1, x2, beta);
    if (rng.uniform01() < 0.5) std::swap(c1, c2);
    a[g] = std::clamp(c1, lo, hi);
    b[g] = std::clamp(c2, lo, hi);
  }
}

double polynomial_mutation_gene(double y, double u, double eta_m, double lo,
                                double hi) {
  const double range = hi - lo;
  if (range <= 0) return y;
  const double mut_pow = 1.0 / (eta_m + 1.0);
  double deltaq;
  if (u <= 0.5) {
    const double delta1 = (y - lo) / range;
    const double xy = 1.0 - delta1;
    const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
    deltaq = std::pow(val, mut_pow) - 1.0;
  } else {
    const double delta2 = (hi - y) / range;
    const double xy = 1.0 - delta2;
    const double val =
        2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta_m + 1.0);
    deltaq = 1.0 - std::pow(val, mut_pow);
  }
  return std::clamp(y + deltaq * range, lo, hi);
}

void polynomial_mutation(Eigen::VectorXd& genes, double eta_m, double p_m,
                         double lo, double hi, Rng& rng) {
  for (int g = 0; g < genes.size(); ++g) {
    if (rng.uniform01() > p_m) continue;
    genes[g] = polynomial_mutation_gene(genes[g], rng.uniform01(), eta_m, lo, hi);
  }
}

std::vector<Individual> survive_mu_plus_lambda(
    const std::vector<Individual>& parents,
    const std::vector<Individual>& offspring, int mu) {
  std::vector<Individual> pool = parents;
  pool.insert(pool.end(), offspring.begin(), offspring.end());
  if (static_cast<int>(pool.size()) < mu)
    throw std::invalid_argument("combined population smaller than mu");

  std::vector<Eigen::Vector2d> objs;
  objs.reserve(pool.size());
  for (const Individual& ind : pool) objs.push_back(ind.objectives);
  const auto fronts = fast_non_dominated_sort(objs);

  std::vector<Individual> survivors;
  survivors.reserve(mu);
  for (std::size_t f = 0; f < fronts.size() && static_cast<int>(survivors.size()) < mu; ++f) {
    const std::vector<int>& front = fronts[f];
    std::vector<Eigen::Vector2d> front_objs;
    front_objs.reserve(front.size());
    for (int idx : front) front_objs.push_back(objs[idx]);
    const std::vector<double> crowd = crowding_distance(front_objs);

    std::vector<int> take(front.size());
    std::iota(take.begin(), take.end(), 0);
    const int room = mu - static_cast<int>(survivors.size());
    if (static_cast<int>(front.size()) > room) {
      // Partial front: keep the most spread-out members; ties break by
      // combined-population index for determinism.
      std::stable_sort(take.begin(), take.end(), [&](int a, int b) {
        if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
        return front[a] < front[b];
      });
      take.resize(room);
      std::sort(take.begin(), take.end(),
                [&](int a, int b) { return front[a] < front[b]; });
    }
    for (int k : take) {
      Individual ind = pool[front[k]];
      ind.rank = static_cast<int>(f);
      ind.crowding = crowd[k];
      survivors.push_back(std::move(ind));
    }
  }
  return survivors;
}

}  // namespace ctxskill::moea
