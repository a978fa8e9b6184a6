#ifndef CTXSKILL_MOEA_HPP
#define CTXSKILL_MOEA_HPP

#include <Eigen/Core>
#include <array>
#include <vector>

#include "ctxskill/genome.hpp"
#include "ctxskill/rng.hpp"

namespace ctxskill::moea {

enum class Sense { Minimize, Maximize };

// Maps raw objective values to the internal all-minimization convention
// (maximized objectives are negated).
Eigen::Vector2d canonicalize(const Eigen::Vector2d& raw,
                             const std::array<Sense, 2>& senses);
Eigen::Vector2d decanonicalize(const Eigen::Vector2d& canonical,
                               const std::array<Sense, 2>& senses);

struct Individual {
  Genome genome;
  Eigen::Vector2d objectives = Eigen::Vector2d::Zero();  // canonical (min)
  int rank = 0;
  double crowding = 0;
};

// a dominates b under canonical minimization.
bool dominates(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

// Deb's fast non-dominated sort. Front 0 is the non-dominated set; indices
// within each front are ascending.
std::vector<std::vector<int>> fast_non_dominated_sort(
    const std::vector<Eigen::Vector2d>& objectives);

// Crowding distances for the members of one front (any order). Endpoints of
// each objective get infinity; zero-range objectives contribute nothing.
std::vector<double> crowding_distance(
    const std::vector<Eigen::Vector2d>& front_objectives);

// Binary tournaments on (rank, crowding): lower rank wins, then larger
// crowding, then a fair coin. Returns n indices into pop.
std::vector<int> tournament_dcd(const std::vector<Individual>& pop, int n,
                                Rng& rng);

// SBX spread factor for a uniform draw u and distribution index eta_c.
// sbx_spread(0.5, eta) == 1 exactly.
double sbx_spread(double u, double eta_c);

// Child pair for one gene at spread beta, anchored to the parents: beta = 1
// returns (x1, x2) bit-exactly.
std::pair<double, double> sbx_children(double x1, double x2, double beta);

// In-place simulated binary crossover. Each gene is crossed with
// probability p_var (otherwise copied through); the child assignment is
// swapped with probability 1/2 per gene (so each child's marginal mean is
// the parent midpoint); children are clamped to [lo, hi]. Coincident parent
// genes pass through untouched.
void sbx(Eigen::VectorXd& a, Eigen::VectorXd& b, double eta_c, double p_var,
         double lo, double hi, Rng& rng);

// Bounded polynomial-mutation perturbation for one gene at y with a uniform
// draw u; returns the mutated value (clamped to [lo, hi]).
double polynomial_mutation_gene(double y, double u, double eta_m, double lo,
                                double hi);

// In-place polynomial mutation: each gene mutates with probability p_m.
void polynomial_mutation(Eigen::VectorXd& genes, double eta_m, double p_m,
                         double lo, double hi, Rng& rng);

// Elitist (mu + lambda) survival: non-dominated sort of the union, fill by
// rank, split the last front by descending crowding with ties broken by
// combined-population index. Assigns rank and crowding on the survivors.
std::vector<Individual> survive_mu_plus_lambda(
    const std::vector<Individual>& parents,
    const std::vector<Individual>& offspring, int mu);

}  // namespace ctxskill::moea

#endif
