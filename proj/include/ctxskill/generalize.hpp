#ifndef CTXSKILL_GENERALIZE_HPP
#define CTXSKILL_GENERALIZE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "ctxskill/episode.hpp"
#include "ctxskill/moea.hpp"
#include "ctxskill/network.hpp"

namespace ctxskill {

struct SweepConfig {
  Domain domain = Domain::Flappy;
  double range_frac = 0.75;  // half-width of each axis around base, relative
  int steps = 10;            // grid steps per axis, endpoints included
  int samples = 3;           // episodes averaged per grid point
  std::uint64_t seed = 1;
  int workers = 1;
  Eigen::VectorXd base;  // defaults to the domain base when empty
  std::string track_path;

  Eigen::VectorXd base_or_default() const {
    return base.size() ? base : domain_info(domain).base;
  }
  long grid_points() const {
    long n = 1;
    for (int k = 0; k < domain_info(domain).n_params; ++k) n *= steps;
    return n;
  }
  long episode_count_per_network() const { return grid_points() * samples; }
};

// Cartesian product of per-axis linspace(base*(1-range), base*(1+range),
// steps), axes in domain order, last axis fastest.
std::vector<Eigen::VectorXd> build_grid(const SweepConfig& config);

struct SweepRecord {
  std::vector<int> coords;
  Eigen::VectorXd params;
  std::vector<Eigen::Vector2d> per_network;  // raw mean (f0, f1) per network
};

// Evaluates every network at every grid point. The `samples` episodes of a
// grid point share seeds across networks (paired design); context memory
// resets at each grid point and carries across that point's samples.
std::vector<SweepRecord> sweep(const std::vector<Network>& networks,
                               const std::vector<Eigen::VectorXd>& grid,
                               const SweepConfig& config,
                               const lane::Track* track = nullptr);

struct HistogramSummary {
  std::vector<double> bin_lo, bin_hi;
  std::vector<long> counts;
  double mean = 0;
  double median = 0;
  double frac_a_better = 0;
  long wins = 0, ties = 0, losses = 0;
};

// Histogram of per-point differences metric_A - metric_B. Bins are
// left-closed, equal width, and symmetric about zero (the observed range is
// mirrored); `sense` decides which sign counts as "A better".
HistogramSummary diff_histogram(const std::vector<double>& diffs,
                                moea::Sense sense, int n_bins = 41);

// Convenience: per-point difference of one raw metric between two network
// slots of a sweep result.
std::vector<double> metric_diffs(const std::vector<SweepRecord>& records,
                                 int metric, int net_a, int net_b);

}  // namespace ctxskill

#endif
