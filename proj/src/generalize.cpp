#include "ctxskill/generalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctxskill/parallel.hpp"

namespace ctxskill {

std::vector<Eigen::VectorXd> build_grid(const SweepConfig& config) {
  const DomainInfo& info = domain_info(config.domain);
  const Eigen::VectorXd base = config.base_or_default();
  if (config.steps < 2) throw std::invalid_argument("steps must be >= 2");

  std::vector<std::vector<double>> axes(info.n_params);
  for (int k = 0; k < info.n_params; ++k) {
    const double a = base[k] * (1.0 - config.range_frac);
    const double b = base[k] * (1.0 + config.range_frac);
    const double lo = std::min(a, b), hi = std::max(a, b);
    axes[k].resize(config.steps);
    for (int s = 0; s < config.steps; ++s)
      axes[k][s] = lo + (hi - lo) * s / (config.steps - 1);
  }

  std::vector<Eigen::VectorXd> grid;
  grid.reserve(config.grid_points());
  std::vector<int> idx(info.n_params, 0);
  while (true) {
    Eigen::VectorXd p(info.n_params);
    for (int k = 0; k < info.n_params; ++k) p[k] = axes[k][idx[k]];
    grid.push_back(std::move(p));
    int k = info.n_params - 1;
    while (k >= 0 && ++idx[k] == config.steps) idx[k--] = 0;
    if (k < 0) break;
  }
  return grid;
}

std::vector<SweepRecord> sweep(const std::vector<Network>& networks,
                               const std::vector<Eigen::VectorXd>& grid,
                               const SweepConfig& config,
                               const lane::Track* track) {
  if (networks.empty()) throw std::invalid_argument("no networks to sweep");
  const DomainInfo& info = domain_info(config.domain);

  std::vector<SweepRecord> records(grid.size());
  parallel_for(grid.size(), config.workers, [&](std::size_t g) {
    SweepRecord rec;
    rec.params = grid[g];
    rec.coords.resize(info.n_params);
    // Recover grid coordinates from the point index (last axis fastest).
    long rem = static_cast<long>(g);
    for (int k = info.n_params - 1; k >= 0; --k) {
      rec.coords[k] = static_cast<int>(rem % config.steps);
      rem /= config.steps;
    }
    rec.per_network.assign(networks.size(), Eigen::Vector2d::Zero());
    for (std::size_t n = 0; n < networks.size(); ++n) {
      LstmState state(networks[n].arch.lstm_size);  // reset per grid point
      Eigen::Vector2d sum = Eigen::Vector2d::Zero();
      for (int s = 0; s < config.samples; ++s) {
        // Identical seeds across networks: paired comparisons.
        const std::uint64_t seed =
            splitmix64(config.seed ^ splitmix64(g * 1000003ULL + s));
        sum += run_episode(config.domain, grid[g], networks[n], state, seed,
                           track);
      }
      rec.per_network[n] = sum / config.samples;
    }
    records[g] = std::move(rec);
  });
  return records;
}

std::vector<double> metric_diffs(const std::vector<SweepRecord>& records,
                                 int metric, int net_a, int net_b) {
  std::vector<double> diffs;
  diffs.reserve(records.size());
  for (const SweepRecord& rec : records)
    diffs.push_back(rec.per_network.at(net_a)[metric] -
                    rec.per_network.at(net_b)[metric]);
  return diffs;
}

HistogramSummary diff_histogram(const std::vector<double>& diffs,
                                moea::Sense sense, int n_bins) {
  if (diffs.empty()) throw std::invalid_argument("no differences to bin");
  if (n_bins < 1) throw std::invalid_argument("n_bins must be positive");

  HistogramSummary h;
  double max_abs = 0;
  for (double d : diffs) max_abs = std::max(max_abs, std::abs(d));
  if (max_abs == 0) max_abs = 1e-9;  // all-zero diffs: keep bins well formed

  const double lo = -max_abs, width = 2 * max_abs / n_bins;
  h.bin_lo.resize(n_bins);
  h.bin_hi.resize(n_bins);
  h.counts.assign(n_bins, 0);
  for (int b = 0; b < n_bins; ++b) {
    h.bin_lo[b] = lo + b * width;
    h.bin_hi[b] = lo + (b + 1) * width;
  }
  for (double d : diffs) {
    int b = static_cast<int>(std::floor((d - lo) / width));
    b = std::clamp(b, 0, n_bins - 1);  // right edge closes the last bin
    h.counts[b]++;
  }

  double sum = 0;
  for (double d : diffs) sum += d;
  h.mean = sum / diffs.size();

  std::vector<double> sorted = diffs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  h.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  for (double d : diffs) {
    if (d == 0) {
      h.ties++;
    } else if ((sense == moea::Sense::Minimize) == (d < 0)) {
      h.wins++;
    } else {
      h.losses++;
    }
  }
  h.frac_a_better = static_cast<double>(h.wins) / diffs.size();
  return h;
}

}  // namespace ctxskill
