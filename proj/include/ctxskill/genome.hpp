#ifndef CTXSKILL_GENOME_HPP
#define CTXSKILL_GENOME_HPP

#include <Eigen/Core>
#include <string>
#include <utility>

#include "ctxskill/arch.hpp"
#include "ctxskill/rng.hpp"

namespace ctxskill {

// Flat real-valued encoding of one network. Every gene lies in [lo, hi];
// the bounds are uniform across genes.
struct Genome {
  Eigen::VectorXd weights;
  double lo = -5.0;
  double hi = 5.0;
};

// Fresh genome with genes drawn uniformly from [lo, hi].
Genome random_genome(const ArchSpec& arch, Rng& rng, double lo = -5.0,
                     double hi = 5.0);

Genome zero_genome(const ArchSpec& arch, double lo = -5.0, double hi = 5.0);

// JSON persistence: {schema_version, kind, arch, bounds, weights}. Weights
// survive a save/load round trip bit-exactly.
void save_genome_json(const std::string& path, const Genome& genome,
                      const ArchSpec& arch);
std::pair<Genome, ArchSpec> load_genome_json(const std::string& path);

}  // namespace ctxskill

#endif
