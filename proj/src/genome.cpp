#include "ctxskill/genome.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace ctxskill {

using nlohmann::json;

Genome random_genome(const ArchSpec& arch, Rng& rng, double lo, double hi) {
  Genome g;
  g.lo = lo;
  g.hi = hi;
  const int n = param_count(arch);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) g.weights[i] = rng.uniform(lo, hi);
  return g;
}

Genome zero_genome(const ArchSpec& arch, double lo, double hi) {
  Genome g;
  g.lo = lo;
  g.hi = hi;
  g.weights = Eigen::VectorXd::Zero(param_count(arch));
  return g;
}

void save_genome_json(const std::string& path, const Genome& genome,
                      const ArchSpec& arch) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(arch.kind);
  j["arch"] = {{"sensory_dim", arch.sensory_dim},
               {"skill_hidden", arch.skill_hidden},
               {"skill_out", arch.skill_out},
               {"lstm_size", arch.lstm_size},
               {"ctrl_hidden", arch.ctrl_hidden},
               {"action_dim", arch.action_dim},
               {"context_aux_dim", arch.context_aux_dim}};
  j["bounds"] = {genome.lo, genome.hi};
  std::vector<double> w(genome.weights.data(),
                        genome.weights.data() + genome.weights.size());
  j["weights"] = w;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

std::pair<Genome, ArchSpec> load_genome_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open genome file: " + path);
  json j = json::parse(in);
  ArchSpec arch;
  arch.kind = kind_from_string(j.at("kind").get<std::string>());
  const json& a = j.at("arch");
  arch.sensory_dim = a.at("sensory_dim").get<int>();
  arch.skill_hidden = a.at("skill_hidden").get<int>();
  arch.skill_out = a.at("skill_out").get<int>();
  arch.lstm_size = a.at("lstm_size").get<int>();
  arch.ctrl_hidden = a.at("ctrl_hidden").get<int>();
  arch.action_dim = a.at("action_dim").get<int>();
  arch.context_aux_dim = a.at("context_aux_dim").get<int>();
  Genome g;
  g.lo = j.at("bounds").at(0).get<double>();
  g.hi = j.at("bounds").at(1).get<double>();
  const auto w = j.at("weights").get<std::vector<double>>();
  if (static_cast<int>(w.size()) != param_count(arch)) {
    throw std::invalid_argument("genome length " + std::to_string(w.size()) +
                                " does not match architecture (" +
                                std::to_string(param_count(arch)) + ")");
  }
  g.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  return {g, arch};
}

}  // namespace ctxskill
