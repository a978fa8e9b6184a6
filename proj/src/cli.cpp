#include "ctxskill/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <vector>

#include "ctxskill/analysis.hpp"
#include "ctxskill/csvio.hpp"
#include "ctxskill/generalize.hpp"
#include "ctxskill/parallel.hpp"
#include "ctxskill/trainer.hpp"

namespace ctxskill::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return json::parse(in);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

Eigen::VectorXd params_from_json(Domain domain, const json& map) {
  const DomainInfo& info = domain_info(domain);
  Eigen::VectorXd p = info.base;
  for (int k = 0; k < info.n_params; ++k) {
    if (map.contains(info.param_names[k]))
      p[k] = map.at(info.param_names[k]).get<double>();
  }
  return p;
}

json params_to_json(Domain domain, const Eigen::VectorXd& p) {
  const DomainInfo& info = domain_info(domain);
  json map;
  for (int k = 0; k < info.n_params; ++k) map[info.param_names[k]] = p[k];
  return map;
}

struct DomainTrainDefaults {
  int mu;
  int n_episodes;
  double perturb;
  StopRule stop;
};

DomainTrainDefaults train_defaults(Domain domain) {
  switch (domain) {
    case Domain::Flappy: return {96, 5, 0.2, {0.01, 22.0}};
    case Domain::Lander: return {96, 5, 0.1, {200.0, std::nullopt}};
    case Domain::Lane: return {48, 6, 0.15, {150.0, 5.0}};
  }
  throw std::invalid_argument("unknown domain");
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  c.domain = domain_from_string(j.at("domain").get<std::string>());
  c.kind = kind_from_string(j.at("kind").get<std::string>());
  const DomainTrainDefaults d = train_defaults(c.domain);
  c.mu = j.value("mu", d.mu);
  c.p_crossover = j.value("p_crossover", 0.9);
  c.n_gen = j.value("n_gen", 2500);
  c.n_episodes = j.value("n_episodes", d.n_episodes);
  c.perturb = j.value("perturb", d.perturb);
  c.seed = j.value("seed", std::uint64_t{1});
  c.workers = j.value("workers", 0);
  c.track_path = j.value("track", std::string{});
  c.stop = d.stop;
  if (j.contains("stop")) {
    const json& s = j.at("stop");
    if (s.contains("f0")) c.stop.f0 = s.at("f0").get<double>();
    if (s.contains("f1")) c.stop.f1 = s.at("f1").get<double>();
  }
  if (j.contains("base_params"))
    c.base = params_from_json(c.domain, j.at("base_params"));
  if (j.contains("init")) {
    c.init_lo = j.at("init").at(0).get<double>();
    c.init_hi = j.at("init").at(1).get<double>();
  }
  return c;
}

json train_config_to_json(const TrainConfig& c) {
  json j;
  j["domain"] = to_string(c.domain);
  j["kind"] = to_string(c.kind);
  j["mu"] = c.mu;
  j["p_crossover"] = c.p_crossover;
  j["n_gen"] = c.n_gen;
  j["n_episodes"] = c.n_episodes;
  j["perturb"] = c.perturb;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  if (!c.track_path.empty()) j["track"] = c.track_path;
  json stop;
  if (c.stop.f0) stop["f0"] = *c.stop.f0;
  if (c.stop.f1) stop["f1"] = *c.stop.f1;
  j["stop"] = stop;
  j["base_params"] = params_to_json(c.domain, c.base_or_default());
  j["init"] = {c.init_lo, c.init_hi};
  return j;
}

struct DomainSweepDefaults {
  double range_frac;
  int steps;
  int samples;
};

DomainSweepDefaults sweep_defaults(Domain domain) {
  switch (domain) {
    case Domain::Flappy: return {0.75, 10, 3};
    case Domain::Lander: return {0.50, 20, 3};
    case Domain::Lane: return {0.35, 35, 1};
  }
  throw std::invalid_argument("unknown domain");
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig c;
  c.domain = domain_from_string(j.at("domain").get<std::string>());
  const DomainSweepDefaults d = sweep_defaults(c.domain);
  c.range_frac = j.value("range_frac", d.range_frac);
  c.steps = j.value("steps", d.steps);
  c.samples = j.value("samples", d.samples);
  c.seed = j.value("seed", std::uint64_t{1});
  c.workers = j.value("workers", 0);
  c.track_path = j.value("track", std::string{});
  if (j.contains("base_params"))
    c.base = params_from_json(c.domain, j.at("base_params"));
  return c;
}

json sweep_config_to_json(const SweepConfig& c) {
  json j;
  j["domain"] = to_string(c.domain);
  j["range_frac"] = c.range_frac;
  j["steps"] = c.steps;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  if (!c.track_path.empty()) j["track"] = c.track_path;
  j["base_params"] = params_to_json(c.domain, c.base_or_default());
  return j;
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs,
                    const std::string& started_at, double elapsed_seconds) {
  json m;
  m["schema_version"] = 1;
  m["tool_version"] = kToolVersion;
  m["command"] = command;
  m["config"] = config;
  m["master_seed"] = seed;
  m["outputs"] = outputs;
  m["wall_clock"] = {{"started_at", started_at},
                     {"elapsed_seconds", elapsed_seconds}};
  write_json_file((fs::path(out_dir) / "manifest.json").string(), m);
}

void apply(const Overrides& o, std::uint64_t& seed, int& workers) {
  if (o.seed) seed = *o.seed;
  if (o.workers) workers = *o.workers;
}

int resolve_workers(int configured) {
  return configured > 0 ? configured : default_worker_count();
}

void write_trajectory_csv(const std::string& path, const EpisodeRecorder& rec) {
  write_csv(path, rec.traj_header, rec.traj_rows);
}

void write_module_trace_csv(const std::string& path, const std::string& name,
                            const Eigen::MatrixXd& trace) {
  std::vector<std::string> header{"tick"};
  for (int k = 0; k < trace.cols(); ++k)
    header.push_back(name + "_" + std::to_string(k));
  std::vector<std::vector<double>> rows;
  rows.reserve(trace.rows());
  for (int t = 0; t < trace.rows(); ++t) {
    std::vector<double> row{static_cast<double>(t + 1)};
    for (int k = 0; k < trace.cols(); ++k) row.push_back(trace(t, k));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

struct ScenarioConfig {
  Eigen::VectorXd params;
  std::optional<std::uint64_t> seed;
};

ScenarioConfig scenario_from_json(Domain domain, const json& j) {
  ScenarioConfig s;
  s.params = j.contains("params") ? params_from_json(domain, j.at("params"))
                                  : domain_info(domain).base;
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

const lane::Track* load_track_if_lane(Domain domain,
                                      const std::string& track_path,
                                      lane::Track& storage) {
  if (domain != Domain::Lane) return nullptr;
  storage = track_path.empty() ? lane::make_eval_track()
                               : lane::load_track_json(track_path);
  return &storage;
}

}  // namespace

int cmd_train(const std::string& config_path, const std::string& out_dir,
              const Overrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = timestamp_utc();
  try {
    TrainConfig config = train_config_from_json(load_json_file(config_path));
    apply(overrides, config.seed, config.workers);
    const json config_snapshot = train_config_to_json(config);
    config.workers = resolve_workers(config.workers);

    const EvolutionResult result = run_evolution(config);
    const DomainInfo& info = domain_info(config.domain);
    const ArchSpec arch = make_arch(config.domain, config.kind);

    fs::create_directories(fs::path(out_dir) / "archive");
    std::vector<std::string> outputs{"generations.csv", "manifest.json",
                                     "archive/front_manifest.json"};
    result.log.write_csv((fs::path(out_dir) / "generations.csv").string());

    json front_manifest;
    front_manifest["objectives"] = {info.objective_names[0],
                                    info.objective_names[1]};
    front_manifest["senses"] = {
        info.senses[0] == moea::Sense::Maximize ? "max" : "min",
        info.senses[1] == moea::Sense::Maximize ? "max" : "min"};
    json members = json::array();
    std::vector<moea::Individual> front;
    for (std::size_t k = 0; k < result.front0.size(); ++k) {
      const moea::Individual& ind = result.parents[result.front0[k]];
      front.push_back(ind);
      char name[32];
      std::snprintf(name, sizeof(name), "genome_%03zu.json", k);
      const std::string file = (fs::path(out_dir) / "archive" / name).string();
      save_genome_json(file, ind.genome, arch);
      outputs.push_back(std::string("archive/") + name);
      const Eigen::Vector2d raw =
          moea::decanonicalize(ind.objectives, info.senses);
      members.push_back({{"file", name},
                         {"f0", raw[0]},
                         {"f1", raw[1]},
                         {"rank", ind.rank},
                         {"crowding", ind.crowding}});
    }
    front_manifest["members"] = members;
    write_json_file(
        (fs::path(out_dir) / "archive" / "front_manifest.json").string(),
        front_manifest);

    int exit_code = 0;
    try {
      const int pick = select_final(front, config.domain, config.stop);
      save_genome_json((fs::path(out_dir) / "final_genome.json").string(),
                       front[pick].genome, arch);
      outputs.push_back("final_genome.json");
    } catch (const NoSafeIndividualError& e) {
      std::cerr << "selection: " << e.what() << "\n";
      exit_code = 3;
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_manifest(out_dir, "train", config_snapshot, config.seed, outputs,
                   started, elapsed);
    std::cout << "train: " << result.generations_run << " generations, "
              << result.front0.size() << " front-0 members, "
              << result.log.evaluation_count << " episode evaluations"
              << (result.stopped_early ? ", stopped early" : "") << "\n";
    return exit_code;
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 2;
  }
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& genome_cs, const std::string& genome_c,
              const std::string& genome_s, const Overrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = timestamp_utc();
  try {
    SweepConfig config = sweep_config_from_json(load_json_file(config_path));
    apply(overrides, config.seed, config.workers);
    const json config_snapshot = sweep_config_to_json(config);
    config.workers = resolve_workers(config.workers);
    const DomainInfo& info = domain_info(config.domain);

    std::vector<std::string> slot_names;
    std::vector<Network> networks;
    for (const auto& [slot, path] :
         {std::pair{std::string("CS"), genome_cs},
          std::pair{std::string("C"), genome_c},
          std::pair{std::string("S"), genome_s}}) {
      if (path.empty()) continue;
      const auto [genome, arch] = load_genome_json(path);
      networks.push_back(decode(genome, arch));
      slot_names.push_back(slot);
    }
    if (networks.empty())
      throw std::invalid_argument("at least one genome slot is required");

    lane::Track track_storage;
    const lane::Track* track =
        load_track_if_lane(config.domain, config.track_path, track_storage);

    const auto grid = build_grid(config);
    const auto records = sweep(networks, grid, config, track);

    fs::create_directories(out_dir);
    std::vector<std::string> outputs{"sweep.csv", "summary.json",
                                     "manifest.json"};

    // Sweep table: grid coordinates, parameters, then per-network metrics.
    std::vector<std::string> header;
    for (const auto& p : info.param_names) header.push_back("i_" + p);
    for (const auto& p : info.param_names) header.push_back(p);
    for (const auto& slot : slot_names) {
      header.push_back(slot + "_" + info.objective_names[0]);
      header.push_back(slot + "_" + info.objective_names[1]);
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(records.size());
    for (const SweepRecord& rec : records) {
      std::vector<double> row;
      for (int c : rec.coords) row.push_back(c);
      for (int k = 0; k < rec.params.size(); ++k) row.push_back(rec.params[k]);
      for (const auto& m : rec.per_network) {
        row.push_back(m[0]);
        row.push_back(m[1]);
      }
      rows.push_back(std::move(row));
    }
    write_csv((fs::path(out_dir) / "sweep.csv").string(), header, rows);

    json summary;
    summary["episodes_per_network"] = config.episode_count_per_network();
    summary["grid_points"] = config.grid_points();
    json pair_summaries;
    const std::vector<std::pair<std::string, std::string>> wanted_pairs{
        {"CS", "S"}, {"CS", "C"}, {"C", "S"}};
    auto slot_index = [&](const std::string& s) -> int {
      for (std::size_t i = 0; i < slot_names.size(); ++i)
        if (slot_names[i] == s) return static_cast<int>(i);
      return -1;
    };
    for (const auto& [a, b] : wanted_pairs) {
      const int ia = slot_index(a), ib = slot_index(b);
      if (ia < 0 || ib < 0) continue;
      json metrics;
      for (int m = 0; m < 2; ++m) {
        const auto diffs = metric_diffs(records, m, ia, ib);
        const HistogramSummary h = diff_histogram(diffs, info.senses[m]);
        const std::string file =
            "hist_" + info.objective_names[m] + "_" + a + "-" + b + ".csv";
        std::vector<std::vector<double>> hist_rows;
        for (std::size_t bin = 0; bin < h.counts.size(); ++bin)
          hist_rows.push_back({h.bin_lo[bin], h.bin_hi[bin],
                               static_cast<double>(h.counts[bin])});
        write_csv((fs::path(out_dir) / file).string(),
                  {"bin_lo", "bin_hi", "count"}, hist_rows);
        outputs.push_back(file);
        metrics[info.objective_names[m]] = {
            {"mean", h.mean},           {"median", h.median},
            {"frac_a_better", h.frac_a_better}, {"wins", h.wins},
            {"ties", h.ties},           {"losses", h.losses},
            {"histogram", file}};
      }
      pair_summaries[a + "-" + b] = metrics;
    }
    summary["pairs"] = pair_summaries;
    write_json_file((fs::path(out_dir) / "summary.json").string(), summary);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_manifest(out_dir, "sweep", config_snapshot, config.seed, outputs,
                   started, elapsed);
    std::cout << "sweep: " << records.size() << " grid points, "
              << networks.size() << " networks\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return 2;
  }
}

int cmd_analyze(const std::string& genome_path,
                const std::string& scenario_path, const std::string& out_dir,
                const Overrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = timestamp_utc();
  try {
    const auto [genome, arch] = load_genome_json(genome_path);
    const Network net = decode(genome, arch);

    // The genome file does not carry the domain; infer it from the sensor
    // and action widths.
    Domain domain;
    if (arch.sensory_dim == 6 && arch.action_dim == 2)
      domain = Domain::Flappy;
    else if (arch.sensory_dim == 8)
      domain = Domain::Lander;
    else
      domain = Domain::Lane;
    const DomainInfo& info = domain_info(domain);

    const json sj = load_json_file(scenario_path);
    const ScenarioConfig scenario = scenario_from_json(domain, sj);
    std::uint64_t seed = scenario.seed.value_or(1);
    if (overrides.seed) seed = *overrides.seed;

    lane::Track track_storage;
    const lane::Track* track = load_track_if_lane(
        domain, sj.value("track", std::string{}), track_storage);

    const ModuleTraces nominal =
        record_module_outputs(net, domain, info.base, seed, track);
    const ModuleTraces general =
        record_module_outputs(net, domain, scenario.params, seed, track);

    fs::create_directories(out_dir);
    std::vector<std::string> outputs{"stats.csv", "manifest.json"};
    auto dump_traces = [&](const std::string& tag, const ModuleTraces& tr) {
      write_trajectory_csv((fs::path(out_dir) / ("traj_" + tag + ".csv")).string(),
                           tr.recorder);
      outputs.push_back("traj_" + tag + ".csv");
      if (tr.skill.rows()) {
        const std::string f = "trace_" + tag + "_skill.csv";
        write_module_trace_csv((fs::path(out_dir) / f).string(), "skill",
                               tr.skill);
        outputs.push_back(f);
      }
      if (tr.context.rows()) {
        const std::string f = "trace_" + tag + "_context.csv";
        write_module_trace_csv((fs::path(out_dir) / f).string(), "context",
                               tr.context);
        outputs.push_back(f);
      }
    };
    dump_traces("nominal", nominal);
    dump_traces("scenario", general);

    const auto rows = module_diff_rows(nominal, general);
    {
      std::ofstream out(fs::path(out_dir) / "stats.csv");
      if (!out) throw std::runtime_error("cannot write stats.csv");
      out << "network,module,pc,msd,std\n";
      for (const ModuleDiffRow& r : rows) {
        out << to_string(arch.kind) << ',' << r.module << ',' << r.pc << ','
            << format_double(r.msd) << ',' << format_double(r.std_dev) << '\n';
      }
    }

    json snapshot;
    snapshot["genome"] = genome_path;
    snapshot["scenario"] = sj;
    snapshot["seed"] = seed;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_manifest(out_dir, "analyze", snapshot, seed, outputs, started,
                   elapsed);
    std::cout << "analyze: " << rows.size() << " stat rows\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return 2;
  }
}

int cmd_replay(const std::string& genome_path,
               const std::string& scenario_path, const std::string& out_dir,
               const Overrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = timestamp_utc();
  try {
    const auto [genome, arch] = load_genome_json(genome_path);
    const Network net = decode(genome, arch);
    Domain domain;
    if (arch.sensory_dim == 6 && arch.action_dim == 2)
      domain = Domain::Flappy;
    else if (arch.sensory_dim == 8)
      domain = Domain::Lander;
    else
      domain = Domain::Lane;

    json sj = json::object();
    if (!scenario_path.empty()) sj = load_json_file(scenario_path);
    const ScenarioConfig scenario = scenario_from_json(domain, sj);
    std::uint64_t seed = scenario.seed.value_or(1);
    if (overrides.seed) seed = *overrides.seed;

    lane::Track track_storage;
    const lane::Track* track = load_track_if_lane(
        domain, sj.value("track", std::string{}), track_storage);

    EpisodeRecorder rec;
    LstmState state(arch.lstm_size);
    const Eigen::Vector2d raw = run_episode(domain, scenario.params, net,
                                            state, seed, track, &rec);

    fs::create_directories(out_dir);
    write_trajectory_csv((fs::path(out_dir) / "trajectory.csv").string(), rec);

    json snapshot;
    snapshot["genome"] = genome_path;
    snapshot["params"] = params_to_json(domain, scenario.params);
    snapshot["seed"] = seed;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_manifest(out_dir, "replay", snapshot, seed,
                   {"trajectory.csv", "manifest.json"}, started, elapsed);
    std::cout << "replay: " << rec.traj_rows.size() << " ticks, f0="
              << format_double(raw[0]) << " f1=" << format_double(raw[1])
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "replay: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ctxskill::cli
