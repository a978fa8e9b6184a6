#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "ctxskill/cli.hpp"
#include "ctxskill/env/lane.hpp"
#include "ctxskill/genome.hpp"

using namespace ctxskill;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = CTXSKILL_BIN;
const fs::path kSource = CTXSKILL_SOURCE_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ctxskill_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const int status = std::system((kBin + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// A small but real training config shared by several cases.
json desk_config() {
  return json{{"domain", "flappy"}, {"kind", "S"},      {"mu", 8},
              {"n_gen", 1},         {"n_episodes", 2},  {"perturb", 0.2},
              {"seed", 11},         {"workers", 2},
              {"stop", {{"f0", 0.01}, {"f1", 22.0}}}};
}

}  // namespace

TEST_CASE("malformed config JSON exits with code 2") {
  const fs::path dir = fresh_dir("badjson");
  write_file(dir / "bad.json", "{ not json !");
  CHECK(run("train --config " + (dir / "bad.json").string() + " --out " +
            (dir / "out").string()) == 2);
}

TEST_CASE("missing genome file exits with code 2") {
  const fs::path dir = fresh_dir("missing_genome");
  write_file(dir / "sweep.json",
             R"({"domain":"flappy","steps":2,"samples":1,"range_frac":0.5})");
  CHECK(run("sweep --config " + (dir / "sweep.json").string() +
            " --s /nonexistent/genome.json --out " + (dir / "out").string()) ==
        2);
}

TEST_CASE("train smoke run: exit 0 and complete artifacts") {
  const fs::path dir = fresh_dir("train_smoke");
  write_file(dir / "config.json", desk_config().dump());
  // The random desk population will not meet the safety threshold, so
  // selection reports exit code 3 while still writing the archive.
  const int code = run("train --config " + (dir / "config.json").string() +
                       " --out " + (dir / "out").string());
  CHECK(code == 3);
  CHECK(fs::exists(dir / "out" / "generations.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK(fs::exists(dir / "out" / "archive" / "front_manifest.json"));
  CHECK(fs::exists(dir / "out" / "archive" / "genome_000.json"));
  CHECK(!fs::exists(dir / "out" / "final_genome.json"));

  // One generation of evolution: rows for gen 0 and gen 1.
  const std::string log = slurp(dir / "out" / "generations.csv");
  CHECK(log.starts_with("gen,ind,f0,f1,rank,crowding\n"));
  CHECK(log.find("\n1,") != std::string::npos);
  CHECK(log.find("\n2,") == std::string::npos);

  const json manifest = json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest.at("schema_version") == 1);
  CHECK(manifest.at("command") == "train");
  CHECK(manifest.at("config").at("mu") == 8);
}

TEST_CASE("train with a relaxed stop rule emits a final genome, exit 0") {
  const fs::path dir = fresh_dir("train_final");
  json cfg = desk_config();
  cfg["stop"] = {{"f0", 1e9}, {"f1", -1e9}};
  write_file(dir / "config.json", cfg.dump());
  CHECK(run("train --config " + (dir / "config.json").string() + " --out " +
            (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "final_genome.json"));
  const auto [genome, arch] =
      load_genome_json((dir / "out" / "final_genome.json").string());
  CHECK(arch.kind == Kind::S);
  CHECK(genome.weights.size() == 287);
}

TEST_CASE("identical config and seed reproduce the log byte for byte") {
  const fs::path dir = fresh_dir("train_repro");
  write_file(dir / "config.json", desk_config().dump());
  REQUIRE(run("train --config " + (dir / "config.json").string() + " --out " +
              (dir / "a").string()) == 3);
  REQUIRE(run("train --config " + (dir / "config.json").string() + " --out " +
              (dir / "b").string()) == 3);
  CHECK(slurp(dir / "a" / "generations.csv") ==
        slurp(dir / "b" / "generations.csv"));
  CHECK(slurp(dir / "a" / "archive" / "genome_000.json") ==
        slurp(dir / "b" / "archive" / "genome_000.json"));
}

TEST_CASE("--workers changes no output bytes") {
  const fs::path dir = fresh_dir("train_workers");
  write_file(dir / "config.json", desk_config().dump());
  REQUIRE(run("train --config " + (dir / "config.json").string() +
              " --workers 1 --out " + (dir / "w1").string()) == 3);
  REQUIRE(run("train --config " + (dir / "config.json").string() +
              " --workers 8 --out " + (dir / "w8").string()) == 3);
  CHECK(slurp(dir / "w1" / "generations.csv") ==
        slurp(dir / "w8" / "generations.csv"));
}

TEST_CASE("replay of a zero-weight flappy genome descends to the ground") {
  const fs::path dir = fresh_dir("replay_zero");
  const ArchSpec arch = make_arch(Domain::Flappy, Kind::S);
  save_genome_json((dir / "zero.json").string(), zero_genome(arch), arch);
  CHECK(run("replay --genome " + (dir / "zero.json").string() + " --seed 4" +
            " --out " + (dir / "out").string()) == 0);

  const std::string traj = slurp(dir / "out" / "trajectory.csv");
  CHECK(traj.starts_with(
      "tick,y,vx,vy,action_up,action_fwd,pipes_passed,hit_ticks,"
      "boundary_ticks\n"));
  // Monotone descent: y never decreases for a glider.
  std::istringstream lines(traj);
  std::string line;
  std::getline(lines, line);  // header
  double prev_y = 0;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const auto next = line.find(',', comma + 1);
    const double y = std::stod(line.substr(comma + 1, next - comma - 1));
    CHECK(y >= prev_y);
    prev_y = y;
    rows++;
  }
  CHECK(rows == 2400);
  CHECK(prev_y == 512.0);
}

TEST_CASE("analyze with the base scenario gives all-zero stats") {
  const fs::path dir = fresh_dir("analyze_base");
  Rng rng(8);
  const ArchSpec arch = make_arch(Domain::Flappy, Kind::CS);
  save_genome_json((dir / "net.json").string(), random_genome(arch, rng), arch);
  write_file(dir / "scenario.json", R"({"params": {}, "seed": 3})");
  CHECK(run("analyze --genome " + (dir / "net.json").string() + " --scenario " +
            (dir / "scenario.json").string() + " --out " +
            (dir / "out").string()) == 0);

  const std::string stats = slurp(dir / "out" / "stats.csv");
  std::istringstream lines(stats);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "network,module,pc,msd,std");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.find(",0,0") != std::string::npos);  // msd,std both zero
    rows++;
  }
  CHECK(rows == 4);  // CS: context + skill, two PCs each
  CHECK(fs::exists(dir / "out" / "trace_nominal_context.csv"));
  CHECK(fs::exists(dir / "out" / "trace_scenario_skill.csv"));
}

TEST_CASE("analyze accepts the committed behavior scenario") {
  const fs::path dir = fresh_dir("analyze_scenario");
  Rng rng(12);
  const ArchSpec arch = make_arch(Domain::Flappy, Kind::CS);
  save_genome_json((dir / "net.json").string(), random_genome(arch, rng), arch);
  const fs::path scenario = kSource / "configs" / "scenario_fb_behavior.json";
  REQUIRE(fs::exists(scenario));
  CHECK(run("analyze --genome " + (dir / "net.json").string() + " --scenario " +
            scenario.string() + " --out " + (dir / "out").string()) == 0);
  const json parsed = json::parse(slurp(scenario));
  CHECK(parsed.at("params").at("flap") == -7.0);
  CHECK(parsed.at("params").at("fwd") == 8.75);
  CHECK(parsed.at("params").at("gravity") == 0.58);
  CHECK(parsed.at("params").at("drag") == 0.58);
}

TEST_CASE("sweep over two slots writes the table, histograms and summary") {
  const fs::path dir = fresh_dir("sweep_two");
  Rng rng(15);
  const ArchSpec arch_s = make_arch(Domain::Flappy, Kind::S);
  const ArchSpec arch_cs = make_arch(Domain::Flappy, Kind::CS);
  save_genome_json((dir / "s.json").string(), random_genome(arch_s, rng), arch_s);
  save_genome_json((dir / "cs.json").string(), random_genome(arch_cs, rng),
                   arch_cs);
  write_file(dir / "sweep.json",
             R"({"domain":"flappy","range_frac":0.75,"steps":2,"samples":1,)"
             R"("seed":3,"workers":2})");
  CHECK(run("sweep --config " + (dir / "sweep.json").string() + " --cs " +
            (dir / "cs.json").string() + " --s " + (dir / "s.json").string() +
            " --out " + (dir / "out").string()) == 0);

  const std::string table = slurp(dir / "out" / "sweep.csv");
  CHECK(table.starts_with(
      "i_flap,i_fwd,i_gravity,i_drag,flap,fwd,gravity,drag,"
      "CS_hits,CS_pipes,S_hits,S_pipes\n"));
  int rows = -1;
  for (const char c : table) rows += c == '\n';
  CHECK(rows == 16);  // 2^4 grid points

  CHECK(fs::exists(dir / "out" / "hist_hits_CS-S.csv"));
  CHECK(fs::exists(dir / "out" / "hist_pipes_CS-S.csv"));
  CHECK(!fs::exists(dir / "out" / "hist_hits_CS-C.csv"));  // slot C absent

  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary.at("grid_points") == 16);
  CHECK(summary.at("pairs").contains("CS-S"));
  CHECK(!summary.at("pairs").contains("CS-C"));
}

TEST_CASE("one genome supplied for two slots yields zero-centred histograms") {
  const fs::path dir = fresh_dir("sweep_same");
  Rng rng(16);
  const ArchSpec arch = make_arch(Domain::Flappy, Kind::S);
  save_genome_json((dir / "g.json").string(), random_genome(arch, rng), arch);
  write_file(dir / "sweep.json",
             R"({"domain":"flappy","range_frac":0.5,"steps":2,"samples":1,)"
             R"("seed":5})");
  CHECK(run("sweep --config " + (dir / "sweep.json").string() + " --cs " +
            (dir / "g.json").string() + " --s " + (dir / "g.json").string() +
            " --out " + (dir / "out").string()) == 0);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  const json& pair = summary.at("pairs").at("CS-S");
  CHECK(pair.at("hits").at("mean") == 0.0);
  CHECK(pair.at("pipes").at("mean") == 0.0);
  CHECK(pair.at("hits").at("ties") == 16);
}

TEST_CASE("committed configs parse and enumerate paper-scale counts") {
  for (const char* name :
       {"train_fb_s_paper.json", "train_fb_c_paper.json",
        "train_fb_cs_paper.json", "train_ll_cs_paper.json",
        "train_lane_cs_paper.json", "train_fb_desk.json", "train_ll_desk.json",
        "train_lane_desk.json", "sweep_fb_paper.json", "sweep_ll_paper.json",
        "sweep_lane_paper.json", "sweep_fb_desk.json", "sweep_ll_desk.json",
        "sweep_lane_desk.json", "scenario_fb_behavior.json"}) {
    const fs::path p = kSource / "configs" / name;
    REQUIRE_MESSAGE(fs::exists(p), name);
    CHECK_NOTHROW(json::parse(slurp(p)));
  }
  const json fb = json::parse(slurp(kSource / "configs" / "sweep_fb_paper.json"));
  CHECK(fb.at("steps") == 10);
  CHECK(fb.at("samples") == 3);
  const json fb_train =
      json::parse(slurp(kSource / "configs" / "train_fb_cs_paper.json"));
  CHECK(fb_train.at("mu") == 96);
  CHECK(fb_train.at("n_gen") == 2500);
  CHECK(fb_train.at("p_crossover") == 0.9);
}

TEST_CASE("committed track fixtures match the built-in generators") {
  const lane::Track train =
      lane::load_track_json((kSource / "data/tracks/train_s_curve.json").string());
  const lane::Track gen = lane::make_training_track();
  REQUIRE(train.points.size() == gen.points.size());
  for (std::size_t i = 0; i < gen.points.size(); ++i)
    CHECK(train.points[i] == gen.points[i]);
  const lane::Track eval =
      lane::load_track_json((kSource / "data/tracks/eval_hairpin.json").string());
  CHECK(eval.name == "eval_hairpin");
}
