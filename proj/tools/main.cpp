#include <CLI11.hpp>
#include <cstdint>
#include <string>

#include "ctxskill/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ctxskill: neuroevolution of context-modulated controllers"};
  app.require_subcommand(1);

  ctxskill::cli::Overrides overrides;
  std::string out_dir;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { overrides.seed = v; },
        "master seed override");
    cmd->add_option_function<int>(
        "--workers", [&](int v) { overrides.workers = v; },
        "worker thread count override");
  };

  std::string config_path, genome_cs, genome_c, genome_s, genome_path,
      scenario_path;

  CLI::App* train = app.add_subcommand("train", "evolve a population");
  train->add_option("--config", config_path, "train config JSON")->required();
  add_common(train);

  CLI::App* sweep = app.add_subcommand("sweep", "generalization grid sweep");
  sweep->add_option("--config", config_path, "sweep config JSON")->required();
  sweep->add_option("--cs", genome_cs, "CS genome JSON");
  sweep->add_option("--c", genome_c, "C genome JSON");
  sweep->add_option("--s", genome_s, "S genome JSON");
  add_common(sweep);

  CLI::App* analyze =
      app.add_subcommand("analyze", "module-output difference statistics");
  analyze->add_option("--genome", genome_path, "genome JSON")->required();
  analyze->add_option("--scenario", scenario_path, "scenario JSON")->required();
  add_common(analyze);

  CLI::App* replay = app.add_subcommand("replay", "dump one trajectory");
  replay->add_option("--genome", genome_path, "genome JSON")->required();
  replay->add_option("--scenario", scenario_path, "scenario JSON (optional)");
  add_common(replay);

  CLI11_PARSE(app, argc, argv);

  if (train->parsed())
    return ctxskill::cli::cmd_train(config_path, out_dir, overrides);
  if (sweep->parsed())
    return ctxskill::cli::cmd_sweep(config_path, out_dir, genome_cs, genome_c,
                                    genome_s, overrides);
  if (analyze->parsed())
    return ctxskill::cli::cmd_analyze(genome_path, scenario_path, out_dir,
                                      overrides);
  if (replay->parsed())
    return ctxskill::cli::cmd_replay(genome_path, scenario_path, out_dir,
                                     overrides);
  return 2;
}
