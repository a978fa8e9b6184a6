#ifndef CTXSKILL_CLI_HPP
#define CTXSKILL_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace ctxskill::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Command-line overrides applied on top of config files.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

// Exit codes: 0 success, 2 configuration/input error, 3 no safe individual
// available at final selection.
int cmd_train(const std::string& config_path, const std::string& out_dir,
              const Overrides& overrides = {});

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& genome_cs, const std::string& genome_c,
              const std::string& genome_s, const Overrides& overrides = {});

int cmd_analyze(const std::string& genome_path,
                const std::string& scenario_path, const std::string& out_dir,
                const Overrides& overrides = {});

int cmd_replay(const std::string& genome_path,
               const std::string& scenario_path, const std::string& out_dir,
               const Overrides& overrides = {});

}  // namespace ctxskill::cli

#endif
