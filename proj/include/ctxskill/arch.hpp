#ifndef CTXSKILL_ARCH_HPP
#define CTXSKILL_ARCH_HPP

#include <string>
#include <vector>

namespace ctxskill {

// Network variants: skill-only, context-only, and the combined network.
enum class Kind { S, C, CS };

enum class Domain { Flappy, Lander, Lane };

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);
std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

// Structural description of one controller network. The hidden sizes are
// fixed across all domains; only the sensor and action widths vary.
struct ArchSpec {
  Kind kind = Kind::CS;
  int sensory_dim = 0;
  int skill_hidden = 10;
  int skill_out = 5;
  int lstm_size = 10;
  int ctrl_hidden = 20;
  int action_dim = 0;
  int context_aux_dim = 1;

  bool has_skill() const { return kind == Kind::S || kind == Kind::CS; }
  bool has_context() const { return kind == Kind::C || kind == Kind::CS; }

  // Width of the controller's input layer.
  int controller_in() const {
    return (has_skill() ? skill_out : 0) + (has_context() ? lstm_size : 0);
  }

  // Width of the LSTM input: raw observation plus the auxiliary clock input.
  int lstm_in() const { return sensory_dim + context_aux_dim; }

  bool operator==(const ArchSpec&) const = default;
};

// Total number of weights and biases in the flat genome.
int param_count(const ArchSpec& arch);

ArchSpec make_arch(Domain domain, Kind kind);

// One contiguous block of the flat genome layout. Biases are blocks with
// cols == 1. Matrices are stored row-major.
struct LayoutBlock {
  std::string name;
  int offset = 0;
  int rows = 0;
  int cols = 0;
  int size() const { return rows * cols; }
};

// The documented genome layout: skill layers first (w1, b1, w2, b2), then
// the LSTM gates in order input/forget/cell/output (each matrix followed by
// its bias), then the controller layers (wh, bh, wo, bo).
std::vector<LayoutBlock> genome_layout(const ArchSpec& arch);

}  // namespace ctxskill

#endif
