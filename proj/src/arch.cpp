#include "ctxskill/arch.hpp"

#include <stdexcept>

namespace ctxskill {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::S: return "S";
    case Kind::C: return "C";
    case Kind::CS: return "CS";
  }
  throw std::invalid_argument("unknown kind");
}

Kind kind_from_string(const std::string& s) {
  if (s == "S") return Kind::S;
  if (s == "C") return Kind::C;
  if (s == "CS") return Kind::CS;
  throw std::invalid_argument("unknown network kind: " + s);
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::Flappy: return "flappy";
    case Domain::Lander: return "lander";
    case Domain::Lane: return "lane";
  }
  throw std::invalid_argument("unknown domain");
}

Domain domain_from_string(const std::string& s) {
  if (s == "flappy") return Domain::Flappy;
  if (s == "lander") return Domain::Lander;
  if (s == "lane") return Domain::Lane;
  throw std::invalid_argument("unknown domain: " + s);
}

int param_count(const ArchSpec& a) {
  int total = 0;
  if (a.has_skill()) {
    total += a.sensory_dim * a.skill_hidden + a.skill_hidden;
    total += a.skill_hidden * a.skill_out + a.skill_out;
  }
  if (a.has_context()) {
    total += 4 * ((a.lstm_in() + a.lstm_size) * a.lstm_size + a.lstm_size);
  }
  total += a.controller_in() * a.ctrl_hidden + a.ctrl_hidden;
  total += a.ctrl_hidden * a.action_dim + a.action_dim;
  return total;
}

ArchSpec make_arch(Domain domain, Kind kind) {
  ArchSpec a;
  a.kind = kind;
  switch (domain) {
    case Domain::Flappy:
      a.sensory_dim = 6;
      a.action_dim = 2;
      break;
    case Domain::Lander:
      a.sensory_dim = 8;
      a.action_dim = 4;
      break;
    case Domain::Lane:
      a.sensory_dim = 5;
      a.action_dim = 2;
      break;
  }
  return a;
}

std::vector<LayoutBlock> genome_layout(const ArchSpec& a) {
  std::vector<LayoutBlock> blocks;
  int offset = 0;
  auto push = [&](const std::string& name, int rows, int cols) {
    blocks.push_back({name, offset, rows, cols});
    offset += rows * cols;
  };
  if (a.has_skill()) {
    push("skill.w1", a.skill_hidden, a.sensory_dim);
    push("skill.b1", a.skill_hidden, 1);
    push("skill.w2", a.skill_out, a.skill_hidden);
    push("skill.b2", a.skill_out, 1);
  }
  if (a.has_context()) {
    const int in = a.lstm_in() + a.lstm_size;
    for (const char* gate : {"input", "forget", "cell", "output"}) {
      push(std::string("lstm.") + gate + ".w", a.lstm_size, in);
      push(std::string("lstm.") + gate + ".b", a.lstm_size, 1);
    }
  }
  push("ctrl.wh", a.ctrl_hidden, a.controller_in());
  push("ctrl.bh", a.ctrl_hidden, 1);
  push("ctrl.wo", a.action_dim, a.ctrl_hidden);
  push("ctrl.bo", a.action_dim, 1);
  return blocks;
}

}  // namespace ctxskill
