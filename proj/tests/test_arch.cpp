#include <doctest.h>

#include "ctxskill/arch.hpp"

using namespace ctxskill;

TEST_CASE("parameter counts match the published flappy architecture sizes") {
  CHECK(param_count(make_arch(Domain::Flappy, Kind::S)) == 287);
  CHECK(param_count(make_arch(Domain::Flappy, Kind::C)) == 982);
  CHECK(param_count(make_arch(Domain::Flappy, Kind::CS)) == 1207);
}

TEST_CASE("parameter counts for the other domains follow the layout formula") {
  // Hand sums: skill (in*10+10)+(10*5+5), lstm 4*((in+1+10)*10+10),
  // controller (ctrl_in*20+20)+(20*act+act).
  CHECK(param_count(make_arch(Domain::Lander, Kind::CS)) == 1349);
  CHECK(param_count(make_arch(Domain::Lander, Kind::S)) == 349);
  CHECK(param_count(make_arch(Domain::Lander, Kind::C)) == 1104);
  CHECK(param_count(make_arch(Domain::Lane, Kind::CS)) == 1157);
}

TEST_CASE("controller input width depends on the present modules") {
  CHECK(make_arch(Domain::Flappy, Kind::S).controller_in() == 5);
  CHECK(make_arch(Domain::Flappy, Kind::C).controller_in() == 10);
  CHECK(make_arch(Domain::Flappy, Kind::CS).controller_in() == 15);
}

TEST_CASE("layout blocks cover the genome contiguously") {
  for (Kind kind : {Kind::S, Kind::C, Kind::CS}) {
    const ArchSpec arch = make_arch(Domain::Flappy, kind);
    const auto layout = genome_layout(arch);
    int pos = 0;
    for (const LayoutBlock& b : layout) {
      CHECK(b.offset == pos);
      pos += b.size();
    }
    CHECK(pos == param_count(arch));
  }
}

TEST_CASE("layout offsets for the flappy architectures, frozen by hand") {
  // S: w1 10x6 | b1 10 | w2 5x10 | b2 5 | wh 20x5 | bh 20 | wo 2x20 | bo 2
  const auto s = genome_layout(make_arch(Domain::Flappy, Kind::S));
  REQUIRE(s.size() == 8);
  CHECK(s[0].name == "skill.w1");
  CHECK(s[1].offset == 60);
  CHECK(s[2].offset == 70);
  CHECK(s[3].offset == 120);
  CHECK(s[4].name == "ctrl.wh");
  CHECK(s[4].offset == 125);
  CHECK(s[5].offset == 225);
  CHECK(s[6].offset == 245);
  CHECK(s[7].offset == 285);

  // C: four lstm gates of 10x17 + 10 each, then the controller.
  const auto c = genome_layout(make_arch(Domain::Flappy, Kind::C));
  REQUIRE(c.size() == 12);
  CHECK(c[0].name == "lstm.input.w");
  CHECK(c[0].offset == 0);
  CHECK(c[2].name == "lstm.forget.w");
  CHECK(c[2].offset == 180);
  CHECK(c[4].name == "lstm.cell.w");
  CHECK(c[4].offset == 360);
  CHECK(c[6].name == "lstm.output.w");
  CHECK(c[6].offset == 540);
  CHECK(c[8].name == "ctrl.wh");
  CHECK(c[8].offset == 720);
  CHECK(c[11].offset == 980);

  // CS: skill block first, lstm at 125, controller at 845.
  const auto cs = genome_layout(make_arch(Domain::Flappy, Kind::CS));
  REQUIRE(cs.size() == 16);
  CHECK(cs[4].name == "lstm.input.w");
  CHECK(cs[4].offset == 125);
  CHECK(cs[12].name == "ctrl.wh");
  CHECK(cs[12].offset == 845);
  CHECK(cs[15].offset == 1205);
}

TEST_CASE("kind and domain string round trips") {
  for (Kind k : {Kind::S, Kind::C, Kind::CS})
    CHECK(kind_from_string(to_string(k)) == k);
  for (Domain d : {Domain::Flappy, Domain::Lander, Domain::Lane})
    CHECK(domain_from_string(to_string(d)) == d);
  CHECK_THROWS(kind_from_string("X"));
  CHECK_THROWS(domain_from_string("pong"));
}
