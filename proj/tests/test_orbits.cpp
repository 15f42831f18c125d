#include <doctest.h>

#include "calab/error.hpp"
#include "calab/fe.hpp"
#include "calab/fe_analysis.hpp"
#include "calab/orbits.hpp"
#include "calab/registry.hpp"

using namespace calab;

namespace {

CyclicConfiguration digits(const std::string& w, long phase = 0) {
  auto a = digit_alphabet(3);
  return {a, a->parse(w), phase};
}

}  // namespace

TEST_CASE("identity orbits close at once") {
  OrbitSummary o = detect_orbit(make_automaton("identity:3"), digits("0120"), 10);
  CHECK(o.closed);
  CHECK(o.preperiod == 0);
  CHECK(o.period == 1);
  REQUIRE(o.cycle.size() == 1);
  CHECK(o.cycle[0] == digits("0120"));
}

TEST_CASE("shift orbit period is the minimal period") {
  const auto sh = make_automaton("shift:3");
  for (const std::string w : {"0", "01", "012", "0101", "011012", "2120012"}) {
    const auto x = digits(w);
    OrbitSummary o = detect_orbit(sh, x, 100);
    CAPTURE(w);
    CHECK(o.closed);
    CHECK(o.preperiod == 0);
    CHECK(o.period == x.minimal_period());
    // Translating the start point does not change the cycle length.
    CHECK(detect_orbit(sh, shift(x, 2), 100).period == o.period);
  }
}

TEST_CASE("eventually periodic orbit: preperiod and period") {
  // Max of the two neighbours on {0,1}: a single 1 spreads until the row is full.
  const auto bits = digit_alphabet(2);
  const CompositeAutomaton spread = BlockMapAutomaton::from_function(bits, 1, "spread", [](const Letter* n) {
    return static_cast<Letter>(n[0] | n[1] | n[2]);
  });
  OrbitSummary o = detect_orbit(spread, CyclicConfiguration(bits, bits->parse("0000000100")), 50);
  CHECK(o.closed);
  CHECK(o.preperiod == 5);
  CHECK(o.period == 1);
  OrbitSummary cut = detect_orbit(spread, CyclicConfiguration(bits, bits->parse("0000000100")), 3);
  CHECK_FALSE(cut.closed);
  CHECK(cut.steps == 3);
}

TEST_CASE("zero row of F_e is a fixed point") {
  const auto f = fe::automaton();
  OrbitSummary o = detect_orbit(f, CyclicConfiguration(f.alphabet(), Word(400, 0)), 5);
  CHECK(o.closed);
  CHECK(o.period == 1);
  CHECK(o.preperiod == 0);
}

TEST_CASE("lone F_e counter is eventually periodic") {
  // Emitter state cycles through 4 values and every train dies before the seam.
  const auto lay = fe::counter_chain({fe::ChainCounter{160, false, fe::E1, 1, fe::R}}, fe::E1, 400);
  OrbitSummary o = detect_orbit(fe::automaton(), lay.config, 2000);
  CHECK(o.closed);
  CHECK(o.period > 0);
}

TEST_CASE("splicing a periodic point from a matching shift") {
  const auto sh = make_automaton("shift:3");
  const auto x = WindowConfiguration::from_cyclic(digits("01"), -60, 60);
  SpliceResult r = splice_periodic_point(sh, x, 3, 2, 8, 100);
  CHECK(r.accepted);
  REQUIRE(r.candidate.has_value());
  CHECK(*r.candidate == digits("01"));
  CHECK(r.orbit.period == 2);

  const auto y = WindowConfiguration::from_cyclic(digits("0112"), -60, 60);
  SpliceResult bad = splice_periodic_point(sh, y, 3, 2, 8, 100);
  CHECK_FALSE(bad.accepted);
  CHECK(bad.diagnostics.find("differ") != std::string::npos);
  CHECK_THROWS_AS(splice_periodic_point(sh, y, 3, 0, 8, 100), ConfigError);
}

TEST_CASE("periodic points cover the factors of identity and shift") {
  DensityOptions o;
  o.samples = 8;
  o.periods = {64, 128};
  for (const std::string id : {"identity:2", "shift:2"}) {
    DensityReport r = periodic_density_probe(make_automaton(id), measure_sampler(make_measure("uniform:2"), 1), 6, o);
    CAPTURE(id);
    CHECK(r.factors == 64);
    CHECK(r.coverage() == 1.0);
    CHECK(r.shortfalls.empty());
  }
}

TEST_CASE("density probe enumerates shortfalls") {
  // Every cycle of this automaton is all 1s, so a factor containing 0 is missed.
  const auto bits = digit_alphabet(2);
  const CompositeAutomaton spread = BlockMapAutomaton::from_function(bits, 1, "spread", [](const Letter* n) {
    return static_cast<Letter>(n[0] | n[1] | n[2]);
  });
  DensityOptions o;
  o.samples = 4;
  o.periods = {32};
  DensityReport r = periodic_density_probe(spread, measure_sampler(make_measure("bernoulli:0.1,0.9"), 2), 2, o);
  CHECK(r.coverage() < 1.0);
  CHECK(static_cast<long>(r.shortfalls.size()) == r.factors - r.covered);
  for (const auto& s : r.shortfalls) CHECK(s.word.find('0') != std::string::npos);
  CHECK(r.to_json()["shortfalls"].size() == r.shortfalls.size());
}
