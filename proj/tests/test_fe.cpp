#include <doctest.h>

#include <algorithm>

#include "calab/error.hpp"
#include "calab/fe.hpp"
#include "calab/fe_analysis.hpp"
#include "calab/rng.hpp"

using namespace calab;
using namespace calab::fe;

namespace {

CyclicConfiguration row_of(const std::string& x0, const std::string& x1, const std::string& x2) {
  return {alphabet(), from_layers(x0, x1, x2)};
}

CyclicConfiguration x1_row(const std::string& x1) { return {alphabet(), from_x1_text(x1)}; }

std::string zeros(std::size_t n) { return std::string(n, '0'); }

std::vector<CyclicConfiguration> random_rows(int count, long period, std::uint64_t seed) {
  std::vector<CyclicConfiguration> out;
  for (int c = 0; c < count; ++c) {
    Rng rng(seed, static_cast<std::uint64_t>(c));
    Word w(static_cast<std::size_t>(period));
    for (auto& v : w) v = static_cast<Letter>(rng.below(kLetters));
    out.emplace_back(alphabet(), std::move(w));
  }
  return out;
}

// X2 under f1 and f2 written out cell by cell.
Word x2_after_f1(const Word& w) {
  const long p = static_cast<long>(w.size());
  Word out = w;
  for (long i = 0; i < p; ++i) {
    auto at = [&](long k) { return x2_of(w[static_cast<std::size_t>(floor_mod(k, p))]); };
    out[static_cast<std::size_t>(i)] = pack(x0_of(w[static_cast<std::size_t>(i)]), x1_of(w[static_cast<std::size_t>(i)]),
                                            at(i - 3) & at(i - 2) & at(i - 1));
  }
  return out;
}

Word x2_after_f2(const Word& w) {
  const long p = static_cast<long>(w.size());
  Word out = w;
  for (long i = 0; i < p; ++i) {
    int v = x2_of(w[static_cast<std::size_t>(i)]);
    for (long j = 0; j <= 2; ++j) v |= x1_of(w[static_cast<std::size_t>(floor_mod(i - j, p))]) == E0;
    out[static_cast<std::size_t>(i)] = with_x1(pack(x0_of(w[static_cast<std::size_t>(i)]), 0, v), x1_of(w[static_cast<std::size_t>(i)]));
  }
  return out;
}

long count_x1(const CyclicConfiguration& x, int v) {
  return std::count_if(x.period().begin(), x.period().end(), [v](Letter c) { return x1_of(c) == v; });
}

}  // namespace

TEST_CASE("letter packing") {
  CHECK(alphabet()->size() == 28);
  CHECK(pack(1, E2, 1) == 1 + 2 * 5 + 14);
  for (int c = 0; c < kLetters; ++c) {
    const auto l = static_cast<Letter>(c);
    CHECK(pack(x0_of(l), x1_of(l), x2_of(l)) == l);
  }
  CHECK(next_emitter(E3) == E0);
  CHECK(kRadius == 178);
  CHECK(automaton().radius() == 178);
}

TEST_CASE("f1 worked example and short trains") {
  const auto f1 = stage_automaton("f1");
  const std::string pad = zeros(8);
  CyclicConfiguration x = row_of(zeros(27), zeros(27), pad + "01111110000" + pad);
  const std::vector<std::string> want{"00001111000", "00000001100", "00000000000"};
  for (const auto& w : want) {
    x = step(f1, x);
    CHECK(layer_text(x.period(), 2) == pad + w + pad);
  }
  CHECK(count_x1(step(f1, row_of(zeros(12), zeros(12), "000110000000")), 0) == 12);
  CHECK(layer_text(step(f1, row_of(zeros(12), zeros(12), "000110000000")).period(), 2) == zeros(12));
}

TEST_CASE("unfed train loses two cells and moves one per step") {
  const auto f1 = stage_automaton("f1");
  CyclicConfiguration x = row_of(zeros(40), zeros(40), zeros(5) + "111111" + zeros(29));
  std::vector<long> lengths;
  std::vector<Word> rows{x.period()};
  for (int t = 0; t < 4; ++t) {
    x = step(f1, x);
    rows.push_back(x.period());
  }
  auto trains = track_trains(rows, 0);
  REQUIRE(trains.size() == 1);
  for (const auto& s : trains[0].path) lengths.push_back(s.length());
  CHECK(lengths == std::vector<long>{6, 4, 2});
  CHECK(trains[0].path[1].right == trains[0].path[0].right + 1);
  CHECK(trains[0].path[2].left == trains[0].path[1].left + 3);
}

TEST_CASE("f1 and f2 match a cell-by-cell evaluation") {
  const auto f1 = stage_automaton("f1"), f2 = stage_automaton("f2");
  for (const auto& x : random_rows(200, 64, 1)) {
    CHECK(step(f1, x).period() == x2_after_f1(x.period()));
    CHECK(step(f2, x).period() == x2_after_f2(x.period()));
  }
}

TEST_CASE("f2 lights the emitter cell and the two to its right") {
  const auto f2 = stage_automaton("f2");
  std::string x1 = zeros(12);
  x1[4] = 'A';
  CHECK(layer_text(step(f2, x1_row(x1)).period(), 2) == "000011100000");
  CHECK(step(f2, x1_row("0RL0BCD00000")) == x1_row("0RL0BCD00000"));
}

TEST_CASE("sustained E0 under f2 after f1 grows a train of n + 2") {
  // Cell by cell: step 1 lights 3 cells, each later step adds one at the right.
  const auto g = compose(stage_automaton("f2"), stage_automaton("f1"));
  std::string x1 = zeros(64);
  x1[10] = 'A';
  CyclicConfiguration x = x1_row(x1);
  for (long n = 1; n <= 20; ++n) {
    x = step(g, x);
    const std::string x2 = layer_text(x.period(), 2);
    CHECK(std::count(x2.begin(), x2.end(), '1') == n + 2);
    CHECK(x2.find('1') == 10);
  }
}

TEST_CASE("each stage is the identity on the layers it does not own") {
  const auto rows = random_rows(1000, 400, 2);
  struct Contract {
    const char* stage;
    bool keeps[3];
  };
  for (const Contract& c : {Contract{"f1", {true, true, false}}, Contract{"f2", {true, true, false}},
                            Contract{"f3", {true, false, true}}, Contract{"fpx0", {false, false, true}},
                            Contract{"fpx1", {true, false, true}}}) {
    const auto f = stage_automaton(c.stage);
    long broken = 0;
    for (const auto& x : rows) {
      const Word y = step(f, x).period();
      for (int layer = 0; layer < 3; ++layer)
        if (c.keeps[layer] && layer_text(y, layer) != layer_text(x.period(), layer)) ++broken;
    }
    CAPTURE(c.stage);
    CHECK(broken == 0);
  }
}

TEST_CASE("fpx0 leaves Ebar letters alone and writes only E1 over emitters") {
  const auto f = stage_automaton("fpx0");
  for (const auto& x : random_rows(300, 200, 3)) {
    const Word y = step(f, x).period();
    for (std::size_t i = 0; i < y.size(); ++i) {
      const int a = x1_of(x.period()[i]), b = x1_of(y[i]);
      if (!is_emitter(a)) CHECK(a == b);
      else CHECK((b == a || b == E1));
    }
  }
}

TEST_CASE("f3 keeps emitters as emitters") {
  const auto f = stage_automaton("f3");
  for (const auto& x : random_rows(300, 200, 4)) {
    const Word y = step(f, x).period();
    for (std::size_t i = 0; i < y.size(); ++i)
      if (is_emitter(x1_of(x.period()[i]))) CHECK(is_emitter(x1_of(y[i])));
  }
}

TEST_CASE("kernels agree with the literal rules") {
  std::vector<Word> rows;
  for (const auto& x : random_rows(40, 400, 5)) rows.push_back(x.period());
  // Structured rows: sparse emitters with single carriers.
  for (int k = 0; k < 20; ++k) {
    std::string x1 = zeros(400);
    x1[static_cast<std::size_t>(10 + k)] = "ABCD"[k % 4];
    x1[static_cast<std::size_t>(200 + 3 * k)] = "ABCD"[(k + 1) % 4];
    x1[static_cast<std::size_t>(30 + 7 * k)] = k % 2 ? 'R' : 'L';
    rows.push_back(from_x1_text(x1));
  }
  for (const auto& r : {f1_rule(), f2_rule(), f3_rule(), fp_x0_rule(), fp_x1_rule()}) {
    CAPTURE(r->name());
    CHECK(check_kernel(*r, rows).failures == 0);
  }
}

TEST_CASE("lone carriers move ten cells") {
  const auto f3 = stage_automaton("f3");
  std::string x1 = zeros(80);
  x1[30] = 'R';
  std::string want = zeros(80);
  want[40] = 'R';
  CHECK(layer_text(step(f3, x1_row(x1)).period(), 1) == want);
  x1[30] = 'L';
  want[40] = '0';
  want[20] = 'L';
  CHECK(layer_text(step(f3, x1_row(x1)).period(), 1) == want);
}

TEST_CASE("fpx1 removes emitters closer than 153 cells") {
  const auto f = stage_automaton("fpx1");
  auto emitters_after = [&](long d) {
    std::string x1 = zeros(600);
    x1[100] = 'A';
    x1[static_cast<std::size_t>(100 + d)] = 'B';
    return count_x1(step(f, x1_row(x1)), E0) + count_x1(step(f, x1_row(x1)), E1);
  };
  CHECK(emitters_after(100) == 0);
  CHECK(emitters_after(152) == 0);
  CHECK(emitters_after(153) == 2);
  CHECK(emitters_after(200) == 2);
}

TEST_CASE("all-zero row is a fixed point") {
  const auto z = row_of(zeros(500), zeros(500), zeros(500));
  CHECK(step(automaton(), z) == z);
}

TEST_CASE("fpx0 front schedule and void counter freeze") {
  // With m the distance to the emitter on the left (at most 10), cell i lights
  // once some cell within ceil((m - 1) / 2) to its left is lit. Worked by hand
  // from an emitter at 0: front at 1, 2, 4, 8, 13, then 5 more per step.
  auto front = [](long t) { return t <= 4 ? std::vector<long>{0, 1, 2, 4, 8}[static_cast<std::size_t>(t)] : 8 + 5 * (t - 4); };
  const auto f = stage_automaton("fpx0");
  CyclicConfiguration x = x1_row("C" + zeros(200) + "A" + zeros(200));
  for (long t = 1; t <= 12; ++t) {
    x = step(f, x);
    const std::string x0 = layer_text(x.period(), 0);
    CAPTURE(t);
    CHECK(x0.substr(1, static_cast<std::size_t>(front(t))) == std::string(static_cast<std::size_t>(front(t)), '1'));
    CHECK(x0[static_cast<std::size_t>(front(t)) + 1] == '0');
  }
  // The trailing E0 of C 0^k A turns E1 one step after the front passes it.
  for (long k : {9L, 19L, 29L, 49L, 160L}) {
    CyclicConfiguration y = x1_row("C" + zeros(static_cast<std::size_t>(k)) + "A" + zeros(200));
    long t_front = 1;
    while (front(t_front) < k + 1) ++t_front;
    y = step(f, y, t_front);
    CAPTURE(k);
    CHECK(x1_of(y.cell(k + 1)) == E0);
    CHECK(x1_of(step(f, y).cell(k + 1)) == E1);
  }
}

TEST_CASE("parse_counters classifies gaps") {
  CHECK(parse_counters(from_x1_text(zeros(50) + "RL0"), 0).empty());
  auto d = parse_counters(from_x1_text("B" + zeros(160) + "A"), 0);
  REQUIRE(d.size() == 1);
  CHECK(d[0].kind == CounterDescriptor::Kind::void_counter);
  CHECK(d[0].size == 160);
  CHECK(d[0].right_state == E0);
  CHECK(d[0].right_emitter == 161);
  std::string one = "D" + zeros(200) + "C";
  one[50] = 'L';
  d = parse_counters(from_x1_text(one), -7);
  REQUIRE(d.size() == 1);
  CHECK(d[0].kind == CounterDescriptor::Kind::counter);
  CHECK(d[0].carrier == L);
  CHECK(d[0].carrier_pos == 43);
  one[70] = 'R';
  CHECK(parse_counters(from_x1_text(one), 0)[0].kind == CounterDescriptor::Kind::precounter);
}

TEST_CASE("two carriers between emitters leave at most one after ceil(l/10) steps") {
  const auto f = automaton();
  for (long l : {160L, 240L, 400L})
    for (long a : {5L, 40L, 77L})
      for (long b : {90L, 130L}) {
        std::string x1 = "B" + zeros(static_cast<std::size_t>(l)) + "B" + zeros(300);
        x1[static_cast<std::size_t>(l) + 3] = 'R';
        x1[static_cast<std::size_t>(a)] = 'R';
        x1[static_cast<std::size_t>(b)] = a % 2 ? 'L' : 'R';
        const auto x = step(f, x1_row(x1), (l + 9) / 10);
        for (const auto& c : parse_counters(x))
          if (c.left_emitter == 0) CHECK(c.carriers <= 1);
      }
}

TEST_CASE("lone counter stays within the reach bound") {
  CHECK(reach_bound(152) == doctest::Approx(50.1));
  CHECK(reach_bound(2100) == doctest::Approx(634.5));
  const CounterRun run = run_lone_counter(160, 5000);
  CHECK(run.max_excursion <= 53);
  CHECK(run.regular_trains > 0);
  CHECK(run.irregular_trains == 0);
}

TEST_CASE("window steps keep exactly the static cone or more") {
  const auto f = automaton();
  const auto x = random_rows(1, 1000, 6)[0];
  const auto w = WindowConfiguration::from_cyclic(x, -178, 178);
  const auto s = step_window(f, w);
  CHECK(s.valid() == Interval{0, 0});
  CHECK(s.cell(0) == step(f, x).cell(0));
  CHECK_THROWS_AS(step_window(f, WindowConfiguration::from_cyclic(x, -177, 178)), WindowError);
}

TEST_CASE("injected train reaches the centre at t0") {
  const auto f = automaton();
  const auto zero = WindowConfiguration::from_cyclic(row_of(zeros(8), zeros(8), zeros(8)), -3000, 3000);
  const long t0 = 40;
  WindowConfiguration y = inject_train(zero, t0);
  for (long i = -t0 + 1; i < t0; ++i) CHECK(y.cell(i) == 0);
  CHECK(x2_of(y.cell(-t0)) == 1);
  for (long t = 0; t < t0; ++t) y = advance_window(f, y);
  CHECK(x2_of(y.cell(0)) == 1);
}
