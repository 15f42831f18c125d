#include "calab/fe_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "calab/error.hpp"

namespace calab::fe {

MeasureSpec mu_i() {
  auto zero = MeasureSpec::atomic(CyclicConfiguration(Alphabet::simple("01"), Word{0}));
  auto x1 = MeasureSpec::uniform(Alphabet::simple("0RLABCD"));
  MeasureSpec m = MeasureSpec::product(alphabet(), {zero, x1, zero});
  m.label = "mu_I";
  return m;
}

namespace {

CounterDescriptor describe_gap(std::span<const Letter> row, long a, long b, long origin) {
  CounterDescriptor d;
  d.left_emitter = origin + a;
  d.right_emitter = origin + b;
  d.size = b - a - 1;
  d.left_state = x1_of(row[static_cast<std::size_t>(a)]);
  d.right_state = x1_of(row[static_cast<std::size_t>(b)]);
  bool other = false;
  for (long k = a + 1; k < b; ++k) {
    int v = x1_of(row[static_cast<std::size_t>(k)]);
    if (is_carrier(v)) {
      ++d.carriers;
      d.carrier = v;
      d.carrier_pos = origin + k;
    } else if (v != Z) {
      other = true;
    }
  }
  if (other || d.carriers > 1) d.kind = CounterDescriptor::Kind::precounter;
  else if (d.carriers == 1) d.kind = CounterDescriptor::Kind::counter;
  else d.kind = CounterDescriptor::Kind::void_counter;
  if (d.carriers != 1) {
    d.carrier = Z;
    d.carrier_pos = 0;
  }
  return d;
}

}  // namespace

std::vector<CounterDescriptor> parse_counters(std::span<const Letter> row, long origin) {
  std::vector<CounterDescriptor> out;
  long prev = -1;
  for (long k = 0; k < static_cast<long>(row.size()); ++k) {
    if (!is_emitter(x1_of(row[static_cast<std::size_t>(k)]))) continue;
    if (prev >= 0) out.push_back(describe_gap(row, prev, k, origin));
    prev = k;
  }
  return out;
}

std::vector<CounterDescriptor> parse_counters(const CyclicConfiguration& x) {
  const long p = x.length();
  long first = -1;
  for (long i = 0; i < p && first < 0; ++i)
    if (is_emitter(x1_of(x.cell(i)))) first = i;
  if (first < 0) return {};
  // Read one full period starting and ending at the same emitter.
  Word row = x.read(first, first + p);
  return parse_counters(row, first);
}

long Train::max_length() const {
  long m = 0;
  for (const auto& s : path) m = std::max(m, s.length());
  return m;
}

std::size_t Train::peak() const {
  std::size_t best = 0;
  for (std::size_t k = 0; k < path.size(); ++k)
    if (path[k].length() > path[best].length()) best = k;
  return best;
}

std::vector<Train> track_trains(const std::vector<Word>& rows, long origin) {
  std::vector<Train> trains;
  std::unordered_map<long, std::size_t> by_right, next_by_right;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    next_by_right.clear();
    const Word& row = rows[t];
    const long n = static_cast<long>(row.size());
    for (long k = 0; k < n;) {
      if (!x2_of(row[static_cast<std::size_t>(k)])) {
        ++k;
        continue;
      }
      long j = k;
      while (j + 1 < n && x2_of(row[static_cast<std::size_t>(j + 1)])) ++j;
      TrainState st{static_cast<long>(t), origin + k, origin + j};
      auto it = by_right.find(st.right - 1);
      std::size_t id;
      if (it != by_right.end()) {
        id = it->second;
      } else {
        id = trains.size();
        trains.emplace_back();
      }
      trains[id].path.push_back(st);
      next_by_right[st.right] = id;
      k = j + 1;
    }
    std::swap(by_right, next_by_right);
  }
  return trains;
}

ChainLayout counter_chain(const std::vector<ChainCounter>& counters, int first_state, long tail) {
  if (!is_emitter(first_state)) throw ConfigError("first state must be an emitter");
  if (tail < kMinGap) throw ConfigError("tail must be at least 152 cells");
  long period = 1 + tail;
  for (const auto& c : counters) {
    if (c.size < 1) throw ConfigError("counter size must be positive");
    period += c.size + 1;
  }
  std::string x1(static_cast<std::size_t>(period), '0');
  const std::string names = "0RLABCD";
  std::vector<long> emitters{0};
  x1[0] = names[static_cast<std::size_t>(first_state)];
  long pos = 0;
  for (const auto& c : counters) {
    if (!c.void_counter) {
      if (c.carrier_offset < 1 || c.carrier_offset > c.size) throw ConfigError("carrier offset outside counter");
      if (!is_carrier(c.carrier)) throw ConfigError("carrier must be R or L");
      x1[static_cast<std::size_t>(pos + c.carrier_offset)] = names[static_cast<std::size_t>(c.carrier)];
    }
    pos += c.size + 1;
    if (!is_emitter(c.right_state)) throw ConfigError("right state must be an emitter");
    x1[static_cast<std::size_t>(pos)] = names[static_cast<std::size_t>(c.right_state)];
    emitters.push_back(pos);
  }
  return {CyclicConfiguration(alphabet(), from_x1_text(x1)), std::move(emitters)};
}

CounterRun run_lone_counter(long l, long steps) {
  if (l < kMinGap) throw ConfigError("counter size below 152");
  const long tail = std::max<long>(400, static_cast<long>(reach_bound(l)) + 60);
  ChainLayout lay = counter_chain({ChainCounter{l, false, E1, 1, R}}, E1, tail);
  const long e = lay.emitters.back();
  const auto f = automaton();
  CyclicConfiguration x = lay.config;
  CounterRun run;
  run.size = l;
  run.steps = steps;
  std::vector<Word> rows;
  const long lo = e - 2, hi = e + tail - 2;
  int prev_state = x1_of(x.cell(e));
  long last_change = -1;
  for (long t = 1; t <= steps; ++t) {
    x = step(f, x);
    rows.push_back(x.read(lo, hi));
    int s = x1_of(x.cell(e));
    if (s != prev_state) {
      if (last_change >= 0) run.dwell.push_back(t - last_change);
      last_change = t;
      prev_state = s;
    }
    for (long k = hi; k > e; --k)
      if (x2_of(x.cell(k))) {
        run.max_excursion = std::max(run.max_excursion, k - e);
        break;
      }
  }
  for (const Train& tr : track_trains(rows, lo)) {
    if (tr.path.front().left != e) continue;          // not born at the emitter
    if (tr.path.back().t + 1 >= steps) continue;      // still alive at the end
    if (tr.path.front().t == 0) continue;             // already present at the start
    run.train_lengths.push_back(tr.max_length());
    bool regular = true;
    for (std::size_t k = tr.peak(); k + 1 < tr.path.size(); ++k) {
      const auto &a = tr.path[k], &b = tr.path[k + 1];
      regular = regular && b.t == a.t + 1 && b.left == a.left + 3 && b.right == a.right + 1;
    }
    regular = regular && tr.path.back().length() <= 2;
    (regular ? run.regular_trains : run.irregular_trains) += 1;
  }
  return run;
}

ChainLayout analyzer_chain(const std::vector<long>& sizes, int void_index) {
  std::vector<ChainCounter> chain{ChainCounter{3000, false, E1, 1, R}};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ChainCounter c;
    c.size = sizes[i];
    c.void_counter = static_cast<int>(i) == void_index;
    c.carrier_offset = 1 + static_cast<long>((i * 97) % static_cast<std::size_t>(sizes[i]));
    chain.push_back(c);
  }
  return counter_chain(chain, E1, 400);
}

GapReport gap_analyzer(const std::vector<long>& sizes, int void_index, long periods) {
  if (sizes.empty()) throw ConfigError("empty counter chain");
  for (long l : sizes)
    if (l < kMinGap) throw ConfigError("counter sizes must be at least 152");
  if (periods < 1) throw ConfigError("need at least one period");
  GapReport rep;
  rep.sizes = sizes;
  for (std::size_t i = 1; i < sizes.size(); ++i)
    rep.reach_condition.push_back(static_cast<double>(sizes[i]) <= reach_bound(sizes[i - 1]));

  ChainLayout lay = analyzer_chain(sizes, void_index);
  const long centre = lay.emitters.back() + 10;
  const auto f = automaton();
  CyclicConfiguration x = lay.config;

  // Emission period of the first chain counter; dwell of its right emitter.
  const long P = (sizes[0] + 4) / 5;
  rep.largest_period = P;
  rep.steps = 4 * P * (periods + 1);
  std::vector<char> column{static_cast<char>(x2_of(x.cell(centre)))};
  for (long t = 1; t <= rep.steps; ++t) {
    x = step(f, x);
    column.push_back(static_cast<char>(x2_of(x.cell(centre))));
  }
  for (const auto& c : parse_counters(x))
    if (c.kind == CounterDescriptor::Kind::counter) ++rep.live_counters;
  // Every window of 3P consecutive steps, which covers (s + P, s + 4P] for
  // every possible emission start s.
  std::vector<long> zeros(column.size() + 1, 0);
  for (std::size_t k = 0; k < column.size(); ++k) zeros[k + 1] = zeros[k] + (column[k] == 0);
  for (std::size_t a = 0; a + static_cast<std::size_t>(3 * P) <= column.size(); ++a) {
    ++rep.windows_checked;
    rep.windows_with_hole += zeros[a + static_cast<std::size_t>(3 * P)] > zeros[a];
  }
  long run = 0;
  for (char c : column) {
    run = c ? run + 1 : 0;
    rep.longest_run_of_ones = std::max(rep.longest_run_of_ones, run);
  }
  return rep;
}

WindowConfiguration inject_train(const WindowConfiguration& x, long t0) {
  if (t0 < 1) throw ConfigError("train arrival time must be positive");
  WindowConfiguration y = x;
  for (long i = -3 * t0; i <= -t0; ++i) {
    Letter c = y.cell(i);
    y.set(i, pack(x0_of(c), x1_of(c), 1));
  }
  return y;
}

}  // namespace calab::fe
