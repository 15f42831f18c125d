#include "calab/orbits.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "calab/error.hpp"

namespace calab {

namespace {

std::uint64_t hash_word(const Word& w) {
  std::uint64_t h = mix64(w.size());
  std::size_t k = 0;
  for (; k + 8 <= w.size(); k += 8) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < 8; ++j) v |= static_cast<std::uint64_t>(w[k + j]) << (8 * j);
    h = hash_combine(h, v);
  }
  for (; k < w.size(); ++k) h = hash_combine(h, w[k]);
  return h;
}

}  // namespace

nlohmann::json OrbitSummary::to_json() const {
  return {{"closed", closed}, {"steps", steps}, {"preperiod", preperiod}, {"period", period}};
}

OrbitSummary detect_orbit(const CompositeAutomaton& f, const CyclicConfiguration& x, long max_steps) {
  if (max_steps < 0) throw ConfigError("negative step budget");
  OrbitSummary out;
  std::vector<Word> rows;
  std::unordered_map<std::uint64_t, std::vector<long>> seen;
  CyclicConfiguration y = x;
  for (long t = 0;; ++t) {
    const std::uint64_t h = hash_word(y.period());
    auto it = seen.find(h);
    if (it != seen.end()) {
      for (long j : it->second) {
        if (rows[static_cast<std::size_t>(j)] != y.period()) continue;
        out.closed = true;
        out.steps = t;
        out.preperiod = j;
        out.period = t - j;
        for (long k = j; k < t; ++k)
          out.cycle.emplace_back(x.alphabet(), std::move(rows[static_cast<std::size_t>(k)]), x.phase());
        return out;
      }
    }
    seen[h].push_back(t);
    rows.push_back(y.period());
    if (t == max_steps) break;
    y = step(f, y);
  }
  out.steps = max_steps;
  return out;
}

SpliceResult splice_periodic_point(const CompositeAutomaton& f, const WindowConfiguration& x,
                                   long n, long m, long T, long max_steps) {
  if (m < 1 || n < 0 || T < 1) throw ConfigError("splice needs m >= 1, n >= 0, T >= 1");
  SpliceResult out;
  ColumnTrace tx;
  try {
    tx = column_trace(f, x, n, T);
    ColumnTrace ts = column_trace(f, shift(x, m), n, T);
    if (!(tx == ts)) {
      out.diagnostics = "traces of x and its shift by " + std::to_string(m) + " differ at row " +
                        std::to_string(first_divergence(f, shift(x, m), tx));
      return out;
    }
  } catch (const WindowError& e) {
    out.diagnostics = std::string("witness window too small: ") + e.what();
    return out;
  }
  out.candidate = CyclicConfiguration(x.alphabet(), x.read(-n, -n + m - 1), n);
  const long lo = -n - static_cast<long>(f.left_reach()) * (T - 1);
  const long hi = n + static_cast<long>(f.right_reach()) * (T - 1);
  long d = first_divergence(f, WindowConfiguration::from_cyclic(*out.candidate, lo, hi), tx);
  if (d < T) {
    out.diagnostics = "candidate trace leaves the witness at row " + std::to_string(d);
    return out;
  }
  out.orbit = detect_orbit(f, *out.candidate, max_steps);
  if (!out.orbit.closed) {
    out.diagnostics = "candidate orbit did not close within " + std::to_string(max_steps) + " steps";
    return out;
  }
  out.accepted = true;
  return out;
}

nlohmann::json DensityReport::to_json() const {
  nlohmann::json j{{"factors", factors},
                   {"covered", covered},
                   {"coverage", coverage()},
                   {"timeouts", timeouts},
                   {"code_version", kCodeVersion}};
  j["shortfalls"] = nlohmann::json::array();
  for (const auto& s : shortfalls)
    j["shortfalls"].push_back({{"word", s.word}, {"count", s.count}, {"reason", s.reason}});
  return j;
}

namespace {

Word project(const Alphabet& a, std::span<const Letter> w, int layer) {
  if (layer < 0) return Word(w.begin(), w.end());
  Word out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    out[k] = static_cast<Letter>(a.component(w[k], static_cast<std::size_t>(layer)));
  return out;
}

std::string word_text(const Alphabet& a, const Word& u, int layer) {
  std::string s;
  if (layer >= 0) {
    for (Letter c : u) s += a.factor_symbols(static_cast<std::size_t>(layer))[c];
    return s;
  }
  for (std::size_t k = 0; k < a.factor_count(); ++k) {
    if (k) s += '/';
    s += a.render(u, k);
  }
  return s;
}

bool cyclic_contains(const Alphabet& a, const Word& period, const Word& u, int layer) {
  Word p = project(a, period, layer);
  if (u.size() > p.size()) return false;
  p.insert(p.end(), p.begin(), p.begin() + static_cast<long>(u.size()) - 1);
  return std::search(p.begin(), p.end(), u.begin(), u.end()) != p.end();
}

struct Occurrence {
  long count = 0;
  long sample = 0;
  long position = 0;
};

}  // namespace

DensityReport periodic_density_probe(const CompositeAutomaton& f, const WindowSampler& sampler,
                                     long L, const DensityOptions& opt) {
  if (L < 1 || opt.periods.empty() || opt.samples < 1) throw ConfigError("invalid density probe parameters");
  const Alphabet& A = *f.alphabet();
  if (opt.layer >= static_cast<int>(A.factor_count())) throw ConfigError("no such alphabet factor");
  const long pmax = *std::max_element(opt.periods.begin(), opt.periods.end());
  for (long P : opt.periods)
    if (P < L + 2) throw ConfigError("period too short for the word length");

  // Factors starting in [-pmax/2, pmax/2 - L], so a centred segment of any
  // period fits in the sampled window [-pmax, pmax].
  std::vector<WindowConfiguration> xs;
  for (long s = 0; s < opt.samples; ++s) xs.push_back(sampler(s, {-pmax, pmax}));
  std::map<Word, Occurrence> counts;
  long positions = 0;
  for (long s = 0; s < opt.samples; ++s) {
    Word row = project(A, xs[static_cast<std::size_t>(s)].read(-pmax, pmax), opt.layer);
    for (long p = -pmax / 2; p <= pmax / 2 - L; ++p, ++positions) {
      auto first = row.begin() + (p + pmax);
      Occurrence& o = counts[Word(first, first + L)];
      if (o.count++ == 0) {
        o.sample = s;
        o.position = p;
      }
    }
  }
  std::vector<std::pair<Word, Occurrence>> kept;
  for (auto& [u, o] : counts)
    if (static_cast<double>(o.count) >= opt.frequency_floor * static_cast<double>(positions))
      kept.emplace_back(u, o);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
  if (static_cast<long>(kept.size()) > opt.max_factors) kept.resize(static_cast<std::size_t>(opt.max_factors));

  // 1 covered, 0 no cycle shows u, -1 every candidate timed out.
  std::vector<int> status(kept.size(), 0);
  parallel_for(static_cast<long>(kept.size()), opt.workers, [&](long i) {
    const auto& [u, occ] = kept[static_cast<std::size_t>(i)];
    const WindowConfiguration& x = xs[static_cast<std::size_t>(occ.sample)];
    bool any_closed = false;
    for (long P : opt.periods) {
      const long start = occ.position + L / 2 - P / 2;
      const Word segment = x.read(start, start + P - 1);
      const long a = occ.position - start;
      const long g = opt.guard >= 0 ? std::min(opt.guard, P - L) : std::min<long>(2L * f.radius(), P - L);
      std::vector<long> guard;
      for (long k = 0; k < (g + 1) / 2; ++k) guard.push_back(k);
      for (long k = P - g / 2; k < P; ++k) guard.push_back(k);
      std::erase_if(guard, [&](long k) { return k >= a && k < a + L; });
      Rng rng(opt.seed, hash_combine(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(P)));
      for (long c = 0; c < 2 + opt.seam_attempts; ++c) {
        Word w = segment;
        if (c == 1)
          for (long k : guard) w[static_cast<std::size_t>(k)] = 0;
        if (c >= 2)
          for (long k : guard) w[static_cast<std::size_t>(k)] = static_cast<Letter>(rng.below(A.size()));
        OrbitSummary orbit = detect_orbit(f, CyclicConfiguration(f.alphabet(), std::move(w)), opt.max_steps);
        if (!orbit.closed) continue;
        any_closed = true;
        for (const auto& y : orbit.cycle)
          if (cyclic_contains(A, y.period(), u, opt.layer)) {
            status[static_cast<std::size_t>(i)] = 1;
            return;
          }
      }
    }
    status[static_cast<std::size_t>(i)] = any_closed ? 0 : -1;
  });

  DensityReport rep;
  rep.factors = static_cast<long>(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (status[i] == 1) {
      ++rep.covered;
      continue;
    }
    if (status[i] < 0) ++rep.timeouts;
    rep.shortfalls.push_back({word_text(A, kept[i].first, opt.layer), kept[i].second.count,
                              status[i] < 0 ? "every candidate orbit timed out" : "no cycle shows the word"});
  }
  return rep;
}

}  // namespace calab
