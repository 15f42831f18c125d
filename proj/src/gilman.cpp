#include "calab/gilman.hpp"

#include <algorithm>
#include <cmath>

#include "calab/error.hpp"
#include "calab/fe_analysis.hpp"

namespace calab {

ColumnTrace column_trace(const CompositeAutomaton& f, const WindowConfiguration& x, long n, long T) {
  if (n < 0 || T < 1) throw ConfigError("trace needs n >= 0 and T >= 1");
  ColumnTrace tr{n, T, {}};
  tr.rows.reserve(static_cast<std::size_t>(T));
  WindowConfiguration y = x;
  for (long i = 0; i < T; ++i) {
    tr.rows.push_back(y.read(-n, n));
    if (i + 1 < T) y = advance_window(f, y);
  }
  return tr;
}

long first_divergence(const CompositeAutomaton& f, WindowConfiguration y, const ColumnTrace& anchor) {
  const long T = static_cast<long>(anchor.rows.size());
  for (long i = 0; i < T; ++i) {
    if (y.read(-anchor.n, anchor.n) != anchor.rows[static_cast<std::size_t>(i)]) return i;
    if (i + 1 < T) y = advance_window(f, y);
  }
  return T;
}

BnEstimate estimate_bn_measure(const CompositeAutomaton& f, const MeasureSpec& mu,
                               const WindowConfiguration& anchor, long n,
                               const std::vector<long>& horizons, const SamplingOptions& opt,
                               BnOptions bn) {
  if (opt.samples <= 0) throw ConfigError("sample count must be positive");
  if (horizons.empty() || !std::is_sorted(horizons.begin(), horizons.end()) || horizons.front() < 1)
    throw ConfigError("horizons must be positive and increasing");
  const long tmax = horizons.back();
  const ColumnTrace trace = column_trace(f, anchor, n, tmax);
  const Cylinder c = cylinder_of(anchor, n);

  BnEstimate out;
  out.cylinder_probability = bn.conditioned ? cylinder_probability(mu, c) : 1.0;
  if (out.cylinder_probability <= 0.0) throw ConfigError("anchor cylinder has measure 0");
  out.divergence.assign(static_cast<std::size_t>(opt.samples), tmax);
  parallel_for(opt.samples, opt.workers, [&](long s) {
    long& d = out.divergence[static_cast<std::size_t>(s)];
    run_sample(f, mu, CellStream(opt.seed, static_cast<std::uint64_t>(s)), {-n, n}, tmax - 1,
               [&](long t, const WindowConfiguration& y) {
                 if (y.read(-n, n) != trace.rows[static_cast<std::size_t>(t)]) {
                   d = t;
                   return false;
                 }
                 return true;
               },
               bn.conditioned ? &c : nullptr, opt.window_budget);
  });

  const double pc = out.cylinder_probability;
  for (long T : horizons) {
    long hits = std::count_if(out.divergence.begin(), out.divergence.end(),
                              [T](long d) { return d >= T; });
    double q = static_cast<double>(hits) / static_cast<double>(opt.samples);
    double se = bernoulli_stderr(q, opt.samples);
    EstimateReport r;
    r.method = bn.conditioned ? "bn-measure-conditioned" : "bn-measure";
    r.automaton = f.name();
    r.measure = mu.label;
    r.value = pc * q;
    r.std_error = pc * se;
    r.samples = opt.samples;
    r.horizon = T;
    r.window = light_cone(f, {-n, n}, T - 1);
    r.seed = opt.seed;
    r.extra["n"] = n;
    r.extra["hits"] = hits;
    r.extra["conditional"] = q;
    r.extra["conditional_stderr"] = se;
    r.extra["log10_cylinder"] = std::log10(pc);
    out.reports.push_back(std::move(r));
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::mu_almost_equicontinuous: return "muAlmostEquicontinuous";
    case Verdict::almost_expansive_indicated: return "almostExpansiveIndicated";
    case Verdict::inconclusive: break;
  }
  return "inconclusive";
}

bool positive_plateau(const std::vector<double>& est, const std::vector<double>& se) {
  const std::size_t k = est.size();
  if (k < 2) return false;
  return est[k - 1] - 3.0 * se[k - 1] > 0.0 &&
         std::abs(est[k - 1] - est[k - 2]) <= 2.0 * pooled(se[k - 1], se[k - 2]);
}

bool decaying(const std::vector<double>& est, const std::vector<double>& se) {
  if (est.size() < 3) return false;
  for (std::size_t k = 0; k + 1 < est.size(); ++k)
    if (est[k] - est[k + 1] <= 2.0 * pooled(se[k], se[k + 1])) return false;
  return true;
}

nlohmann::json Classification::to_json() const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["rule"] = "plateau: last two within 2 pooled stderr, last > 3 stderr; "
              "decay: >= 3 horizons, each drop > 2 pooled stderr";
  j["evidence"] = nlohmann::json::array();
  for (const auto& e : evidence)
    j["evidence"].push_back({{"anchor", e.anchor},
                             {"n", e.n},
                             {"horizons", e.horizons},
                             {"estimates", e.estimates},
                             {"stderr", e.stderrs},
                             {"plateau", e.plateau},
                             {"decay", e.decay}});
  j["code_version"] = kCodeVersion;
  return j;
}

Classification classify(const CompositeAutomaton& f, const MeasureSpec& mu,
                        const std::vector<WindowConfiguration>& anchors, long n,
                        const std::vector<long>& horizons, const SamplingOptions& opt,
                        BnOptions bn) {
  if (anchors.empty()) throw ConfigError("no anchors");
  Classification out;
  bool any_plateau = false, all_decay = true;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    BnEstimate est = estimate_bn_measure(f, mu, anchors[a], n, horizons, opt, bn);
    AnchorEvidence e;
    e.anchor = static_cast<long>(a);
    e.n = n;
    e.horizons = horizons;
    // Tests run on the conditional frequencies, which are the estimates up
    // to the common factor mu(C_n(x)).
    std::vector<double> q, qse;
    for (const auto& r : est.reports) {
      e.estimates.push_back(r.value);
      e.stderrs.push_back(r.std_error);
      q.push_back(r.extra["conditional"].get<double>());
      qse.push_back(r.extra["conditional_stderr"].get<double>());
    }
    e.plateau = positive_plateau(q, qse);
    e.decay = decaying(q, qse);
    any_plateau = any_plateau || e.plateau;
    all_decay = all_decay && e.decay;
    out.evidence.push_back(std::move(e));
  }
  if (any_plateau) out.verdict = Verdict::mu_almost_equicontinuous;
  else if (all_decay) out.verdict = Verdict::almost_expansive_indicated;
  return out;
}

namespace {

// a^k, or limit + 1 when that exceeds limit.
long capped_power(long a, long k, long limit) {
  long v = 1;
  for (long i = 0; i < k; ++i) {
    if (v > limit / a) return limit + 1;
    v *= a;
  }
  return v;
}

// Dependence range of the trace, split into the word and the cells around it.
struct Collar {
  Interval range;
  Interval word;
  std::vector<long> positions;  // coordinates outside `word`
};

Collar make_collar(const CompositeAutomaton& f, long n, long T, long m) {
  Collar c;
  c.range = {-n - static_cast<long>(f.left_reach()) * (T - 1),
             n + static_cast<long>(f.right_reach()) * (T - 1)};
  c.range.lo = std::min(c.range.lo, -m);
  c.range.hi = std::max(c.range.hi, m);
  c.word = {-m, m};
  for (long i = c.range.lo; i <= c.range.hi; ++i)
    if (!c.word.contains(i)) c.positions.push_back(i);
  return c;
}

// True when every filling tried gives one trace.
bool is_blocking(const CompositeAutomaton& f, const Word& w, const Collar& c, long n, long T,
                 bool exhaustive, long budget, std::uint64_t seed, long* tested) {
  const auto arity = static_cast<Letter>(f.alphabet()->size());
  WindowConfiguration x(f.alphabet(), Word(static_cast<std::size_t>(c.range.size()), 0), c.range.lo);
  for (long k = 0; k < static_cast<long>(w.size()); ++k) x.set(c.word.lo + k, w[static_cast<std::size_t>(k)]);
  std::optional<ColumnTrace> ref;
  auto check = [&]() {
    ++*tested;
    if (!ref) {
      ref = column_trace(f, x, n, T);
      return true;
    }
    return first_divergence(f, x, *ref) == T;
  };
  if (exhaustive) {
    std::vector<Letter> digits(c.positions.size(), 0);
    for (;;) {
      for (std::size_t k = 0; k < digits.size(); ++k) x.set(c.positions[k], digits[k]);
      if (!check()) return false;
      std::size_t k = 0;
      while (k < digits.size() && ++digits[k] == arity) digits[k++] = 0;
      if (k == digits.size()) return true;
    }
  }
  // Fillings cycle through i.i.d. letters, runs of one letter (mean length
  // 32) and isolated letters on a blank background (density 1/32). Uniform
  // noise alone rarely builds the long structures that carry information.
  Rng rng(seed, 0xb10c);
  for (long b = 0; b < budget; ++b) {
    Letter run = static_cast<Letter>(rng.below(arity));
    for (long p : c.positions) {
      Letter v = 0;
      switch (b % 3) {
        case 0:
          v = static_cast<Letter>(rng.below(arity));
          break;
        case 1:
          if (rng.below(32) == 0) run = static_cast<Letter>(rng.below(arity));
          v = run;
          break;
        default:
          v = rng.below(32) == 0 ? static_cast<Letter>(rng.below(arity)) : 0;
      }
      x.set(p, v);
    }
    if (!check()) return false;
  }
  return true;
}

}  // namespace

std::optional<BlockingWord> find_blocking_word(const CompositeAutomaton& f, long max_len, long T,
                                               const BlockingSearchOptions& opt) {
  if (T < 1 || opt.n < 0) throw ConfigError("blocking search needs T >= 1 and n >= 0");
  const long arity = static_cast<long>(f.alphabet()->size());
  std::vector<long> lengths;
  for (long len = 2 * opt.n + 1; len <= max_len; len += 2) lengths.push_back(len);
  long words_left = opt.max_words;
  Rng pick(opt.seed, 0x3011d);
  for (std::size_t li = 0; li < lengths.size() && words_left > 0; ++li) {
    const long len = lengths[li], m = len / 2;
    const Collar collar = make_collar(f, opt.n, T, m);
    const long cells = static_cast<long>(collar.positions.size());
    const bool exhaustive = capped_power(arity, cells, opt.exhaustive_limit) <= opt.exhaustive_limit;
    const long all = capped_power(arity, len, words_left);
    const bool enumerate = all <= words_left;
    const long share = enumerate ? all : std::max<long>(1, words_left / static_cast<long>(lengths.size() - li));
    Word w(static_cast<std::size_t>(len), 0);
    for (long k = 0; k < share; ++k, --words_left) {
      if (enumerate) {
        long code = k;
        for (auto& a : w) {
          a = static_cast<Letter>(code % arity);
          code /= arity;
        }
      } else {
        for (auto& a : w) a = static_cast<Letter>(pick.below(static_cast<std::uint64_t>(arity)));
      }
      long tested = 0;
      if (is_blocking(f, w, collar, opt.n, T, exhaustive, opt.fill_budget,
                      hash_combine(opt.seed, static_cast<std::uint64_t>(len * 1000003 + k)), &tested))
        return BlockingWord{w, -m, exhaustive, tested};
    }
  }
  return std::nullopt;
}

nlohmann::json SensitivityReport::to_json() const {
  return {{"samples", samples},
          {"witnesses", witnesses},
          {"fraction", fraction()},
          {"divergence_times", divergence_times},
          {"code_version", kCodeVersion}};
}

namespace {

// Divergence time of one perturbation, or -1. Throws WindowError when the
// sampled window is too small.
long try_witness(const CompositeAutomaton& f, const WindowSampler& sampler, long s, long n, long T,
                 long a, long margin, const SensitivityOptions& opt) {
  const long tl = f.typical_left_reach(), tr = f.typical_right_reach();
  if (opt.strategy == Perturbation::fe_train) {
    const long t0 = opt.m + 1 + a;
    if (t0 >= T) return -1;
    Interval need{-3 * t0 - tl * t0 - margin, n + tr * t0 + margin};
    need.lo = std::min(need.lo, -n - tl * t0 - margin);
    WindowConfiguration x = sampler(s, need);
    WindowConfiguration y = fe::inject_train(x, t0);
    long d = first_divergence(f, y, column_trace(f, x, n, t0 + 1));
    return d <= t0 ? d : -1;
  }
  const long reach = opt.m + 1 + a / 2;
  Interval need{-std::max(n, reach) - tl * (T - 1) - margin, std::max(n, reach) + tr * (T - 1) + margin};
  WindowConfiguration x = sampler(s, need);
  Rng rng(opt.seed, hash_combine(static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(a)));
  const long pos = (a % 2 == 0) ? reach : -reach;
  const auto arity = f.alphabet()->size();
  if (arity < 2) return -1;
  WindowConfiguration y = x;
  Letter old = x.cell(pos);
  y.set(pos, static_cast<Letter>((old + 1 + rng.below(arity - 1)) % arity));
  long d = first_divergence(f, y, column_trace(f, x, n, T));
  return d < T ? d : -1;
}

}  // namespace

SensitivityReport sensitivity_probe(const CompositeAutomaton& f, const WindowSampler& sampler,
                                    const SensitivityOptions& opt) {
  if (opt.samples <= 0 || opt.horizon < 1 || opt.m < 0 || opt.n < 0) throw ConfigError("invalid probe parameters");
  if (opt.n > opt.m) throw ConfigError("watched column must lie inside [-m, m]");
  const long n = opt.n;
  SensitivityReport rep;
  rep.samples = opt.samples;
  rep.divergence_times.assign(static_cast<std::size_t>(opt.samples), -1);
  parallel_for(opt.samples, opt.workers, [&](long s) {
    for (long a = 0; a < opt.attempts; ++a) {
      long d = -1;
      for (long margin = 64;; margin *= 2) {
        try {
          d = try_witness(f, sampler, s, n, opt.horizon, a, margin, opt);
          break;
        } catch (const WindowError&) {
          if (margin > (static_cast<long>(f.radius()) + 1) * opt.horizon * 4) throw;
        }
      }
      if (d >= 0) {
        rep.divergence_times[static_cast<std::size_t>(s)] = d;
        break;
      }
    }
  });
  rep.witnesses = std::count_if(rep.divergence_times.begin(), rep.divergence_times.end(),
                                [](long d) { return d >= 0; });
  return rep;
}

}  // namespace calab
