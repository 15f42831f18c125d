#include "calab/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "calab/error.hpp"

namespace calab {

Interval light_cone(const CompositeAutomaton& f, Interval target, long steps) {
  return {target.lo - static_cast<long>(f.left_reach()) * steps,
          target.hi + static_cast<long>(f.right_reach()) * steps};
}

namespace {

// false when the window turned out too small.
bool attempt(const CompositeAutomaton& f, const MeasureSpec& mu, const CellStream& s,
             Interval target, long steps, const Visit& visit, const Cylinder* given,
             long left, long right) {
  Interval range{target.lo - left * steps, target.hi + right * steps};
  WindowConfiguration x =
      given ? sample_window_given(mu, range, s, *given) : sample_window(mu, range, s);
  for (long t = 0;; ++t) {
    if (!x.valid().contains(target)) return false;
    if (!visit(t, x) || t == steps) return true;
    try {
      x = advance_window(f, x);
    } catch (const WindowError&) {
      return false;
    }
  }
}

void check_samples(const SamplingOptions& opt) {
  if (opt.samples <= 0) throw ConfigError("sample count must be positive");
}

}  // namespace

void run_sample(const CompositeAutomaton& f, const MeasureSpec& mu, const CellStream& s,
                Interval target, long steps, const Visit& visit, const Cylinder* given,
                long window_budget) {
  if (steps < 0) throw ConfigError("negative horizon");
  if (target.size() <= 0) throw ConfigError("empty target range");
  if (!(*mu.alphabet == *f.alphabet())) throw ConfigError("measure and automaton alphabets differ");
  if (light_cone(f, target, steps).size() > window_budget)
    throw BudgetError("window for horizon " + std::to_string(steps) + " exceeds the budget of " +
                      std::to_string(window_budget) + " cells");
  const long tl = f.typical_left_reach(), tr = f.typical_right_reach();
  const long sl = f.left_reach(), sr = f.right_reach();
  if (attempt(f, mu, s, target, steps, visit, given, tl, tr)) return;
  if (tl == sl && tr == sr) throw WindowError("static light cone too small");
  if (!attempt(f, mu, s, target, steps, visit, given, sl, sr))
    throw WindowError("static light cone too small");
}

EstimateReport estimate_image_cylinder(const CompositeAutomaton& f, const MeasureSpec& mu,
                                       const Cylinder& c, long t, const SamplingOptions& opt) {
  check_samples(opt);
  if (c.word.empty()) throw ConfigError("empty cylinder");
  std::vector<char> hit(static_cast<std::size_t>(opt.samples), 0);
  parallel_for(opt.samples, opt.workers, [&](long s) {
    run_sample(f, mu, CellStream(opt.seed, static_cast<std::uint64_t>(s)), c.support(), t,
               [&](long i, const WindowConfiguration& x) {
                 if (i == t) hit[static_cast<std::size_t>(s)] = c.contains(x);
                 return i < t;
               },
               nullptr, opt.window_budget);
  });
  long hits = std::count(hit.begin(), hit.end(), 1);
  EstimateReport r;
  r.method = "image-cylinder";
  r.automaton = f.name();
  r.measure = mu.label;
  r.samples = opt.samples;
  r.value = static_cast<double>(hits) / static_cast<double>(opt.samples);
  r.std_error = bernoulli_stderr(r.value, opt.samples);
  r.horizon = t;
  r.window = light_cone(f, c.support(), t);
  r.seed = opt.seed;
  r.extra["hits"] = hits;
  return r;
}

std::vector<CesaroReport> cesaro_panel(const CompositeAutomaton& f, const MeasureSpec& mu,
                                       const std::vector<Cylinder>& panel, long n,
                                       const SamplingOptions& opt) {
  check_samples(opt);
  if (n <= 0) throw ConfigError("Cesaro horizon must be positive");
  if (panel.empty()) throw ConfigError("empty cylinder panel");
  Interval target = panel.front().support();
  for (const auto& c : panel) {
    if (c.word.empty()) throw ConfigError("empty cylinder");
    target.lo = std::min(target.lo, c.lo());
    target.hi = std::max(target.hi, c.hi());
  }
  const auto N = static_cast<std::size_t>(opt.samples);
  const auto nn = static_cast<std::size_t>(n);
  const std::size_t m = panel.size();
  // hits[(s * m + c) * n + i]
  std::vector<char> hits(N * m * nn, 0);
  parallel_for(opt.samples, opt.workers, [&](long s) {
    char* row = hits.data() + static_cast<std::size_t>(s) * m * nn;
    run_sample(f, mu, CellStream(opt.seed, static_cast<std::uint64_t>(s)), target, n - 1,
               [&](long i, const WindowConfiguration& x) {
                 for (std::size_t c = 0; c < m; ++c) row[c * nn + static_cast<std::size_t>(i)] = panel[c].contains(x);
                 return true;
               },
               nullptr, opt.window_budget);
  });
  std::vector<CesaroReport> out(m);
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<long> per_time(nn, 0);
    for (std::size_t s = 0; s < N; ++s)
      for (std::size_t i = 0; i < nn; ++i) per_time[i] += hits[(s * m + c) * nn + i];
    double total = 0;
    for (std::size_t i = 0; i < nn; ++i) {
      total += static_cast<double>(per_time[i]);
      double mean = total / (static_cast<double>(N) * static_cast<double>(i + 1));
      out[c].partial_means.push_back(mean);
      out[c].partial_stderr.push_back(bernoulli_stderr(mean, opt.samples));
    }
    EstimateReport& r = out[c].estimate;
    r.method = "cesaro-mean";
    r.automaton = f.name();
    r.measure = mu.label;
    r.samples = opt.samples;
    r.value = out[c].partial_means.back();
    r.std_error = out[c].partial_stderr.back();
    r.horizon = n;
    r.window = light_cone(f, panel[c].support(), n - 1);
    r.seed = opt.seed;
    r.extra["position"] = panel[c].position;
    r.extra["length"] = panel[c].word.size();
  }
  return out;
}

CesaroReport cesaro_mean(const CompositeAutomaton& f, const MeasureSpec& mu, const Cylinder& c,
                         long n, const SamplingOptions& opt) {
  return std::move(cesaro_panel(f, mu, {c}, n, opt).front());
}

std::vector<EstimateReport> mixing_gap(const CompositeAutomaton& f, const MeasureSpec& mu,
                                       const Cylinder& c1, const Cylinder& c2,
                                       const std::vector<long>& separations, long n,
                                       const SamplingOptions& opt) {
  check_samples(opt);
  if (n <= 0) throw ConfigError("Cesaro horizon must be positive");
  if (separations.empty()) throw ConfigError("no separations given");
  std::vector<Cylinder> shifted;
  Interval target = c1.support();
  for (long t : separations) {
    Cylinder c = c2.shifted(t);
    if (c.lo() <= c1.hi() && c1.lo() <= c.hi())
      throw ConfigError("cylinder supports overlap at separation " + std::to_string(t));
    target.lo = std::min(target.lo, c.lo());
    target.hi = std::max(target.hi, c.hi());
    shifted.push_back(std::move(c));
  }
  const std::size_t m = separations.size();
  // Per sample: c1 count, then (c2, joint) counts per separation.
  const std::size_t width = 1 + 2 * m;
  std::vector<long> counts(static_cast<std::size_t>(opt.samples) * width, 0);
  parallel_for(opt.samples, opt.workers, [&](long s) {
    long* row = counts.data() + static_cast<std::size_t>(s) * width;
    run_sample(f, mu, CellStream(opt.seed, static_cast<std::uint64_t>(s)), target, n - 1,
               [&](long i, const WindowConfiguration& x) {
                 if (i == 0) std::fill(row, row + width, 0);
                 bool a = c1.contains(x);
                 row[0] += a;
                 for (std::size_t k = 0; k < m; ++k) {
                   bool b = shifted[k].contains(x);
                   row[1 + 2 * k] += b;
                   row[2 + 2 * k] += a && b;
                 }
                 return true;
               },
               nullptr, opt.window_budget);
  });
  std::vector<double> sum(width, 0.0);
  for (long s = 0; s < opt.samples; ++s)
    for (std::size_t k = 0; k < width; ++k)
      sum[k] += static_cast<double>(counts[static_cast<std::size_t>(s) * width + k]);
  const double denom = static_cast<double>(opt.samples) * static_cast<double>(n);
  const double p1 = sum[0] / denom;
  const double se1 = bernoulli_stderr(p1, opt.samples);
  std::vector<EstimateReport> out;
  for (std::size_t k = 0; k < m; ++k) {
    double p2 = sum[1 + 2 * k] / denom, p12 = sum[2 + 2 * k] / denom;
    double se2 = bernoulli_stderr(p2, opt.samples), se12 = bernoulli_stderr(p12, opt.samples);
    EstimateReport r;
    r.method = "mixing-gap";
    r.automaton = f.name();
    r.measure = mu.label;
    r.samples = opt.samples;
    r.value = std::abs(p12 - p1 * p2);
    // Delta method with Bernoulli bounds for each term.
    r.std_error = std::sqrt(se12 * se12 + p2 * p2 * se1 * se1 + p1 * p1 * se2 * se2);
    r.horizon = n;
    r.window = light_cone(f, target, n - 1);
    r.seed = opt.seed;
    r.extra["separation"] = separations[k];
    r.extra["p1"] = p1;
    r.extra["p2"] = p2;
    r.extra["p12"] = p12;
    out.push_back(std::move(r));
  }
  return out;
}

WindowSampler measure_sampler(const MeasureSpec& mu, std::uint64_t seed) {
  return [mu, seed](long sample, Interval need) {
    return sample_window(mu, need, CellStream(seed, static_cast<std::uint64_t>(sample)));
  };
}

WindowSampler evolved_sampler(const CompositeAutomaton& f, const MeasureSpec& mu,
                              std::uint64_t seed, long steps) {
  return [f, mu, seed, steps](long sample, Interval need) {
    std::optional<WindowConfiguration> out;
    run_sample(f, mu, CellStream(seed, static_cast<std::uint64_t>(sample)), need, steps,
               [&](long t, const WindowConfiguration& x) {
                 if (t == steps) out = x;
                 return t < steps;
               },
               nullptr, std::numeric_limits<long>::max());
    return *out;
  };
}

}  // namespace calab
