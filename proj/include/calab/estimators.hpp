#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "calab/automaton.hpp"
#include "calab/measures.hpp"
#include "calab/report.hpp"

namespace calab {

struct SamplingOptions {
  long samples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  // Largest window (cells) a single sample may need under the static light cone.
  long window_budget = 4'000'000;
};

// Calls fn(i) for i in [0, count). Each index must write only its own slot, so
// results do not depend on the number of workers.
template <class Fn>
void parallel_for(long count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

using Visit = std::function<bool(long t, const WindowConfiguration& x)>;

// Draws x_0 ~ mu (or mu conditioned on `given`) and calls visit(t, x_t) for
// t = 0..steps until visit returns false. Every x_t passed is exact on
// `target`. The window is first sized with the typical reach; if that turns
// out too small the sample is regrown with the static reach and visit is
// replayed from t = 0 with the same cells.
void run_sample(const CompositeAutomaton& f, const MeasureSpec& mu, const CellStream& s,
                Interval target, long steps, const Visit& visit, const Cylinder* given = nullptr,
                long window_budget = SamplingOptions{}.window_budget);

// Static light-cone window for `target` after `steps` steps.
Interval light_cone(const CompositeAutomaton& f, Interval target, long steps);

// (mu o F^-t)([c]) by sampling.
EstimateReport estimate_image_cylinder(const CompositeAutomaton& f, const MeasureSpec& mu,
                                       const Cylinder& c, long t, const SamplingOptions& opt);

struct CesaroReport {
  EstimateReport estimate;            // n-term mean
  std::vector<double> partial_means;  // entry k: mean over i <= k
  std::vector<double> partial_stderr;
};

// (1/n) sum_{i<n} (mu o F^-i)([c]). Each sample contributes its whole
// trajectory; std_error is the Bernoulli bound sqrt(p(1-p)/N), which is at
// least the true standard error of the time-averaged estimator.
CesaroReport cesaro_mean(const CompositeAutomaton& f, const MeasureSpec& mu, const Cylinder& c,
                         long n, const SamplingOptions& opt);
// Several cylinders on the same samples.
std::vector<CesaroReport> cesaro_panel(const CompositeAutomaton& f, const MeasureSpec& mu,
                                       const std::vector<Cylinder>& panel, long n,
                                       const SamplingOptions& opt);

// |mu_c(c1 & sigma^-t c2) - mu_c(c1) mu_c(c2)| for each t in `separations`,
// with mu_c the n-term Cesaro mean. All separations share samples.
std::vector<EstimateReport> mixing_gap(const CompositeAutomaton& f, const MeasureSpec& mu,
                                       const Cylinder& c1, const Cylinder& c2,
                                       const std::vector<long>& separations, long n,
                                       const SamplingOptions& opt);

// Source of sample configurations exact on a requested range. The same
// (sample, seed) gives consistent cells for every requested range.
using WindowSampler = std::function<WindowConfiguration(long sample, Interval need)>;

WindowSampler measure_sampler(const MeasureSpec& mu, std::uint64_t seed);
// x = F^steps(y), y ~ mu.
WindowSampler evolved_sampler(const CompositeAutomaton& f, const MeasureSpec& mu,
                              std::uint64_t seed, long steps);

}  // namespace calab
