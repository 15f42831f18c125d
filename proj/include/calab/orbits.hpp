#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "calab/estimators.hpp"
#include "calab/gilman.hpp"

namespace calab {

struct OrbitSummary {
  bool closed = false;  // false: no repeat within max_steps
  long steps = 0;       // configurations computed
  long preperiod = 0;
  long period = 0;
  // F^preperiod(x), then the rest of the cycle; same phase as x.
  std::vector<CyclicConfiguration> cycle;
  nlohmann::json to_json() const;
};

// Exact cycle detection: rows are hashed and every hash hit is confirmed by
// comparing whole rows. Keeps all rows, so memory is max_steps * |period|.
OrbitSummary detect_orbit(const CompositeAutomaton& f, const CyclicConfiguration& x, long max_steps);

struct SpliceResult {
  bool accepted = false;
  std::string diagnostics;
  std::optional<CyclicConfiguration> candidate;  // ^inf w ^inf, w = x(-n, -n+m-1)
  OrbitSummary orbit;
};

// Checks that sigma^m(x) and x have the same trace on [-n, n] through T, then
// builds the periodic point with period word x(-n, -n+m-1) and accepts it if
// its own trace equals x's through T and its orbit closes within max_steps.
SpliceResult splice_periodic_point(const CompositeAutomaton& f, const WindowConfiguration& x,
                                   long n, long m, long T, long max_steps);

struct DensityOptions {
  std::vector<long> periods{256, 512, 1024};
  long samples = 64;            // sampled configurations to collect factors from
  double frequency_floor = 1e-3;  // per-position frequency below which factors are skipped
  long max_factors = 200;       // most frequent factors kept
  int layer = -1;               // factor of the alphabet to read words on; -1 for whole letters
  long guard = -1;              // seam guard cells; -1 for min(2 r, P - L)
  long seam_attempts = 8;       // random guard fillings after the as-is and blank ones
  long max_steps = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct DensityShortfall {
  std::string word;
  long count = 0;
  std::string reason;
};

struct DensityReport {
  long factors = 0;
  long covered = 0;
  long timeouts = 0;
  std::vector<DensityShortfall> shortfalls;
  double coverage() const { return factors ? static_cast<double>(covered) / factors : 0.0; }
  nlohmann::json to_json() const;
};

// For each frequent length-L factor u of the sampled configurations, wraps a
// segment around one of its occurrences into periodic configurations of the
// given periods (seam cells as sampled, blank, then random) and counts u as
// covered when some F-cycle reached from them shows u somewhere.
DensityReport periodic_density_probe(const CompositeAutomaton& f, const WindowSampler& sampler,
                                     long L, const DensityOptions& opt);

}  // namespace calab
