#pragma once

#include <optional>
#include <vector>

#include "calab/fe.hpp"
#include "calab/measures.hpp"

namespace calab::fe {

// delta_0 x uniform on X1 x delta_0.
MeasureSpec mu_i();

struct CounterDescriptor {
  enum class Kind { counter, void_counter, precounter };
  Kind kind = Kind::precounter;
  long left_emitter = 0;
  long right_emitter = 0;
  // Number of cells strictly between the emitters.
  long size = 0;
  int carriers = 0;
  int carrier = Z;        // when carriers == 1
  long carrier_pos = 0;  // when carriers == 1
  int left_state = E0;
  int right_state = E0;
};

// Segments between consecutive emitters of a row; `origin` is the coordinate
// of row[0]. Segments are not wrapped around the row ends.
std::vector<CounterDescriptor> parse_counters(std::span<const Letter> row, long origin);
// All segments of a periodic configuration, including the one across the seam.
std::vector<CounterDescriptor> parse_counters(const CyclicConfiguration& x);

struct TrainState {
  long t = 0;
  long left = 0;
  long right = 0;
  long length() const { return right - left + 1; }
};

struct Train {
  std::vector<TrainState> path;
  long max_length() const;
  // Index in `path` of the first state with maximal length.
  std::size_t peak() const;
};

// Follows runs of 1s in the X2 layer. A run at time t+1 continues the run at
// time t whose right end is one cell to its left. rows[t][k] is the letter at
// coordinate origin + k.
std::vector<Train> track_trains(const std::vector<Word>& rows, long origin);

// Furthest a train from a size-l counter travels past the right emitter.
inline double reach_bound(long l) { return 0.3 * static_cast<double>(l) + 4.5; }

struct ChainCounter {
  long size = 152;
  bool void_counter = false;
  int right_state = E1;
  // Carrier position relative to the left emitter (1..size).
  long carrier_offset = 1;
  int carrier = R;
};

struct ChainLayout {
  CyclicConfiguration config;
  std::vector<long> emitters;  // left to right, coordinates of the period
};

// Emitter at 0, then for each counter its cells and its right emitter. The
// last emitter is followed by `tail` zero cells before the period repeats.
ChainLayout counter_chain(const std::vector<ChainCounter>& counters, int first_state, long tail);

struct CounterRun {
  long size = 0;
  long steps = 0;
  // Consecutive steps between changes of the right emitter, first partial one dropped.
  std::vector<long> dwell;
  // Maximal length of each complete train leaving the right emitter.
  std::vector<long> train_lengths;
  // Trains whose every step after the peak moved left end +3, right end +1.
  long regular_trains = 0;
  long irregular_trains = 0;
  // Furthest X2 cell at 1, in cells right of the right emitter.
  long max_excursion = 0;
};

// Single counter of size l with an R next to its left emitter, run for `steps`.
CounterRun run_lone_counter(long l, long steps);

// Layout used by gap_analyzer: a size-3000 counter, then `sizes` with entry
// `void_index` void, then a 400-cell tail. Carrier offsets are fixed.
ChainLayout analyzer_chain(const std::vector<long>& sizes, int void_index);

struct GapReport {
  std::vector<long> sizes;
  long largest_period = 0;  // ceil(l_k / 5)
  long windows_checked = 0;
  long windows_with_hole = 0;
  long steps = 0;
  long longest_run_of_ones = 0;  // in the central X2 column
  long live_counters = 0;        // segments with one carrier at the end
  std::vector<bool> reach_condition;  // l_{i-1} <= 3 l_i / 10 + 9/2, per link
  bool holes_everywhere() const { return windows_checked > 0 && windows_with_hole == windows_checked; }
};

// Chain of counters (left to right, each >= 152 cells) laid out by
// analyzer_chain; one `void_index` entry may be a void counter (-1 for none).
// The central column sits 10 cells right of the last emitter.
// Runs (periods + 1) * 4 P_k steps and checks every run of 3 P_k consecutive
// steps of the central X2 column for a 0.
GapReport gap_analyzer(const std::vector<long>& sizes, int void_index, long periods);

// Config y in C_m(x) whose central X2 cell is 1 at time t0 >= m + 1: a train of
// length 2 t0 + 1 ending at -t0 is written into X2. X0 and X1 never read X2
// and the X2 update is monotone in X2, so F^t0(y) has X2 = 1 at 0.
WindowConfiguration inject_train(const WindowConfiguration& x, long t0);

}  // namespace calab::fe
