#pragma once

#include <cstdint>
#include <optional>

#include "calab/alphabet.hpp"

namespace calab {

// Floor modulus for possibly negative coordinates.
inline long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

struct Interval {
  long lo = 0;
  long hi = -1;
  long size() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(long i) const { return lo <= i && i <= hi; }
  bool contains(const Interval& o) const { return o.size() == 0 || (lo <= o.lo && o.hi <= hi); }
  bool operator==(const Interval&) const = default;
};

// Spatially periodic configuration: cell(i) = period[(i + phase) mod |period|].
class CyclicConfiguration {
 public:
  CyclicConfiguration(AlphabetPtr alphabet, Word period, long phase = 0);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const Word& period() const { return period_; }
  long phase() const { return phase_; }
  long length() const { return static_cast<long>(period_.size()); }

  Letter cell(long i) const { return period_[floor_mod(i + phase_, length())]; }
  Word read(long lo, long hi) const;

  // Smallest p with cell(i + p) == cell(i) for all i.
  long minimal_period() const;
  // Lexicographically least rotation of the primitive root, ignoring phase.
  // Identifies the shift orbit of the configuration.
  Word canonical_rotation() const;

  // Equality of the underlying points of A^Z.
  bool operator==(const CyclicConfiguration& other) const;

 private:
  AlphabetPtr alphabet_;
  Word period_;
  long phase_;
};

// Finite patch of a configuration. Only cells in `valid` may be read.
class WindowConfiguration {
 public:
  WindowConfiguration(AlphabetPtr alphabet, Word cells, long origin);
  WindowConfiguration(AlphabetPtr alphabet, Word cells, long origin, Interval valid);
  static WindowConfiguration from_cyclic(const CyclicConfiguration& x, long lo, long hi);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  long origin() const { return origin_; }
  const Interval& valid() const { return valid_; }
  const Word& cells() const { return cells_; }
  Word& mutable_cells() { return cells_; }

  // Throws WindowError outside `valid`.
  Letter cell(long i) const;
  Word read(long lo, long hi) const;
  void set(long i, Letter a);

  // Same coordinates, valid range narrowed; the cell storage is trimmed.
  WindowConfiguration restrict(Interval v) const;

 private:
  AlphabetPtr alphabet_;
  Word cells_;
  long origin_;
  Interval valid_;
};

// [word] placed with word[0] at `position`.
struct Cylinder {
  Word word;
  long position = 0;

  long lo() const { return position; }
  long hi() const { return position + static_cast<long>(word.size()) - 1; }
  Interval support() const { return {lo(), hi()}; }

  bool contains(const CyclicConfiguration& x) const;
  // Throws WindowError if the support is not inside x.valid().
  bool contains(const WindowConfiguration& x) const;
  // Translate by t: [w]_p becomes [w]_{p+t}.
  Cylinder shifted(long t) const { return {word, position + t}; }
};

// C_n(x) = [x(-n, n)]_{-n}.
Cylinder cylinder_of(const CyclicConfiguration& x, long n);
Cylinder cylinder_of(const WindowConfiguration& x, long n);

// sigma^k: result.cell(i) = x.cell(i + k).
CyclicConfiguration shift(const CyclicConfiguration& x, long k);
WindowConfiguration shift(const WindowConfiguration& x, long k);

// d(x, y) = 2^-min{|j| : x_j != y_j}.
struct Distance {
  double value = 0.0;
  // min |j| where the configurations differ; -1 if none was found.
  long exponent = -1;
  // True when no difference was seen: `value` is 0 and the true distance is
  // at most 2^-(checked_radius + 1).
  bool upper_bound_only = false;
  long checked_radius = 0;
};

Distance distance(const CyclicConfiguration& x, const CyclicConfiguration& y);
// Throws WindowError when the valid ranges share no symmetric range around 0.
Distance distance(const WindowConfiguration& x, const WindowConfiguration& y);

}  // namespace calab
