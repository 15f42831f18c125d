#include "calab/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "calab/error.hpp"

namespace calab {

namespace {

// Start index of the lexicographically least rotation (two-pointer method).
std::size_t least_rotation(const Word& w) {
  const std::size_t n = w.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    Letter a = w[(i + k) % n], b = w[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) i += k + 1; else j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

void check_letters(const Alphabet& a, const Word& w) {
  for (Letter c : w)
    if (c >= a.size()) throw ConfigError("letter out of alphabet range");
}

}  // namespace

CyclicConfiguration::CyclicConfiguration(AlphabetPtr alphabet, Word period, long phase)
    : alphabet_(std::move(alphabet)), period_(std::move(period)), phase_(phase) {
  if (!alphabet_) throw ConfigError("missing alphabet");
  if (period_.empty()) throw ConfigError("cyclic configuration needs a nonempty period");
  check_letters(*alphabet_, period_);
  phase_ = floor_mod(phase_, length());
}

Word CyclicConfiguration::read(long lo, long hi) const {
  Word w;
  if (hi < lo) return w;
  w.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long i = lo; i <= hi; ++i) w.push_back(cell(i));
  return w;
}

long CyclicConfiguration::minimal_period() const {
  const long n = length();
  for (long p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (long i = p; i < n && ok; ++i) ok = period_[i] == period_[i - p];
    if (ok) return p;
  }
  return n;
}

Word CyclicConfiguration::canonical_rotation() const {
  Word root(period_.begin(), period_.begin() + minimal_period());
  std::rotate(root.begin(), root.begin() + static_cast<long>(least_rotation(root)), root.end());
  return root;
}

bool CyclicConfiguration::operator==(const CyclicConfiguration& other) const {
  if (!(*alphabet_ == *other.alphabet_)) return false;
  long p = minimal_period();
  if (p != other.minimal_period()) return false;
  for (long i = 0; i < p; ++i)
    if (cell(i) != other.cell(i)) return false;
  return true;
}

WindowConfiguration::WindowConfiguration(AlphabetPtr alphabet, Word cells, long origin)
    : WindowConfiguration(alphabet, cells, origin,
                          Interval{origin, origin + static_cast<long>(cells.size()) - 1}) {}

WindowConfiguration::WindowConfiguration(AlphabetPtr alphabet, Word cells, long origin,
                                         Interval valid)
    : alphabet_(std::move(alphabet)), cells_(std::move(cells)), origin_(origin), valid_(valid) {
  if (!alphabet_) throw ConfigError("missing alphabet");
  check_letters(*alphabet_, cells_);
  Interval stored{origin_, origin_ + static_cast<long>(cells_.size()) - 1};
  if (valid_.size() > 0 && !stored.contains(valid_))
    throw ConfigError("valid range exceeds stored cells");
}

WindowConfiguration WindowConfiguration::from_cyclic(const CyclicConfiguration& x, long lo,
                                                     long hi) {
  return WindowConfiguration(x.alphabet(), x.read(lo, hi), lo);
}

Letter WindowConfiguration::cell(long i) const {
  if (!valid_.contains(i))
    throw WindowError("read at " + std::to_string(i) + " outside valid range [" +
                      std::to_string(valid_.lo) + ", " + std::to_string(valid_.hi) + "]");
  return cells_[static_cast<std::size_t>(i - origin_)];
}

Word WindowConfiguration::read(long lo, long hi) const {
  if (hi < lo) return {};
  if (!valid_.contains(lo) || !valid_.contains(hi))
    throw WindowError("read range outside valid range");
  auto b = cells_.begin() + (lo - origin_);
  return Word(b, b + (hi - lo + 1));
}

void WindowConfiguration::set(long i, Letter a) {
  if (!valid_.contains(i)) throw WindowError("write outside valid range");
  if (a >= alphabet_->size()) throw ConfigError("letter out of alphabet range");
  cells_[static_cast<std::size_t>(i - origin_)] = a;
}

WindowConfiguration WindowConfiguration::restrict(Interval v) const {
  if (!valid_.contains(v)) throw WindowError("restriction outside valid range");
  return WindowConfiguration(alphabet_, read(v.lo, v.hi), v.lo, v);
}

bool Cylinder::contains(const CyclicConfiguration& x) const {
  for (std::size_t k = 0; k < word.size(); ++k)
    if (x.cell(position + static_cast<long>(k)) != word[k]) return false;
  return true;
}

bool Cylinder::contains(const WindowConfiguration& x) const {
  if (!x.valid().contains(support()))
    throw WindowError("cylinder support outside valid range");
  const Letter* p = x.cells().data() + (position - x.origin());
  return std::equal(word.begin(), word.end(), p);
}

Cylinder cylinder_of(const CyclicConfiguration& x, long n) {
  if (n < 0) throw ConfigError("negative cylinder radius");
  return {x.read(-n, n), -n};
}

Cylinder cylinder_of(const WindowConfiguration& x, long n) {
  if (n < 0) throw ConfigError("negative cylinder radius");
  return {x.read(-n, n), -n};
}

CyclicConfiguration shift(const CyclicConfiguration& x, long k) {
  return CyclicConfiguration(x.alphabet(), x.period(), x.phase() + k);
}

WindowConfiguration shift(const WindowConfiguration& x, long k) {
  Interval v = x.valid();
  if (v.size() > 0) v = {v.lo - k, v.hi - k};
  return WindowConfiguration(x.alphabet(), x.cells(), x.origin() - k, v);
}

namespace {

Distance distance_over(long radius, auto&& differs) {
  Distance d;
  d.checked_radius = radius;
  for (long j = 0; j <= radius; ++j) {
    if (differs(j) || differs(-j)) {
      d.exponent = j;
      d.value = std::ldexp(1.0, static_cast<int>(-std::min<long>(j, 4000)));
      return d;
    }
  }
  d.upper_bound_only = true;
  return d;
}

}  // namespace

Distance distance(const CyclicConfiguration& x, const CyclicConfiguration& y) {
  // Two periodic points that agree on a full common period agree everywhere.
  long radius = std::lcm(x.length(), y.length());
  Distance d = distance_over(radius, [&](long j) { return x.cell(j) != y.cell(j); });
  d.upper_bound_only = false;
  return d;
}

Distance distance(const WindowConfiguration& x, const WindowConfiguration& y) {
  long r = std::min({-x.valid().lo, x.valid().hi, -y.valid().lo, y.valid().hi});
  if (r < 0 || x.valid().size() == 0 || y.valid().size() == 0)
    throw WindowError("incomparable windows");
  return distance_over(r, [&](long j) { return x.cell(j) != y.cell(j); });
}

}  // namespace calab
