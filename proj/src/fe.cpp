#include "calab/fe.hpp"

#include <algorithm>
#include <array>

#include "calab/error.hpp"

namespace calab::fe {

namespace {

constexpr std::array<Letter, kLetters> make_table(auto fn) {
  std::array<Letter, kLetters> t{};
  for (int c = 0; c < kLetters; ++c) t[static_cast<std::size_t>(c)] = static_cast<Letter>(fn(c));
  return t;
}

constexpr auto kX1 = make_table([](int c) { return x1_of(static_cast<Letter>(c)); });
constexpr auto kX2 = make_table([](int c) { return x2_of(static_cast<Letter>(c)); });
constexpr auto kEmitter = make_table([](int c) { return is_emitter(x1_of(static_cast<Letter>(c))); });
constexpr auto kCarrier = make_table([](int c) { return is_carrier(x1_of(static_cast<Letter>(c))); });
constexpr auto kIsE0 = make_table([](int c) { return x1_of(static_cast<Letter>(c)) == E0; });
// Letter with X1 cleared to 0.
constexpr auto kStripX1 = make_table([](int c) { return with_x1(static_cast<Letter>(c), Z); });
// Letter with X2 cleared.
constexpr auto kStripX2 = make_table([](int c) { return c >= 14 ? c - 14 : c; });

inline int x1(const Letter* w, int d) { return kX1[w[d]]; }

// ---------------------------------------------------------------- F1, F2

class F1 final : public LocalRule {
 public:
  std::string name() const override { return "fe/F1"; }
  int radius() const override { return kRadiusF1; }
  int left_reach() const override { return 3; }
  int right_reach() const override { return 0; }

  Letter apply(const Letter* nb) const override {
    const Letter* w = nb + 3;
    int t = kX2[w[-3]] & kX2[w[-2]] & kX2[w[-1]];
    return static_cast<Letter>(kStripX2[w[0]] + 14 * t);
  }

  void apply_row(std::span<const Letter> in, std::span<Letter> out) const override {
    const Letter* p = in.data();
    for (std::size_t j = 0; j < out.size(); ++j) {
      int t = kX2[p[j]] & kX2[p[j + 1]] & kX2[p[j + 2]];
      out[j] = static_cast<Letter>(kStripX2[p[j + 3]] + 14 * t);
    }
  }
};

class F2 final : public LocalRule {
 public:
  std::string name() const override { return "fe/F2"; }
  int radius() const override { return kRadiusF2; }
  int left_reach() const override { return 2; }
  int right_reach() const override { return 0; }

  Letter apply(const Letter* nb) const override {
    const Letter* w = nb + 2;
    int e = kIsE0[w[-2]] | kIsE0[w[-1]] | kIsE0[w[0]];
    int t = kX2[w[0]] | e;
    return static_cast<Letter>(kStripX2[w[0]] + 14 * t);
  }

  void apply_row(std::span<const Letter> in, std::span<Letter> out) const override {
    const Letter* p = in.data();
    for (std::size_t j = 0; j < out.size(); ++j) {
      int t = kX2[p[j + 2]] | kIsE0[p[j]] | kIsE0[p[j + 1]] | kIsE0[p[j + 2]];
      out[j] = static_cast<Letter>(kStripX2[p[j + 2]] + 14 * t);
    }
  }
};

// ---------------------------------------------------------------- F3
//
// A carrier moves 10 cells per step. An R whose next emitter to the right is
// D <= 10 cells away turns into an L at distance 11 - D from that emitter,
// i.e. at offset 2D - 11, and the emitter advances E_i -> E_{i+1}. An L
// mirrors this without touching the emitter. A carrier whose target lies
// behind another emitter is lost. A non-emitter cell carries a carrier only
// if it is the target of the unique carrier within 11 cells.

enum class Dest { ok, unknown, lost };

// Target of the carrier at w[o]; cells outside [lim_lo, lim_hi] are unknown.
Dest carrier_target(const Letter* w, int o, long lim_lo, long lim_hi, long& dest, int& letter) {
  const int v = x1(w, o);
  const int dir = v == R ? 1 : -1;
  int wall = 0;
  for (int d = 1; d <= 10; ++d) {
    long p = o + dir * d;
    if (p < lim_lo || p > lim_hi) return Dest::unknown;
    if (kEmitter[w[p]]) {
      wall = d;
      break;
    }
  }
  if (wall == 0) {
    dest = o + dir * kCarrierSpeed;
    letter = v;
    return Dest::ok;
  }
  dest = o + dir * (2 * wall - 11);
  letter = v == R ? L : R;
  // Reflection sends the carrier back past its start; that stretch must be free.
  long a = std::min<long>(dest, o), b = std::max<long>(dest, o);
  if (a < lim_lo || b > lim_hi) return Dest::unknown;
  for (long p = a; p <= b; ++p)
    if (p != o && kEmitter[w[p]]) return Dest::lost;
  return Dest::ok;
}

// Emitter update: advances when the first non-0 letter within 10 to the left is R.
inline int emitter_next(const Letter* w, long lim_lo) {
  const int c = x1(w, 0);
  for (int d = 1; d <= 10 && -d >= lim_lo; ++d) {
    int v = x1(w, -d);
    if (v == Z) continue;
    return v == R ? next_emitter(c) : c;
  }
  return c;
}

class F3 final : public LocalRule {
 public:
  std::string name() const override { return "fe/F3"; }
  int radius() const override { return kRadiusF3; }

  Letter apply(const Letter* nb) const override {
    const Letter* w = nb + kRadiusF3;
    const Letter c = w[0];
    if (kEmitter[c]) return with_x1(c, emitter_next(w, -kRadiusF3));
    int count = 0, o = 0;
    for (int d = -kRadiusF3; d <= kRadiusF3; ++d)
      if (kCarrier[w[d]]) {
        ++count;
        o = d;
      }
    if (count != 1) return kStripX1[c];
    long dest = 0;
    int letter = Z;
    if (carrier_target(w, o, -kRadiusF3, kRadiusF3, dest, letter) == Dest::ok && dest == 0)
      return with_x1(c, letter);
    return kStripX1[c];
  }

  void apply_row(std::span<const Letter> in, std::span<Letter> out) const override {
    const long n = static_cast<long>(in.size());
    const Letter* p = in.data();
    const long r = kRadiusF3;
    std::vector<long> carriers;
    for (long k = 0; k < n; ++k)
      if (kCarrier[p[k]]) carriers.push_back(k);
    for (std::size_t j = 0; j < out.size(); ++j) {
      const Letter c = p[j + r];
      out[j] = kEmitter[c] ? with_x1(c, emitter_next(p + j + r, -10)) : kStripX1[c];
    }
    for (long o : carriers) {
      long dest = 0;
      int letter = Z;
      if (carrier_target(p + o, 0, -o, n - 1 - o, dest, letter) != Dest::ok) continue;
      dest += o;
      if (dest < r || dest > n - 1 - r) continue;
      auto a = std::lower_bound(carriers.begin(), carriers.end(), dest - r);
      auto b = std::upper_bound(carriers.begin(), carriers.end(), dest + r);
      if (b - a != 1) continue;
      out[static_cast<std::size_t>(dest - r)] = with_x1(p[dest], letter);
    }
  }
};

// ---------------------------------------------------------------- Fp^X0
//
// X0 at i becomes 1 when an emitter sits at i-1, or when i is not an emitter,
// the X1 cells between the nearest emitters (looking at most 10 cells each
// way) hold no carrier, and X0 has a 1 within ceil((m-1)/2) cells to the left,
// m being the distance to the left emitter capped at 10. Otherwise 0. An
// emitter whose left neighbour has X0 = 1 is set to E1.

Letter fp_x0_literal(const Letter* w) {
  const Letter c = w[0];
  int x0 = 0;
  if (kEmitter[w[-1]]) {
    x0 = 1;
  } else if (!kEmitter[c]) {
    int ml = 10, mr = 10;
    for (int d = 1; d <= 10; ++d)
      if (kEmitter[w[-d]]) {
        ml = d;
        break;
      }
    for (int d = 1; d <= 10; ++d)
      if (kEmitter[w[d]]) {
        mr = d;
        break;
      }
    bool clear = true;
    for (int d = -(ml - 1); d <= mr - 1 && clear; ++d) clear = x1(w, d) == Z;
    if (clear)
      for (int l = 0; l <= ml / 2 && !x0; ++l) x0 = x0_of(w[-l]);
  }
  int v = x1(w, 0);
  if (x0_of(w[-1]) && is_emitter(v)) v = E1;
  return pack(x0, v, x2_of(c));
}

class FpX0 final : public LocalRule {
 public:
  std::string name() const override { return "fe/FpX0"; }
  int radius() const override { return kRadiusFpX0; }
  int typical_left_reach() const override { return 5; }
  int typical_right_reach() const override { return 0; }

  Letter apply(const Letter* nb) const override { return fp_x0_literal(nb + kRadiusFpX0); }

  void apply_row(std::span<const Letter> in, std::span<Letter> out) const override {
    const Letter* p = in.data();
    const long r = kRadiusFpX0;
    long last_one = -1000;
    for (long k = 0; k < r; ++k)
      if (x0_of(p[k])) last_one = k;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const long i = static_cast<long>(j) + r;
      if (x0_of(p[i])) last_one = i;
      if (last_one >= i - 5 || kEmitter[p[i - 1]]) {
        out[j] = fp_x0_literal(p + i);
      } else {
        // No 1 within reach and no emitter on the left: X0 becomes 0, X1 kept.
        out[j] = static_cast<Letter>(p[i] & ~Letter{1});
      }
    }
  }

  // Cells whose X0 image is forced to 0 by known cells alone, next to the
  // statically determined range.
  Interval determined(std::span<const Letter> in) const override {
    const long n = static_cast<long>(in.size());
    auto forced = [&](long i) {
      if (i < 5 || i >= n) return false;
      if (kEmitter[in[i - 1]]) return false;
      for (long k = i - 5; k <= i; ++k)
        if (x0_of(in[k])) return false;
      return true;
    };
    long lo = kRadiusFpX0, hi = n - 1 - kRadiusFpX0;
    while (lo - 1 >= 0 && forced(lo - 1)) --lo;
    while (hi + 1 < n && forced(hi + 1)) ++hi;
    return {lo, hi};
  }
};

// ---------------------------------------------------------------- Fp^X1

class FpX1 final : public LocalRule {
 public:
  std::string name() const override { return "fe/FpX1"; }
  int radius() const override { return kRadiusFpX1; }
  int typical_left_reach() const override { return 0; }
  int typical_right_reach() const override { return 0; }

  Letter apply(const Letter* nb) const override {
    const Letter* w = nb + kRadiusFpX1;
    if (!kEmitter[w[0]]) return w[0];
    for (int d = 1; d <= kRadiusFpX1; ++d)
      if (kEmitter[w[-d]] || kEmitter[w[d]]) return kStripX1[w[0]];
    return w[0];
  }

  void apply_row(std::span<const Letter> in, std::span<Letter> out) const override {
    const long n = static_cast<long>(in.size());
    const long r = kRadiusFpX1;
    std::copy(in.begin() + r, in.begin() + r + static_cast<long>(out.size()), out.begin());
    long prev = -1000000;
    auto next_emitter_from = [&](long from) {
      for (long q = from; q < n; ++q)
        if (kEmitter[in[q]]) return q;
      return n + 1000000;
    };
    long cur = next_emitter_from(0);
    while (cur < n) {
      long nxt = next_emitter_from(cur + 1);
      if (cur >= r && cur < n - r && (cur - prev <= r || nxt - cur <= r))
        out[static_cast<std::size_t>(cur - r)] = kStripX1[in[cur]];
      prev = cur;
      cur = nxt;
    }
  }

  Interval determined(std::span<const Letter> in) const override {
    const long n = static_cast<long>(in.size());
    const long r = kRadiusFpX1;
    std::vector<long> em;
    for (long q = 0; q < n; ++q)
      if (kEmitter[in[q]]) em.push_back(q);
    auto known = [&](long i) {
      if (!kEmitter[in[i]]) return true;
      if (i - r >= 0 && i + r < n) return true;
      auto it = std::lower_bound(em.begin(), em.end(), i);
      if (it != em.begin() && i - *(it - 1) <= r) return true;
      return it + 1 != em.end() && *(it + 1) - i <= r;
    };
    long lo = r, hi = n - 1 - r;
    if (hi < lo) {
      // No statically determined cell: take the longest run of known cells.
      long best_lo = 0, best_hi = -1;
      for (long i = 0; i < n;) {
        if (!known(i)) {
          ++i;
          continue;
        }
        long j = i;
        while (j + 1 < n && known(j + 1)) ++j;
        if (j - i > best_hi - best_lo) best_lo = i, best_hi = j;
        i = j + 1;
      }
      return {best_lo, best_hi};
    }
    while (lo - 1 >= 0 && known(lo - 1)) --lo;
    while (hi + 1 < n && known(hi + 1)) ++hi;
    return {lo, hi};
  }
};

}  // namespace

AlphabetPtr alphabet() {
  static const AlphabetPtr a = Alphabet::product({"01", "0RLABCD", "01"});
  return a;
}

RulePtr f1_rule() {
  static const RulePtr r = std::make_shared<F1>();
  return r;
}
RulePtr f2_rule() {
  static const RulePtr r = std::make_shared<F2>();
  return r;
}
RulePtr fp_x0_rule() {
  static const RulePtr r = std::make_shared<FpX0>();
  return r;
}
RulePtr fp_x1_rule() {
  static const RulePtr r = std::make_shared<FpX1>();
  return r;
}

RulePtr f3_rule() {
  static const RulePtr r = std::make_shared<F3>();
  return r;
}

CompositeAutomaton automaton() {
  return CompositeAutomaton(alphabet(), {fp_x1_rule(), fp_x0_rule(), f1_rule(), f2_rule(), f3_rule()},
                            "fe");
}

CompositeAutomaton stage_automaton(const std::string& name) {
  RulePtr r;
  if (name == "f1") r = f1_rule();
  else if (name == "f2") r = f2_rule();
  else if (name == "f3") r = f3_rule();
  else if (name == "fpx0") r = fp_x0_rule();
  else if (name == "fpx1") r = fp_x1_rule();
  else throw ConfigError("unknown stage: " + name);
  return CompositeAutomaton(alphabet(), {r}, "fe-" + name);
}

Word from_x1_text(const std::string& x1) {
  return from_layers(std::string(x1.size(), '0'), x1, std::string(x1.size(), '0'));
}

Word from_layers(const std::string& x0, const std::string& x1, const std::string& x2) {
  if (x0.size() != x1.size() || x1.size() != x2.size())
    throw ConfigError("layer strings differ in length");
  const auto& a = *alphabet();
  Word w;
  w.reserve(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    int c0 = a.parse_symbol(x0[i], 0), c1 = a.parse_symbol(x1[i], 1), c2 = a.parse_symbol(x2[i], 2);
    if (c0 < 0 || c1 < 0 || c2 < 0) throw ConfigError("bad layer letter at index " + std::to_string(i));
    w.push_back(pack(c0, c1, c2));
  }
  return w;
}

std::string layer_text(std::span<const Letter> w, int layer) {
  return alphabet()->render(w, static_cast<std::size_t>(layer));
}

}  // namespace calab::fe
