#include "calab/automaton.hpp"

#include <algorithm>
#include <sstream>

#include "calab/error.hpp"
#include "calab/rng.hpp"

namespace calab {

void LocalRule::apply_row(std::span<const Letter> in, std::span<Letter> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = apply(in.data() + j);
}

Interval LocalRule::determined(std::span<const Letter> in) const {
  return {left_reach(), static_cast<long>(in.size()) - 1 - right_reach()};
}

TableRule::TableRule(std::string name, std::size_t arity, int radius, std::vector<Letter> table)
    : name_(std::move(name)), arity_(arity), radius_(radius), table_(std::move(table)) {
  if (radius_ < 0) throw ConfigError("negative radius");
  std::size_t expect = 1;
  for (int k = 0; k < 2 * radius_ + 1; ++k) expect *= arity_;
  if (table_.size() != expect) throw ConfigError("rule table has wrong size");
  for (Letter a : table_)
    if (a >= arity_) throw ConfigError("rule table letter out of range");
}

Letter TableRule::apply(const Letter* nbhd) const {
  std::size_t idx = 0;
  for (int k = 0; k < 2 * radius_ + 1; ++k) idx = idx * arity_ + nbhd[k];
  return table_[idx];
}

void TableRule::apply_row(std::span<const Letter> in, std::span<Letter> out) const {
  if (out.empty()) return;
  const std::size_t width = static_cast<std::size_t>(2 * radius_ + 1);
  std::size_t top = 1;
  for (std::size_t k = 1; k < width; ++k) top *= arity_;
  std::size_t idx = 0;
  for (std::size_t k = 0; k + 1 < width; ++k) idx = idx * arity_ + in[k];
  for (std::size_t j = 0; j < out.size(); ++j) {
    idx = (idx % top) * arity_ + in[j + width - 1];
    out[j] = table_[idx];
  }
}

FunctionRule::FunctionRule(std::string name, int radius, Fn fn)
    : name_(std::move(name)), radius_(radius), fn_(std::move(fn)) {
  if (radius_ < 0) throw ConfigError("negative radius");
}

BlockMapAutomaton::BlockMapAutomaton(AlphabetPtr alphabet, RulePtr rule)
    : alphabet_(std::move(alphabet)), rule_(std::move(rule)) {
  if (!alphabet_ || !rule_) throw ConfigError("block map needs an alphabet and a rule");
  if (rule_->radius() < 0) throw ConfigError("negative radius");
}

BlockMapAutomaton BlockMapAutomaton::from_function(AlphabetPtr alphabet, int radius,
                                                   std::string name, FunctionRule::Fn fn) {
  if (radius < 0) throw ConfigError("negative radius");
  const std::size_t a = alphabet->size();
  const int width = 2 * radius + 1;
  std::size_t total = 1;
  bool small = true;
  for (int k = 0; k < width && small; ++k) {
    total *= a;
    small = total <= kMaxTableSize;
  }
  if (!small)
    return {alphabet, std::make_shared<FunctionRule>(std::move(name), radius, std::move(fn))};
  std::vector<Letter> table(total);
  Word nb(static_cast<std::size_t>(width), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t v = idx;
    for (int k = width - 1; k >= 0; --k) {
      nb[static_cast<std::size_t>(k)] = static_cast<Letter>(v % a);
      v /= a;
    }
    Letter out = fn(nb.data());
    if (out >= a) throw ConfigError("rule output outside alphabet");
    table[idx] = out;
  }
  return {alphabet, std::make_shared<TableRule>(std::move(name), a, radius, std::move(table))};
}

CompositeAutomaton::CompositeAutomaton(AlphabetPtr alphabet, std::vector<RulePtr> stages,
                                       std::string name)
    : alphabet_(std::move(alphabet)), stages_(std::move(stages)), name_(std::move(name)) {
  if (!alphabet_) throw ConfigError("automaton needs an alphabet");
  if (stages_.empty()) throw ConfigError("automaton needs at least one stage");
  for (const auto& s : stages_)
    if (!s) throw ConfigError("null stage");
  if (name_.empty()) name_ = provenance();
}

CompositeAutomaton::CompositeAutomaton(const BlockMapAutomaton& single)
    : CompositeAutomaton(single.alphabet(), {single.rule()}, single.rule()->name()) {}

int CompositeAutomaton::radius() const {
  int r = 0;
  for (const auto& s : stages_) r += s->radius();
  return r;
}

int CompositeAutomaton::left_reach() const {
  int r = 0;
  for (const auto& s : stages_) r += s->left_reach();
  return r;
}

int CompositeAutomaton::right_reach() const {
  int r = 0;
  for (const auto& s : stages_) r += s->right_reach();
  return r;
}

int CompositeAutomaton::typical_left_reach() const {
  int r = 0;
  for (const auto& s : stages_) r += s->typical_left_reach();
  return r;
}

int CompositeAutomaton::typical_right_reach() const {
  int r = 0;
  for (const auto& s : stages_) r += s->typical_right_reach();
  return r;
}

std::string CompositeAutomaton::provenance() const {
  std::string s;
  for (const auto& st : stages_) {
    if (!s.empty()) s += "+";
    s += st->provenance();
  }
  return s;
}

CompositeAutomaton compose(const CompositeAutomaton& f, const CompositeAutomaton& g,
                           std::string name) {
  if (!(*f.alphabet() == *g.alphabet())) throw ConfigError("compose: alphabets differ");
  std::vector<RulePtr> stages = g.stages();
  stages.insert(stages.end(), f.stages().begin(), f.stages().end());
  if (name.empty()) name = f.name() + " o " + g.name();
  return CompositeAutomaton(f.alphabet(), std::move(stages), std::move(name));
}

namespace {

Word step_period(const LocalRule& rule, const Word& period) {
  const long p = static_cast<long>(period.size());
  const long r = rule.radius();
  Word buf(static_cast<std::size_t>(p + 2 * r));
  for (long k = 0; k < p + 2 * r; ++k) buf[static_cast<std::size_t>(k)] = period[floor_mod(k - r, p)];
  Word out(period.size());
  rule.apply_row(buf, out);
  return out;
}

// Images of in[d.lo .. d.hi]; indices outside `in` read as filler.
Word apply_on(const LocalRule& rule, const Word& in, Interval d) {
  const long r = rule.radius();
  const long n = static_cast<long>(in.size());
  Word buf(static_cast<std::size_t>(d.size() + 2 * r), rule.filler());
  long first = d.lo - r;
  long a = std::max(0L, first), b = std::min(n - 1, d.hi + r);
  if (a <= b) std::copy(in.begin() + a, in.begin() + b + 1, buf.begin() + (a - first));
  Word out(static_cast<std::size_t>(d.size()));
  rule.apply_row(buf, out);
  return out;
}

}  // namespace

CyclicConfiguration step(const CompositeAutomaton& f, const CyclicConfiguration& x) {
  Word w = x.period();
  for (const auto& s : f.stages()) w = step_period(*s, w);
  return CyclicConfiguration(x.alphabet(), std::move(w), x.phase());
}

CyclicConfiguration step(const CompositeAutomaton& f, const CyclicConfiguration& x, long times) {
  if (times < 0) throw ConfigError("negative step count");
  CyclicConfiguration y = x;
  for (long t = 0; t < times; ++t) y = step(f, y);
  return y;
}

WindowConfiguration step_window(const CompositeAutomaton& f, const WindowConfiguration& x) {
  const Interval v = x.valid();
  const long r = f.radius();
  if (v.size() <= 2 * r) throw WindowError("window exhausted");
  Word cur = x.read(v.lo, v.hi);
  long lo = v.lo;
  for (const auto& s : f.stages()) {
    const long sr = s->radius();
    Interval d{sr, static_cast<long>(cur.size()) - 1 - sr};
    cur = apply_on(*s, cur, d);
    lo += sr;
  }
  long hi = lo + static_cast<long>(cur.size()) - 1;
  return WindowConfiguration(x.alphabet(), std::move(cur), lo, Interval{lo, hi});
}

WindowConfiguration advance_window(const CompositeAutomaton& f, const WindowConfiguration& x) {
  const Interval v = x.valid();
  if (v.size() == 0) throw WindowError("window exhausted");
  Word cur = x.read(v.lo, v.hi);
  long lo = v.lo;
  for (const auto& s : f.stages()) {
    Interval d = s->determined(cur);
    d.lo = std::max(0L, d.lo);
    d.hi = std::min(static_cast<long>(cur.size()) - 1, d.hi);
    if (d.size() == 0) throw WindowError("window exhausted");
    cur = apply_on(*s, cur, d);
    lo += d.lo;
  }
  long hi = lo + static_cast<long>(cur.size()) - 1;
  return WindowConfiguration(x.alphabet(), std::move(cur), lo, Interval{lo, hi});
}

Word apply_rule_row(const LocalRule& rule, std::span<const Letter> in) {
  const std::size_t w = static_cast<std::size_t>(2 * rule.radius());
  if (in.size() <= w) return {};
  Word out(in.size() - w);
  rule.apply_row(in, out);
  return out;
}

Word apply_rule_row_literal(const LocalRule& rule, std::span<const Letter> in) {
  const std::size_t w = static_cast<std::size_t>(2 * rule.radius());
  if (in.size() <= w) return {};
  Word out(in.size() - w);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = rule.apply(in.data() + j);
  return out;
}

namespace {

std::string describe(const CyclicConfiguration& x) {
  std::ostringstream os;
  os << "period " << x.length() << " phase " << x.phase() << ":";
  for (Letter a : x.period()) os << ' ' << static_cast<int>(a);
  return os.str();
}

void note(CheckReport& rep, std::string s) {
  ++rep.failures;
  if (rep.counterexamples.size() < 4) rep.counterexamples.push_back(std::move(s));
}

}  // namespace

CheckReport check_shift_commutation(const CompositeAutomaton& f,
                                    const std::vector<CyclicConfiguration>& configs,
                                    const std::vector<long>& shifts) {
  CheckReport rep;
  for (const auto& x : configs) {
    CyclicConfiguration fx = step(f, x);
    for (long k : shifts) {
      ++rep.tested;
      if (!(step(f, shift(x, k)) == shift(fx, k)))
        note(rep, "shift " + std::to_string(k) + " on " + describe(x));
    }
  }
  return rep;
}

CheckReport check_locality(const CompositeAutomaton& f,
                           const std::vector<CyclicConfiguration>& configs, int perturbations,
                           std::uint64_t seed) {
  CheckReport rep;
  const long r = f.radius();
  std::uint64_t idx = 0;
  for (const auto& x : configs) {
    const long p = x.length();
    if (p <= 2 * r + 1) throw ConfigError("locality check needs period > 2r+1");
    const Letter fx0 = step(f, x).cell(0);
    Rng rng(seed, idx++);
    for (int k = 0; k < perturbations; ++k) {
      ++rep.tested;
      Word w = x.period();
      int changes = 1 + static_cast<int>(rng.below(8));
      for (int c = 0; c < changes; ++c) {
        // Coordinate in (r, p - r): its residue class stays away from [-r, r].
        long j = r + 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(p - 2 * r - 1)));
        auto q = static_cast<std::size_t>(floor_mod(j + x.phase(), p));
        w[q] = static_cast<Letter>(rng.below(x.alphabet()->size()));
      }
      CyclicConfiguration y(x.alphabet(), std::move(w), x.phase());
      if (step(f, y).cell(0) != fx0) note(rep, "perturbation changed cell 0 on " + describe(x));
    }
  }
  return rep;
}

CheckReport check_kernel(const LocalRule& rule, const std::vector<Word>& rows) {
  CheckReport rep;
  for (const auto& row : rows) {
    ++rep.tested;
    if (apply_rule_row(rule, row) != apply_rule_row_literal(rule, row))
      note(rep, rule.name() + " kernel differs from literal rule on a row of length " +
                    std::to_string(row.size()));
  }
  return rep;
}

}  // namespace calab
