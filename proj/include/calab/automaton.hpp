#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "calab/configuration.hpp"

namespace calab {

// Local rule f of radius r: F(x)_i = f(x_{i-r} .. x_{i+r}).
class LocalRule {
 public:
  virtual ~LocalRule() = default;

  virtual std::string name() const = 0;
  virtual std::string version() const { return "1"; }
  std::string provenance() const { return name() + "@" + version(); }

  virtual int radius() const = 0;
  // Offsets actually read lie in [-left_reach, right_reach].
  virtual int left_reach() const { return radius(); }
  virtual int right_reach() const { return radius(); }
  // Per-step reach that is usually enough once determined() is applied. Used
  // to size windows; callers fall back to the static reach when it is not.
  virtual int typical_left_reach() const { return left_reach(); }
  virtual int typical_right_reach() const { return right_reach(); }

  // nbhd points at 2r+1 letters, nbhd[r] is the centre.
  virtual Letter apply(const Letter* nbhd) const = 0;
  // out[j] = f(in[j .. j+2r]); out.size() == in.size() - 2r.
  virtual void apply_row(std::span<const Letter> in, std::span<Letter> out) const;

  // `in` holds known cells only. Returns the index range (into `in`) of cells
  // whose image does not depend on anything outside `in`. Cells outside the
  // known range are read as filler() when those images are computed.
  virtual Interval determined(std::span<const Letter> in) const;
  virtual Letter filler() const { return 0; }
};

using RulePtr = std::shared_ptr<const LocalRule>;

// Rule given as a lookup table over all (2r+1)-blocks, index base |A|,
// leftmost letter most significant.
class TableRule final : public LocalRule {
 public:
  TableRule(std::string name, std::size_t arity, int radius, std::vector<Letter> table);

  std::string name() const override { return name_; }
  int radius() const override { return radius_; }
  Letter apply(const Letter* nbhd) const override;
  void apply_row(std::span<const Letter> in, std::span<Letter> out) const override;

  const std::vector<Letter>& table() const { return table_; }

 private:
  std::string name_;
  std::size_t arity_;
  int radius_;
  std::vector<Letter> table_;
};

// Rule evaluated by a callable on each neighbourhood.
class FunctionRule final : public LocalRule {
 public:
  using Fn = std::function<Letter(const Letter*)>;
  FunctionRule(std::string name, int radius, Fn fn);

  std::string name() const override { return name_; }
  int radius() const override { return radius_; }
  Letter apply(const Letter* nbhd) const override { return fn_(nbhd); }

 private:
  std::string name_;
  int radius_;
  Fn fn_;
};

inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 24;

class BlockMapAutomaton {
 public:
  BlockMapAutomaton(AlphabetPtr alphabet, RulePtr rule);
  // Compiles to a TableRule when |A|^(2r+1) <= 2^24.
  static BlockMapAutomaton from_function(AlphabetPtr alphabet, int radius, std::string name,
                                         FunctionRule::Fn fn);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const RulePtr& rule() const { return rule_; }
  int radius() const { return rule_->radius(); }

 private:
  AlphabetPtr alphabet_;
  RulePtr rule_;
};

// Stages applied first to last, each over whole rows.
class CompositeAutomaton {
 public:
  CompositeAutomaton(AlphabetPtr alphabet, std::vector<RulePtr> stages, std::string name = "");
  CompositeAutomaton(const BlockMapAutomaton& single);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<RulePtr>& stages() const { return stages_; }
  const std::string& name() const { return name_; }
  // Sum of stage radii.
  int radius() const;
  int left_reach() const;
  int right_reach() const;
  int typical_left_reach() const;
  int typical_right_reach() const;
  // Provenance strings of all stages joined with '+'.
  std::string provenance() const;

 private:
  AlphabetPtr alphabet_;
  std::vector<RulePtr> stages_;
  std::string name_;
};

// F o G: G is applied first.
CompositeAutomaton compose(const CompositeAutomaton& f, const CompositeAutomaton& g,
                           std::string name = "");

CyclicConfiguration step(const CompositeAutomaton& f, const CyclicConfiguration& x);
CyclicConfiguration step(const CompositeAutomaton& f, const CyclicConfiguration& x, long times);

// Static light cone: valid shrinks by r on each side. Throws WindowError when
// nothing would remain.
WindowConfiguration step_window(const CompositeAutomaton& f, const WindowConfiguration& x);

// Exact window step that keeps every cell whose image is determined by the
// known cells (per-stage reach and LocalRule::determined). The valid range is
// always a superset of step_window's.
WindowConfiguration advance_window(const CompositeAutomaton& f, const WindowConfiguration& x);

// One rule on a row with explicit padding, for tests and tools.
Word apply_rule_row(const LocalRule& rule, std::span<const Letter> in);
Word apply_rule_row_literal(const LocalRule& rule, std::span<const Letter> in);

struct CheckReport {
  long tested = 0;
  long failures = 0;
  std::vector<std::string> counterexamples;  // at most a few
};

// F o sigma^k == sigma^k o F on the given configurations for every k in `shifts`.
CheckReport check_shift_commutation(const CompositeAutomaton& f,
                                    const std::vector<CyclicConfiguration>& configs,
                                    const std::vector<long>& shifts);

// For each configuration, `perturbations` random changes of cells at distance
// > r from 0 must leave F(x)_0 unchanged. Periods must exceed 2r+1.
CheckReport check_locality(const CompositeAutomaton& f,
                           const std::vector<CyclicConfiguration>& configs, int perturbations,
                           std::uint64_t seed);

// Fast kernel against literal per-cell evaluation on the given rows.
CheckReport check_kernel(const LocalRule& rule, const std::vector<Word>& rows);

}  // namespace calab
