#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "calab/estimators.hpp"

namespace calab {

// Rows F^i(x)(-n, n) for i < horizon.
struct ColumnTrace {
  long n = 0;
  long horizon = 0;
  std::vector<Word> rows;
  bool operator==(const ColumnTrace&) const = default;
};

// Throws WindowError when x does not determine all rows.
ColumnTrace column_trace(const CompositeAutomaton& f, const WindowConfiguration& x, long n, long T);

// First i < rows.size() where the row of y differs, or rows.size() if none.
// Steps y with advance_window; throws WindowError if [-n, n] is lost.
long first_divergence(const CompositeAutomaton& f, WindowConfiguration y, const ColumnTrace& anchor);

struct BnOptions {
  // Sample y given C_n(x) and multiply the match frequency by mu(C_n(x)).
  bool conditioned = false;
};

struct BnEstimate {
  // One report per horizon, same samples for all.
  std::vector<EstimateReport> reports;
  // Per sample: first row where its trace leaves the anchor's (max horizon if never).
  std::vector<long> divergence;
  double cylinder_probability = 1.0;  // mu(C_n(x)) when conditioned
};

// mu{y : column_trace(y, n, T) == column_trace(x, n, T)} for each T in
// `horizons`. The anchor must determine its trace up to the largest horizon.
BnEstimate estimate_bn_measure(const CompositeAutomaton& f, const MeasureSpec& mu,
                               const WindowConfiguration& anchor, long n,
                               const std::vector<long>& horizons, const SamplingOptions& opt,
                               BnOptions bn = {});

enum class Verdict { mu_almost_equicontinuous, almost_expansive_indicated, inconclusive };
std::string to_string(Verdict v);

struct AnchorEvidence {
  long anchor = 0;
  long n = 0;
  std::vector<long> horizons;
  std::vector<double> estimates;
  std::vector<double> stderrs;
  bool plateau = false;
  bool decay = false;
};

struct Classification {
  Verdict verdict = Verdict::inconclusive;
  std::vector<AnchorEvidence> evidence;
  nlohmann::json to_json() const;
};

// Positive plateau: the last two estimates within 2 pooled stderr of each
// other and the last one more than 3 stderr above 0. Decay: at least three
// horizons, each step down by more than 2 pooled stderr. Needs one anchor with
// a plateau for the equicontinuous verdict, all anchors decaying for the
// expansive one.
bool positive_plateau(const std::vector<double>& est, const std::vector<double>& se);
bool decaying(const std::vector<double>& est, const std::vector<double>& se);

Classification classify(const CompositeAutomaton& f, const MeasureSpec& mu,
                        const std::vector<WindowConfiguration>& anchors, long n,
                        const std::vector<long>& horizons, const SamplingOptions& opt,
                        BnOptions bn = {});

struct BlockingWord {
  Word word;
  long offset = 0;  // coordinate of word[0]
  bool exhaustive = false;
  long fillings_tested = 0;
};

struct BlockingSearchOptions {
  long n = 0;                 // half-width of the watched column
  long fill_budget = 64;      // sampled fillings per word when not exhaustive
  long max_words = 2000;      // candidate words over all lengths
  long exhaustive_limit = 1L << 20;
  std::uint64_t seed = 1;
};

// Words of length 2m+1 >= 2n+1, centred on 0, up to max_len, shortest first.
// A word is returned when every tested filling of the dependence collar gives
// the same column trace through T.
std::optional<BlockingWord> find_blocking_word(const CompositeAutomaton& f, long max_len, long T,
                                               const BlockingSearchOptions& opt);

enum class Perturbation { random_cells, fe_train };

struct SensitivityOptions {
  long m = 8;        // y agrees with x on [-m, m]
  long n = 0;        // watched half-width, at most m
  long horizon = 64;
  long samples = 200;
  long attempts = 16;
  Perturbation strategy = Perturbation::random_cells;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct SensitivityReport {
  long samples = 0;
  long witnesses = 0;
  std::vector<long> divergence_times;  // per sample, -1 without a witness
  double fraction() const { return samples ? static_cast<double>(witnesses) / samples : 0.0; }
  nlohmann::json to_json() const;
};

// For each sampled x, looks for y in C_m(x) whose trace on [-n, n] leaves x's
// before `horizon`. random_cells changes one cell outside [-m, m] per attempt;
// fe_train writes an X2 train that reaches 0 at time m + 1 + attempt.
SensitivityReport sensitivity_probe(const CompositeAutomaton& f, const WindowSampler& sampler,
                                    const SensitivityOptions& opt);

}  // namespace calab
