#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "calab/estimators.hpp"

namespace calab {

struct EntropyOptions {
  long p = 0;         // rows are F^i(x)(-p, p)
  long k_max = 8;     // longest block, in rows
  long burn_in = 0;   // first row of every block
  // Flag the estimate when the longest blocks take more than this fraction of N distinct values.
  double undersampled_fraction = 0.2;
};

struct EntropyEstimate {
  // Entry k-1: Miller-Madow entropy (nats) of blocks of k rows.
  std::vector<double> block_entropy;
  std::vector<double> plugin_entropy;
  std::vector<long> distinct;
  double rate = 0.0;  // least-squares slope of block_entropy against k
  long horizon = 0;   // burn_in + k_max
  long samples = 0;
  bool undersampled = false;
  std::string correction = "miller-madow";
  nlohmann::json to_json() const;
};

// Entropy of the column factor from one block of k_max rows per sample,
// starting at row burn_in of the orbit of x ~ mu.
EntropyEstimate estimate_column_entropy(const CompositeAutomaton& f, const MeasureSpec& mu,
                                        const EntropyOptions& eo, const SamplingOptions& opt);

// Same statistics from blocks given directly: blocks[s][k] is row k of sample s.
EntropyEstimate entropy_from_blocks(const std::vector<std::vector<Word>>& blocks,
                                    double undersampled_fraction = 0.2);

}  // namespace calab
