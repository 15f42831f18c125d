#include "calab/entropy.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

#include "calab/error.hpp"

namespace calab {

nlohmann::json EntropyEstimate::to_json() const {
  return {{"block_entropy", block_entropy}, {"plugin_entropy", plugin_entropy},
          {"distinct", distinct},           {"rate", rate},
          {"horizon", horizon},             {"samples", samples},
          {"undersampled", undersampled},   {"correction", correction},
          {"code_version", kCodeVersion}};
}

EntropyEstimate entropy_from_blocks(const std::vector<std::vector<Word>>& blocks,
                                    double undersampled_fraction) {
  if (blocks.empty() || blocks.front().empty()) throw ConfigError("no blocks");
  const std::size_t N = blocks.size(), K = blocks.front().size();
  std::map<Word, std::uint32_t> rows;
  std::vector<std::uint32_t> id(N, 0);  // block id after k rows, per sample
  EntropyEstimate out;
  out.samples = static_cast<long>(N);
  const double n = static_cast<double>(N);
  for (std::size_t k = 0; k < K; ++k) {
    std::unordered_map<std::uint64_t, std::uint32_t> next;
    std::vector<long> count;
    for (std::size_t s = 0; s < N; ++s) {
      if (blocks[s].size() != K) throw ConfigError("blocks differ in length");
      auto r = rows.emplace(blocks[s][k], static_cast<std::uint32_t>(rows.size())).first->second;
      std::uint64_t key = (static_cast<std::uint64_t>(k ? id[s] : 0) << 32) | r;
      auto [it, fresh] = next.emplace(key, static_cast<std::uint32_t>(count.size()));
      if (fresh) count.push_back(0);
      ++count[it->second];
      id[s] = it->second;
    }
    double h = 0.0;
    for (long c : count) {
      double q = static_cast<double>(c) / n;
      h -= q * std::log(q);
    }
    out.plugin_entropy.push_back(h);
    out.block_entropy.push_back(h + static_cast<double>(count.size() - 1) / (2.0 * n));
    out.distinct.push_back(static_cast<long>(count.size()));
  }
  if (K >= 2) {
    double sk = 0, sh = 0, skk = 0, skh = 0;
    for (std::size_t k = 0; k < K; ++k) {
      double x = static_cast<double>(k + 1), y = out.block_entropy[k];
      sk += x;
      sh += y;
      skk += x * x;
      skh += x * y;
    }
    const double m = static_cast<double>(K);
    out.rate = (m * skh - sk * sh) / (m * skk - sk * sk);
  } else {
    out.rate = out.block_entropy[0];
  }
  out.undersampled = static_cast<double>(out.distinct.back()) > undersampled_fraction * n;
  return out;
}

EntropyEstimate estimate_column_entropy(const CompositeAutomaton& f, const MeasureSpec& mu,
                                        const EntropyOptions& eo, const SamplingOptions& opt) {
  if (eo.p < 0 || eo.k_max < 1 || eo.burn_in < 0) throw ConfigError("invalid entropy parameters");
  if (opt.samples <= 0) throw ConfigError("sample count must be positive");
  std::vector<std::vector<Word>> blocks(static_cast<std::size_t>(opt.samples));
  const long last = eo.burn_in + eo.k_max - 1;
  parallel_for(opt.samples, opt.workers, [&](long s) {
    auto& b = blocks[static_cast<std::size_t>(s)];
    run_sample(f, mu, CellStream(opt.seed, static_cast<std::uint64_t>(s)), {-eo.p, eo.p}, last,
               [&](long t, const WindowConfiguration& x) {
                 if (t == 0) b.clear();
                 if (t >= eo.burn_in) b.push_back(x.read(-eo.p, eo.p));
                 return true;
               },
               nullptr, opt.window_budget);
  });
  EntropyEstimate out = entropy_from_blocks(blocks, eo.undersampled_fraction);
  out.horizon = last + 1;
  return out;
}

}  // namespace calab
