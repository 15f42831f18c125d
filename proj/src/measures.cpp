#include "calab/measures.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "calab/error.hpp"

namespace calab {

MeasureSpec MeasureSpec::bernoulli(AlphabetPtr a, std::vector<double> weights) {
  if (!a) throw ConfigError("measure needs an alphabet");
  if (weights.size() != a->size()) throw ConfigError("weight count does not match alphabet");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw ConfigError("weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("weights must sum to 1");
  MeasureSpec m;
  m.kind = Kind::bernoulli;
  m.alphabet = std::move(a);
  m.weights = std::move(weights);
  m.label = "bernoulli";
  return m;
}

MeasureSpec MeasureSpec::uniform(AlphabetPtr a) {
  if (!a) throw ConfigError("measure needs an alphabet");
  auto m = bernoulli(a, std::vector<double>(a->size(), 1.0 / static_cast<double>(a->size())));
  m.label = "uniform";
  return m;
}

MeasureSpec MeasureSpec::atomic(const CyclicConfiguration& x) {
  MeasureSpec m;
  m.kind = Kind::atomic;
  m.alphabet = x.alphabet();
  m.atom = std::make_shared<CyclicConfiguration>(x);
  m.label = "atomic";
  return m;
}

MeasureSpec MeasureSpec::product(AlphabetPtr a, std::vector<MeasureSpec> factors) {
  if (!a) throw ConfigError("measure needs an alphabet");
  if (factors.size() != a->factor_count()) throw ConfigError("one factor measure per factor");
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].kind == Kind::product) throw ConfigError("nested product measure");
    if (factors[k].alphabet->size() != a->factor_size(k))
      throw ConfigError("factor measure has the wrong alphabet size");
  }
  MeasureSpec m;
  m.kind = Kind::product;
  m.alphabet = std::move(a);
  m.factors = std::move(factors);
  m.label = "product";
  return m;
}

double MeasureSpec::letter_probability(long position, Letter a) const {
  switch (kind) {
    case Kind::bernoulli:
      return weights.at(a);
    case Kind::atomic:
      return atom->cell(position) == a ? 1.0 : 0.0;
    case Kind::product: {
      double p = 1.0;
      for (std::size_t k = 0; k < factors.size(); ++k)
        p *= factors[k].letter_probability(position, static_cast<Letter>(alphabet->component(a, k)));
      return p;
    }
  }
  return 0.0;
}

namespace {

Letter draw(const MeasureSpec& mu, long i, const CellStream& s, unsigned lane) {
  if (mu.kind == MeasureSpec::Kind::atomic) return mu.atom->cell(i);
  double u = s.uniform(i, lane);
  double acc = 0;
  const std::size_t n = mu.weights.size();
  for (std::size_t a = 0; a + 1 < n; ++a) {
    acc += mu.weights[a];
    if (u < acc) return static_cast<Letter>(a);
  }
  // Last letter with positive weight.
  for (std::size_t a = n; a-- > 0;)
    if (mu.weights[a] > 0) return static_cast<Letter>(a);
  return 0;
}

Letter draw_cell(const MeasureSpec& mu, long i, const CellStream& s) {
  if (mu.kind != MeasureSpec::Kind::product) return draw(mu, i, s, 0);
  int comps[8];
  for (std::size_t k = 0; k < mu.factors.size(); ++k)
    comps[k] = draw(mu.factors[k], i, s, static_cast<unsigned>(k));
  return mu.alphabet->pack(std::span<const int>(comps, mu.factors.size()));
}

}  // namespace

WindowConfiguration sample_window(const MeasureSpec& mu, Interval range, const CellStream& s) {
  if (range.size() <= 0) throw ConfigError("empty sampling range");
  if (mu.kind == MeasureSpec::Kind::product && mu.factors.size() > 8)
    throw ConfigError("too many factors");
  Word cells(static_cast<std::size_t>(range.size()));
  for (long i = range.lo; i <= range.hi; ++i)
    cells[static_cast<std::size_t>(i - range.lo)] = draw_cell(mu, i, s);
  return WindowConfiguration(mu.alphabet, std::move(cells), range.lo, range);
}

WindowConfiguration sample_window_given(const MeasureSpec& mu, Interval range,
                                        const CellStream& s, const Cylinder& c) {
  WindowConfiguration w = sample_window(mu, range, s);
  for (std::size_t k = 0; k < c.word.size(); ++k) {
    long i = c.position + static_cast<long>(k);
    if (range.contains(i)) w.set(i, c.word[k]);
  }
  return w;
}

double log_cylinder_probability(const MeasureSpec& mu, const Cylinder& c) {
  double lp = 0;
  for (std::size_t k = 0; k < c.word.size(); ++k) {
    double p = mu.letter_probability(c.position + static_cast<long>(k), c.word[k]);
    if (p <= 0) return -std::numeric_limits<double>::infinity();
    lp += std::log(p);
  }
  return lp;
}

double cylinder_probability(const MeasureSpec& mu, const Cylinder& c) {
  return std::exp(log_cylinder_probability(mu, c));
}

}  // namespace calab
