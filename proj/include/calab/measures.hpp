#pragma once

#include <memory>
#include <string>
#include <vector>

#include "calab/configuration.hpp"
#include "calab/rng.hpp"

namespace calab {

// Shift-invariant product measure: Bernoulli, a point mass on a periodic
// configuration, or a product over the factors of a product alphabet.
struct MeasureSpec {
  enum class Kind { bernoulli, atomic, product };

  Kind kind = Kind::bernoulli;
  AlphabetPtr alphabet;
  std::vector<double> weights;                      // bernoulli
  std::shared_ptr<const CyclicConfiguration> atom;  // atomic
  std::vector<MeasureSpec> factors;                 // product, one per alphabet factor
  std::string label;

  static MeasureSpec bernoulli(AlphabetPtr a, std::vector<double> weights);
  static MeasureSpec uniform(AlphabetPtr a);
  static MeasureSpec atomic(const CyclicConfiguration& x);
  // Factor k is a measure on the simple alphabet of factor k's symbols.
  static MeasureSpec product(AlphabetPtr a, std::vector<MeasureSpec> factors);

  // mu([a]_position); position matters only for atomic parts.
  double letter_probability(long position, Letter a) const;
};

// Window on `range` drawn from mu; cell i depends only on (stream, i).
WindowConfiguration sample_window(const MeasureSpec& mu, Interval range, const CellStream& s);

// Same, with the cells of `c` forced; the remaining cells keep their
// unconditioned values. Valid for product measures only.
WindowConfiguration sample_window_given(const MeasureSpec& mu, Interval range,
                                        const CellStream& s, const Cylinder& c);

double cylinder_probability(const MeasureSpec& mu, const Cylinder& c);
// Natural log; -inf for probability 0.
double log_cylinder_probability(const MeasureSpec& mu, const Cylinder& c);

}  // namespace calab
