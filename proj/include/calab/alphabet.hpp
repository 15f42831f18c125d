#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace calab {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

// Finite alphabet, possibly a product of factor alphabets. Product letters are
// packed mixed-radix with factor 0 varying fastest.
class Alphabet {
 public:
  // One factor; each char of `symbols` is one letter.
  static std::shared_ptr<const Alphabet> simple(const std::string& symbols);
  static std::shared_ptr<const Alphabet> product(
      const std::vector<std::string>& factor_symbols);

  std::size_t size() const { return size_; }
  std::size_t factor_count() const { return factors_.size(); }
  std::size_t factor_size(std::size_t k) const { return factors_.at(k).size(); }
  const std::string& factor_symbols(std::size_t k) const { return factors_.at(k); }

  Letter pack(std::span<const int> components) const;
  int component(Letter a, std::size_t k) const;
  // Replace component k of `a`.
  Letter with_component(Letter a, std::size_t k, int value) const;

  char symbol(Letter a, std::size_t k = 0) const;
  // Index of `c` in factor k, or -1.
  int parse_symbol(char c, std::size_t k = 0) const;

  // Text for a word on one factor.
  std::string render(std::span<const Letter> w, std::size_t k = 0) const;
  // Parse a word for a simple alphabet. Throws ConfigError.
  Word parse(const std::string& text) const;

  bool operator==(const Alphabet& other) const { return factors_ == other.factors_; }

 private:
  explicit Alphabet(std::vector<std::string> factors);

  std::vector<std::string> factors_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

}  // namespace calab
