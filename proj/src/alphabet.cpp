#include "calab/alphabet.hpp"

#include "calab/error.hpp"

namespace calab {

Alphabet::Alphabet(std::vector<std::string> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ConfigError("alphabet needs at least one factor");
  std::size_t s = 1;
  for (const auto& f : factors_) {
    if (f.empty()) throw ConfigError("alphabet factor is empty");
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f.find(f[i]) != i) throw ConfigError("duplicate symbol in alphabet factor");
    stride_.push_back(s);
    s *= f.size();
  }
  if (s > 256) throw ConfigError("alphabet larger than 256 letters");
  size_ = s;
}

std::shared_ptr<const Alphabet> Alphabet::simple(const std::string& symbols) {
  return std::shared_ptr<const Alphabet>(new Alphabet({symbols}));
}

std::shared_ptr<const Alphabet> Alphabet::product(
    const std::vector<std::string>& factor_symbols) {
  return std::shared_ptr<const Alphabet>(new Alphabet(factor_symbols));
}

Letter Alphabet::pack(std::span<const int> components) const {
  if (components.size() != factors_.size())
    throw ConfigError("component count does not match alphabet");
  std::size_t code = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (components[k] < 0 || static_cast<std::size_t>(components[k]) >= factors_[k].size())
      throw ConfigError("component out of range");
    code += stride_[k] * static_cast<std::size_t>(components[k]);
  }
  return static_cast<Letter>(code);
}

int Alphabet::component(Letter a, std::size_t k) const {
  return static_cast<int>((a / stride_.at(k)) % factors_[k].size());
}

Letter Alphabet::with_component(Letter a, std::size_t k, int value) const {
  int old = component(a, k);
  return static_cast<Letter>(a + (value - old) * static_cast<int>(stride_[k]));
}

char Alphabet::symbol(Letter a, std::size_t k) const {
  if (a >= size_) throw ConfigError("letter out of range");
  return factors_.at(k)[static_cast<std::size_t>(component(a, k))];
}

int Alphabet::parse_symbol(char c, std::size_t k) const {
  auto pos = factors_.at(k).find(c);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

std::string Alphabet::render(std::span<const Letter> w, std::size_t k) const {
  std::string s;
  s.reserve(w.size());
  for (Letter a : w) s.push_back(symbol(a, k));
  return s;
}

Word Alphabet::parse(const std::string& text) const {
  if (factors_.size() != 1) throw ConfigError("parse needs a single-factor alphabet");
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    int v = parse_symbol(c, 0);
    if (v < 0) throw ConfigError(std::string("letter not in alphabet: '") + c + "'");
    w.push_back(static_cast<Letter>(v));
  }
  return w;
}

}  // namespace calab
