#include "calab/registry.hpp"

#include <sstream>

#include "calab/error.hpp"
#include "calab/fe.hpp"
#include "calab/fe_analysis.hpp"
#include "calab/rules.hpp"

namespace calab {

namespace {

std::pair<std::string, std::string> split_id(const std::string& id) {
  auto k = id.find(':');
  if (k == std::string::npos) return {id, ""};
  return {id.substr(0, k), id.substr(k + 1)};
}

int parse_arity(const std::string& arg) {
  if (arg.empty()) return 2;
  std::size_t used = 0;
  int k = 0;
  try {
    k = std::stoi(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != arg.size() || k < 1 || k > 10) throw ConfigError("alphabet size must be 1..10, got '" + arg + "'");
  return k;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

AlphabetPtr digit_alphabet(int k) {
  if (k < 1 || k > 10) throw ConfigError("alphabet size must be 1..10");
  return Alphabet::simple(std::string("0123456789").substr(0, static_cast<std::size_t>(k)));
}

CompositeAutomaton make_automaton(const std::string& id) {
  auto [base, arg] = split_id(id);
  if (base == "identity") return identity_automaton(digit_alphabet(parse_arity(arg)));
  if (base == "shift") return shift_automaton(digit_alphabet(parse_arity(arg)));
  if (base == "permutation") {
    int k = parse_arity(arg);
    std::vector<Letter> perm(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) perm[static_cast<std::size_t>(a)] = static_cast<Letter>((a + 1) % k);
    return permutation_automaton(digit_alphabet(k), perm);
  }
  if (!arg.empty()) throw ConfigError("automaton '" + base + "' takes no argument");
  if (base == "fe") return fe::automaton();
  if (base.rfind("fe-", 0) == 0) return fe::stage_automaton(base.substr(3));
  throw ConfigError("unknown automaton '" + id + "'");
}

MeasureSpec make_measure(const std::string& id) {
  auto [base, arg] = split_id(id);
  MeasureSpec m;
  if (base == "uniform") {
    m = MeasureSpec::uniform(digit_alphabet(parse_arity(arg)));
  } else if (base == "bernoulli") {
    std::vector<double> w;
    for (const auto& part : split(arg, ',')) {
      try {
        w.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw ConfigError("bad weight '" + part + "'");
      }
    }
    if (w.empty() || w.size() > 10) throw ConfigError("bernoulli needs 1..10 weights");
    m = MeasureSpec::bernoulli(digit_alphabet(static_cast<int>(w.size())), w);
  } else if (base == "atomic") {
    if (arg.empty()) throw ConfigError("atomic needs a period word");
    int k = 1;
    for (char c : arg) {
      if (c < '0' || c > '9') throw ConfigError("atomic period must be digits");
      k = std::max(k, c - '0' + 1);
    }
    k = std::max(k, 2);
    auto a = digit_alphabet(k);
    m = MeasureSpec::atomic(CyclicConfiguration(a, a->parse(arg)));
  } else if (base == "mu_I" && arg.empty()) {
    return fe::mu_i();
  } else if (base == "uniform-fe" && arg.empty()) {
    m = MeasureSpec::uniform(fe::alphabet());
  } else {
    throw ConfigError("unknown measure '" + id + "'");
  }
  m.label = id;
  return m;
}

std::vector<std::string> automaton_ids() {
  return {"identity[:k]", "shift[:k]", "permutation[:k]", "fe", "fe-f1", "fe-f2", "fe-f3", "fe-fpx0", "fe-fpx1"};
}

std::vector<std::string> measure_ids() {
  return {"uniform[:k]", "bernoulli:w0,w1,...", "atomic:<digits>", "mu_I", "uniform-fe"};
}

Word parse_word(const Alphabet& a, const std::string& text) {
  if (a.factor_count() == 1) return a.parse(text);
  auto parts = split(text, '/');
  if (parts.size() != a.factor_count())
    throw ConfigError("word '" + text + "' needs " + std::to_string(a.factor_count()) + " '/'-separated layers");
  std::size_t len = 0;
  for (const auto& p : parts) {
    if (!p.empty() && len && p.size() != len) throw ConfigError("layers of '" + text + "' differ in length");
    if (!p.empty()) len = p.size();
  }
  Word w(len, 0);
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (std::size_t i = 0; i < parts[k].size(); ++i) {
      int v = a.parse_symbol(parts[k][i], k);
      if (v < 0) throw ConfigError(std::string("letter '") + parts[k][i] + "' not in layer " + std::to_string(k));
      w[i] = a.with_component(w[i], k, v);
    }
  return w;
}

std::string format_word(const Alphabet& a, std::span<const Letter> w) {
  std::string s;
  for (std::size_t k = 0; k < a.factor_count(); ++k) {
    if (k) s += '/';
    s += a.render(w, k);
  }
  return s;
}

Cylinder parse_cylinder(const Alphabet& a, const std::string& text) {
  auto at = text.rfind('@');
  if (at == std::string::npos) throw ConfigError("cylinder '" + text + "' must be <word>@<position>");
  Cylinder c;
  c.word = parse_word(a, text.substr(0, at));
  if (c.word.empty()) throw ConfigError("empty cylinder word");
  try {
    std::size_t used = 0;
    c.position = std::stol(text.substr(at + 1), &used);
    if (used != text.size() - at - 1) throw ConfigError("bad position");
  } catch (const std::exception&) {
    throw ConfigError("bad cylinder position in '" + text + "'");
  }
  return c;
}

}  // namespace calab
