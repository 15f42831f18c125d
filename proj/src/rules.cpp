#include "calab/rules.hpp"

#include <algorithm>

#include "calab/error.hpp"

namespace calab {

BlockMapAutomaton identity_automaton(AlphabetPtr a) {
  return BlockMapAutomaton::from_function(a, 0, "identity", [](const Letter* nb) { return nb[0]; });
}

BlockMapAutomaton shift_automaton(AlphabetPtr a) {
  return BlockMapAutomaton::from_function(a, 1, "shift", [](const Letter* nb) { return nb[2]; });
}

BlockMapAutomaton permutation_automaton(AlphabetPtr a, std::vector<Letter> perm) {
  if (perm.size() != a->size()) throw ConfigError("permutation has wrong length");
  std::vector<Letter> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw ConfigError("not a permutation");
  return BlockMapAutomaton::from_function(
      a, 0, "permutation", [perm](const Letter* nb) { return perm[nb[0]]; });
}

}  // namespace calab
