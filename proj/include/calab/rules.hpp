#pragma once

#include "calab/automaton.hpp"

namespace calab {

BlockMapAutomaton identity_automaton(AlphabetPtr a);
// F(x)_i = x_{i+1}.
BlockMapAutomaton shift_automaton(AlphabetPtr a);
// F(x)_i = perm[x_i]; perm must be a bijection of the alphabet.
BlockMapAutomaton permutation_automaton(AlphabetPtr a, std::vector<Letter> perm);

}  // namespace calab
