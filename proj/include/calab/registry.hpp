#pragma once

#include <string>
#include <vector>

#include "calab/automaton.hpp"
#include "calab/measures.hpp"

namespace calab {

// Simple alphabet on the first k characters of "0123456789".
AlphabetPtr digit_alphabet(int k);

// identity[:k], shift[:k], permutation[:k] (a -> a+1 mod k), fe, fe-f1,
// fe-f2, fe-f3, fe-fpx0, fe-fpx1. k defaults to 2. Throws ConfigError.
CompositeAutomaton make_automaton(const std::string& id);

// uniform[:k], bernoulli:w0,w1,..., atomic:<digits>, mu_I, uniform-fe.
MeasureSpec make_measure(const std::string& id);

std::vector<std::string> automaton_ids();
std::vector<std::string> measure_ids();

// One string per alphabet factor, separated by '/'; an empty part means all
// letters 0 on that factor. Simple alphabets take plain text.
Word parse_word(const Alphabet& a, const std::string& text);
std::string format_word(const Alphabet& a, std::span<const Letter> w);

// "<word>@<position>", e.g. "01@-1" or "/0R0/@0".
Cylinder parse_cylinder(const Alphabet& a, const std::string& text);

}  // namespace calab
