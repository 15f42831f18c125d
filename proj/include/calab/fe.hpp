#pragma once

#include <string>

#include "calab/automaton.hpp"

// The three-layer counter automaton over X0 x X1 x X2.
//   X0 {0,1}: freezing front
//   X1 {0,R,L,E0,E1,E2,E3}: carriers R/L bouncing between emitters E*
//   X2 {0,1}: trains of 1s emitted while an emitter is in state E0
namespace calab::fe {

enum X1 : int { Z = 0, R = 1, L = 2, E0 = 3, E1 = 4, E2 = 5, E3 = 6 };

constexpr bool is_emitter(int v) { return v >= E0; }
constexpr bool is_carrier(int v) { return v == R || v == L; }
// E_i -> E_{i+1 mod 4}
constexpr int next_emitter(int v) { return E0 + ((v - E0 + 1) & 3); }

constexpr Letter pack(int x0, int x1, int x2) { return static_cast<Letter>(x0 + 2 * x1 + 14 * x2); }
constexpr int x0_of(Letter c) { return c & 1; }
constexpr int x1_of(Letter c) { return (c % 14) >> 1; }
constexpr int x2_of(Letter c) { return c >= 14 ? 1 : 0; }
constexpr Letter with_x1(Letter c, int x1) { return pack(x0_of(c), x1, x2_of(c)); }

inline constexpr int kLetters = 28;
inline constexpr int kRadiusF1 = 3;
inline constexpr int kRadiusF2 = 2;
inline constexpr int kRadiusF3 = 11;
inline constexpr int kRadiusFpX0 = 10;
inline constexpr int kRadiusFpX1 = 152;
inline constexpr int kRadius = kRadiusF1 + kRadiusF2 + kRadiusF3 + kRadiusFpX0 + kRadiusFpX1;
// Two surviving emitters are more than this many cells apart.
inline constexpr int kMinGap = 152;
// Carrier speed in cells per step.
inline constexpr int kCarrierSpeed = 10;

// Product alphabet {"01", "0RLABCD", "01"}; A..D stand for E0..E3.
AlphabetPtr alphabet();

RulePtr f1_rule();     // X2: train moves right, loses 2 cells per step
RulePtr f2_rule();     // X2: E0 emits 1s at and right of itself
RulePtr f3_rule();     // X1: carrier motion, reflection, emitter counting
RulePtr fp_x0_rule();  // X0 front; freezes emitters it reaches
RulePtr fp_x1_rule();  // X1: removes emitters closer than kMinGap + 1

// F3 o F2 o F1 o Fp^X0 o Fp^X1.
CompositeAutomaton automaton();
CompositeAutomaton stage_automaton(const std::string& name);  // f1 f2 f3 fpx0 fpx1

// Text helpers. X1 uses "0RLABCD"; X0 and X2 use "01".
Word from_x1_text(const std::string& x1);
Word from_layers(const std::string& x0, const std::string& x1, const std::string& x2);
std::string layer_text(std::span<const Letter> w, int layer);

}  // namespace calab::fe
