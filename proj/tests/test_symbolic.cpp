#include <doctest.h>

#include <cmath>

#include "calab/configuration.hpp"
#include "calab/error.hpp"
#include "calab/measures.hpp"
#include "calab/registry.hpp"

using namespace calab;

namespace {

AlphabetPtr ab() { return Alphabet::simple("ab"); }

CyclicConfiguration cyc(const std::string& w, long phase = 0) { return {ab(), ab()->parse(w), phase}; }

// Brute-force d(x, y) over one joint period.
double naive_distance(const CyclicConfiguration& x, const CyclicConfiguration& y) {
  const long span = x.length() * y.length();
  for (long j = 0; j <= span; ++j)
    if (x.cell(j) != y.cell(j) || x.cell(-j) != y.cell(-j)) return std::ldexp(1.0, static_cast<int>(-j));
  return 0.0;
}

}  // namespace

TEST_CASE("product alphabet packs factor 0 fastest") {
  auto a = Alphabet::product({"01", "0RLABCD", "01"});
  CHECK(a->size() == 28);
  const int comps[] = {1, 4, 1};
  const Letter c = a->pack(comps);
  CHECK(c == 1 + 2 * 4 + 14 * 1);
  CHECK(a->component(c, 1) == 4);
  CHECK(a->symbol(c, 1) == 'B');
  CHECK(a->with_component(c, 2, 0) == 9);
  CHECK_THROWS_AS(Alphabet::simple("ab")->parse("abc"), ConfigError);
}

TEST_CASE("shift composes additively") {
  const auto x = cyc("aababbbab");
  for (long j : {-5L, -1L, 0L, 2L, 7L})
    for (long k : {-3L, 0L, 4L, 11L}) {
      CHECK(shift(shift(x, j), k) == shift(x, j + k));
      CHECK(shift(x, j).cell(0) == x.cell(j));
    }
  CHECK(shift(x, x.length()) == x);
}

TEST_CASE("rotations of a period describe the same point") {
  CHECK(cyc("aab", 1) == cyc("aba"));
  CHECK(cyc("ab") == cyc("abab"));
  CHECK_FALSE(cyc("ab") == cyc("ba"));
  CHECK(cyc("abab").minimal_period() == 2);
  CHECK(cyc("bba").canonical_rotation() == cyc("abb").canonical_rotation());
}

TEST_CASE("distance agrees with a brute-force search") {
  const std::vector<std::string> words{"a", "ab", "aab", "abb", "abab", "aabb", "babaa"};
  for (const auto& u : words)
    for (const auto& v : words)
      for (long ph : {0L, 1L, 3L}) {
        const auto x = cyc(u), y = cyc(v, ph);
        CHECK(distance(x, y).value == doctest::Approx(naive_distance(x, y)));
      }
  Distance d = distance(cyc("aaaaaaab"), cyc("a"));
  CHECK(d.exponent == 1);
  CHECK(d.value == 0.5);
}

TEST_CASE("window distance reports an upper bound when no difference is seen") {
  const auto x = WindowConfiguration::from_cyclic(cyc("ab"), -4, 4);
  const auto y = WindowConfiguration::from_cyclic(cyc("ab"), -6, 3);
  Distance d = distance(x, y);
  CHECK(d.upper_bound_only);
  CHECK(d.checked_radius == 3);
}

TEST_CASE("cylinders of larger n are nested") {
  const auto x = cyc("abbabaab", 3);
  const auto y = cyc("abbabbab", 3);
  for (long n = 0; n < 6; ++n) {
    const Cylinder big = cylinder_of(x, n + 1), small = cylinder_of(x, n);
    CHECK(big.contains(x));
    if (big.contains(y)) CHECK(small.contains(y));
  }
  const Cylinder c = cylinder_of(x, 2);
  CHECK(c.position == -2);
  CHECK(c.word.size() == 5);
  CHECK(c.shifted(3).contains(shift(x, -3)));
}

TEST_CASE("window reads outside the valid range throw") {
  const auto w = WindowConfiguration::from_cyclic(cyc("ab"), -2, 2);
  CHECK(w.cell(2) == cyc("ab").cell(2));
  CHECK_THROWS_AS(w.cell(3), WindowError);
  CHECK_THROWS_AS(Cylinder({0, 0, 0}, 1).contains(w), WindowError);
}

TEST_CASE("parse and format round trip on product alphabets") {
  auto a = Alphabet::product({"01", "0RLABCD", "01"});
  Word w = parse_word(*a, "010/0RA/");
  CHECK(w.size() == 3);
  CHECK(a->component(w[2], 1) == 3);
  CHECK(a->component(w[1], 0) == 1);
  CHECK(format_word(*a, w) == "010/0RA/000");
  Cylinder c = parse_cylinder(*a, "1/B/0@-4");
  CHECK(c.position == -4);
  CHECK_THROWS_AS(parse_word(*a, "01/0R"), ConfigError);
}
