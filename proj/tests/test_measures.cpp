#include <doctest.h>

#include <cmath>

#include "calab/error.hpp"
#include "calab/estimators.hpp"
#include "calab/fe.hpp"
#include "calab/fe_analysis.hpp"
#include "calab/registry.hpp"

using namespace calab;

namespace {

SamplingOptions opts(long samples, std::uint64_t seed, int workers = 1) {
  SamplingOptions o;
  o.samples = samples;
  o.seed = seed;
  o.workers = workers;
  return o;
}

bool within(double got, double want, double se, double sigmas = 3.0) { return std::abs(got - want) <= sigmas * se; }

}  // namespace

TEST_CASE("uniform letters on 7 symbols have frequency 1/7") {
  const MeasureSpec mu = make_measure("uniform:7");
  std::vector<long> counts(7, 0);
  const long n = 100000;
  const auto w = sample_window(mu, {0, n - 1}, CellStream(1, 0));
  for (long i = 0; i < n; ++i) ++counts[w.cell(i)];
  for (long c : counts) CHECK(within(static_cast<double>(c) / n, 1.0 / 7, bernoulli_stderr(1.0 / 7, n)));
}

TEST_CASE("mu_I draws zero outer layers and uniform emitters and carriers") {
  const MeasureSpec mu = fe::mu_i();
  const long n = 70000;
  const auto w = sample_window(mu, {-n / 2, n / 2 - 1}, CellStream(2, 0));
  std::vector<long> counts(7, 0);
  long outer = 0;
  for (long i = -n / 2; i < n / 2; ++i) {
    const Letter c = w.cell(i);
    outer += fe::x0_of(c) + fe::x2_of(c);
    ++counts[static_cast<std::size_t>(fe::x1_of(c))];
  }
  CHECK(outer == 0);
  for (long c : counts) CHECK(within(static_cast<double>(c) / n, 1.0 / 7, bernoulli_stderr(1.0 / 7, n)));
}

TEST_CASE("cylinder probabilities are products of letter probabilities") {
  const MeasureSpec u7 = make_measure("uniform:7");
  CHECK(cylinder_probability(u7, {{3, 5}, 0}) == doctest::Approx(1.0 / 49));
  CHECK(cylinder_probability(u7, {{3, 5}, -17}) == doctest::Approx(1.0 / 49));

  const MeasureSpec zero = make_measure("atomic:0");
  CHECK(cylinder_probability(zero, {{0, 0}, 3}) == 1.0);
  CHECK(cylinder_probability(zero, {{0, 1}, 3}) == 0.0);
  for (long i : {-5L, 0L, 5L}) CHECK(sample_window(zero, {-5, 5}, CellStream(3, 0)).cell(i) == 0);

  const MeasureSpec mu = fe::mu_i();
  CHECK(cylinder_probability(mu, {fe::from_layers("0", "A", "0"), 0}) == doctest::Approx(1.0 / 7));
  CHECK(cylinder_probability(mu, {fe::from_layers("1", "A", "0"), 0}) == 0.0);
  CHECK(cylinder_probability(mu, {fe::from_layers("0", "0", "1"), 4}) == 0.0);
  // Emitter letters together: 4/7.
  double emit = 0;
  for (const char* e : {"A", "B", "C", "D"}) emit += cylinder_probability(mu, {fe::from_layers("0", e, "0"), 0});
  CHECK(emit == doctest::Approx(4.0 / 7));
  // Precounter with gap l at a fixed place: two emitter cells and l Ebar cells.
  const long l = 9;
  const std::string x1 = "A" + std::string(static_cast<std::size_t>(l), '0') + "B";
  CHECK(cylinder_probability(mu, {fe::from_layers(std::string(x1.size(), '0'), x1, std::string(x1.size(), '0')), 2}) ==
        doctest::Approx(std::pow(1.0 / 7, static_cast<double>(l + 2))));
}

TEST_CASE("conditioned samples keep the cylinder and the other cells") {
  const MeasureSpec mu = make_measure("uniform:3");
  const Cylinder c{{2, 2, 0}, -1};
  const CellStream s(4, 9);
  const auto free = sample_window(mu, {-10, 10}, s);
  const auto given = sample_window_given(mu, {-10, 10}, s, c);
  CHECK(c.contains(given));
  for (long i = -10; i <= 10; ++i)
    if (!c.support().contains(i)) CHECK(free.cell(i) == given.cell(i));
}

TEST_CASE("enlarging a window keeps the cells already drawn") {
  const MeasureSpec mu = make_measure("uniform:5");
  const CellStream s(5, 1);
  const auto small = sample_window(mu, {-3, 3}, s), big = sample_window(mu, {-30, 30}, s);
  CHECK(small.read(-3, 3) == big.read(-3, 3));
}

TEST_CASE("image cylinders under measure-preserving automata") {
  const Cylinder c{{1, 0}, 2};
  const MeasureSpec mu = make_measure("bernoulli:0.3,0.7");
  const double exact = 0.7 * 0.3;
  for (const std::string id : {"identity:2", "shift:2"}) {
    EstimateReport r = estimate_image_cylinder(make_automaton(id), mu, c, 5, opts(20000, 6));
    CAPTURE(id);
    CHECK(within(r.value, exact, bernoulli_stderr(exact, r.samples)));
  }
  // Swapping the letters maps [10] back to [01] at odd times.
  EstimateReport r = estimate_image_cylinder(make_automaton("permutation:2"), mu, {{1}, 0}, 3, opts(20000, 7));
  CHECK(within(r.value, 0.3, bernoulli_stderr(0.3, r.samples)));
}

TEST_CASE("estimates do not depend on the worker count") {
  const auto f = fe::automaton();
  const Cylinder c{fe::from_layers("0", "R", "0"), 0};
  const auto a = estimate_image_cylinder(f, fe::mu_i(), c, 3, opts(200, 8, 1));
  const auto b = estimate_image_cylinder(f, fe::mu_i(), c, 3, opts(200, 8, 4));
  CHECK(a.to_json().dump() == b.to_json().dump());
  const auto m1 = mixing_gap(f, fe::mu_i(), c, c, {30}, 8, opts(50, 9, 1));
  const auto m2 = mixing_gap(f, fe::mu_i(), c, c, {30}, 8, opts(50, 9, 3));
  CHECK(m1[0].to_json().dump() == m2[0].to_json().dump());
}

TEST_CASE("Cesaro means of identity and a letter swap") {
  const MeasureSpec mu = make_measure("bernoulli:0.2,0.8");
  const auto id = cesaro_mean(make_automaton("identity:2"), mu, {{1}, 0}, 64, opts(4000, 10));
  for (std::size_t k : {0u, 7u, 63u}) CHECK(within(id.partial_means[k], 0.8, id.partial_stderr[k]));
  const auto sw = cesaro_mean(make_automaton("permutation:2"), mu, {{1}, 0}, 64, opts(4000, 11));
  CHECK(within(sw.partial_means[63], 0.5, bernoulli_stderr(0.5, 4000)));
  CHECK(within(sw.partial_means[0], 0.8, bernoulli_stderr(0.8, 4000)));
}

TEST_CASE("mixing gap: product measure control and periodic negative control") {
  const Cylinder one{{1}, 0};
  const auto ctl = mixing_gap(make_automaton("identity:2"), make_measure("bernoulli:0.5,0.5"), one, one, {3, 10, 40}, 4,
                              opts(4000, 12));
  for (const auto& r : ctl) CHECK(r.value < 3 * r.std_error);
  // Point mass on ...0101... averaged along the shift over an even horizon is
  // the invariant periodic measure: p1 = p2 = 1/2, p12 is 1/2 or 0.
  const auto per = mixing_gap(make_automaton("shift:2"), make_measure("atomic:01"), one, one, {2, 3, 40, 41}, 4,
                              opts(50, 13));
  for (const auto& r : per) CHECK(r.value == doctest::Approx(0.25));
}

TEST_CASE("F_e image of a single emitter cylinder matches the reference run") {
  // Reference run: same estimator, 10000 samples, seed 2024, no hits.
  const auto r = estimate_image_cylinder(fe::automaton(), fe::mu_i(), {fe::from_layers("0", "B", "0"), 0}, 200,
                                         opts(1000, 31));
  CHECK(r.value == 0.0);
}

TEST_CASE("bad estimator requests are rejected") {
  const auto f = make_automaton("shift:2");
  const MeasureSpec mu = make_measure("uniform:2");
  CHECK_THROWS_AS(mixing_gap(f, mu, {{1, 1}, 0}, {{1}, 0}, {1}, 4, opts(10, 1)), ConfigError);
  CHECK_THROWS_AS(estimate_image_cylinder(f, mu, {{1}, 0}, 5, opts(0, 1)), ConfigError);
  CHECK_THROWS_AS(make_measure("bernoulli:0.5,x"), ConfigError);
  SamplingOptions tight = opts(10, 1);
  tight.window_budget = 10;
  CHECK_THROWS_AS(estimate_image_cylinder(fe::automaton(), fe::mu_i(), {{0}, 0}, 50, tight), BudgetError);
}
