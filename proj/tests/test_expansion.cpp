#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gammaratio/expansion.hpp"
#include "gammaratio/kernels.hpp"
#include "oracles.hpp"

using namespace gammaratio;

TEST_CASE("parameter excess") {
  const ParameterSet trivial({1.0, 1.0}, {2.0});
  CHECK(parameter_excess(trivial) == 0.0);
  CHECK(parameter_excess(trivial) == trivial.excess);

  const ParameterSet p2({0.3, 0.7, 1.1}, {0.9, 1.3});
  CHECK(parameter_excess(p2) == p2.excess);
  CHECK_THAT(p2.excess, Catch::Matchers::WithinAbs(0.1, 1e-15));

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const double a1 = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const double a2 = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const double b1 = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const ParameterSet params({a1, a2}, {b1});
    CHECK(parameter_excess(params) == b1 - a1 - a2);
  }
}

TEST_CASE("inner sum is identically one for order one") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const double a1 = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const double a2 = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const double b1 = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const ParameterSet params({a1, a2}, {b1});
    for (int m = 0; m <= 6; ++m) {
      CHECK(inner_sum(params, m) == 1.0);
    }
  }
}

TEST_CASE("inner sum at m = 0 is one") {
  const ParameterSet params({0.3, 0.7, 1.1}, {0.9, 1.3});
  CHECK(inner_sum(params, 0) == 1.0);
}

TEST_CASE("inner sum direct substitution") {
  const ParameterSet params({0.3, 0.7, 1.1}, {0.9, 1.3});
  CHECK_THAT(inner_sum(params, 1), Catch::Matchers::WithinRel(1.125, 1e-14));

  // brute force: 1 + (-m)_1 A_1 / ((a_1+s)(a_2+s)) at m = 2 includes k = 2
  const double s = params.excess;
  const double u = params.a[0] + s;
  const double v = params.a[1] + s;
  double brute = 0.0;
  for (int k = 0; k <= 2; ++k) {
    brute += pochhammer(-2.0, k) /
             (pochhammer(u, k) * pochhammer(v, k)) *
             series_coefficient(params, k);
  }
  CHECK_THAT(inner_sum(params, 2), Catch::Matchers::WithinRel(brute, 1e-14));
}

TEST_CASE("inner sum reports the offending k at a denominator pole") {
  // s = -1 makes a_1 + s = 0 while A_1 = (3.5-3)(1.5-3) is nonzero.
  const ParameterSet params({1.0, 2.0, 3.0}, {1.5, 3.5});
  REQUIRE(params.a[0] + params.excess == 0.0);
  try {
    inner_sum(params, 2);
    FAIL("expected DenominatorPole");
  } catch (const DenominatorPole& e) {
    CHECK(e.offending_k() == 1);
  }
}

TEST_CASE("series term at m = 0") {
  const ParameterSet params({0.3, 0.7, 1.1}, {0.9, 1.3});
  const TermRecord record = series_term(params, 10, 0);
  CHECK(record.value == 1.0);
  REQUIRE(record.inner_sum.has_value());
  REQUIRE(record.outer_factor.has_value());
  CHECK(*record.inner_sum == 1.0);
  CHECK(*record.outer_factor == 1.0);
}

TEST_CASE("series term direct substitution") {
  const ParameterSet params({1.0, 1.0}, {2.0});
  const TermRecord record = series_term(params, 10, 1);
  CHECK_THAT(record.value, Catch::Matchers::WithinRel(-1.0 / 9.0, 1e-14));
  REQUIRE(record.inner_sum.has_value());
  CHECK(*record.inner_sum == 1.0);
  REQUIRE(record.outer_factor.has_value());
  CHECK(record.value == *record.outer_factor * *record.inner_sum);
}

TEST_CASE("series term pole-safe path returns the exact zero") {
  const ParameterSet params({1.0, 3.0}, {2.0});
  const TermRecord record = series_term(params, 5, 2);
  CHECK(record.value == 0.0);
  CHECK_FALSE(record.inner_sum.has_value());
  CHECK_FALSE(record.outer_factor.has_value());
}

TEST_CASE("series term pole-safe path matches the analytic limit") {
  // a_1 + s = -1 exactly; compare the combined form against the factored
  // form evaluated just off the singular parameter.
  const ParameterSet limit({0.5, 0.75, 1.3125}, {0.25, 0.8125});
  REQUIRE(limit.a[0] + limit.excess == -1.0);
  const TermRecord combined = series_term(limit, 30, 3);
  CHECK_FALSE(combined.inner_sum.has_value());
  CHECK(combined.value != 0.0);

  const double offset = 1e-7;
  const ParameterSet nearby({0.5, 0.75, 1.3125}, {0.25 + offset, 0.8125});
  const TermRecord factored = series_term(nearby, 30, 3);
  REQUIRE(factored.inner_sum.has_value());
  CHECK(testref::close_rel(combined.value, factored.value, 1e-4));
}

TEST_CASE("series term guards the evaluation point") {
  const ParameterSet params({1.0, 1.0}, {2.0});
  CHECK_THROWS_AS(series_term(params, 2, 2), EvaluationPointTooSmall);
  CHECK_NOTHROW(series_term(params, 3, 2));
}

TEST_CASE("evaluate terminating series equals the closed form") {
  const ParameterSet params({1.0, 3.0}, {2.0});
  for (long n : {5L, 10L, 50L, 100L}) {
    const EvaluationResult result = evaluate(params, n, 3);
    const double closed = (static_cast<double>(n) + 2.0) / (n + 1.0);
    CHECK(result.terminated);
    CHECK(result.error_estimate == 0.0);
    CHECK(testref::close_rel(result.value, closed, 1e-11));
    CHECK(testref::close_rel(result.value, oracle_ratio(params, n), 1e-11));
  }
}

TEST_CASE("evaluate cancellation identity is exact") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const double a1 = (static_cast<double>(rng() % 48) + 4.0) / 16.0;
    const double c = (static_cast<double>(rng() % 81) - 32.0) / 16.0;
    const ParameterSet params({a1, c}, {c});
    const long n = 8 + static_cast<long>(rng() % 60);
    for (int M = 0; M <= 6; ++M) {
      const EvaluationResult result = evaluate(params, n, M);
      CHECK(result.value == 1.0);
      CHECK(result.terminated);
    }
  }
}

TEST_CASE("evaluate error estimate is the first omitted term") {
  const ParameterSet params({1.0, 1.0}, {2.0});
  const EvaluationResult result = evaluate(params, 10, 1);
  CHECK_THAT(result.value, Catch::Matchers::WithinRel(8.0 / 9.0, 1e-14));
  CHECK_THAT(result.error_estimate,
             Catch::Matchers::WithinRel(1.0 / 36.0, 1e-14));
  CHECK(result.M_used == 1);
  CHECK_FALSE(result.terminated);

  double running = 0.0;
  for (const TermRecord& term : result.terms) running += term.value;
  CHECK(result.value == running);
}

TEST_CASE("evaluate rejects n at or below the pole guard") {
  const ParameterSet params({1.0, 1.0}, {2.0});
  CHECK_THROWS_AS(evaluate(params, 3, 3), EvaluationPointTooSmall);
  CHECK_NOTHROW(evaluate(params, 5, 3));
}

TEST_CASE("order two inner sums match the terminating 3F2 route") {
  const ParameterSet params({0.3, 0.7, 1.1}, {0.9, 1.3});
  const double s = params.excess;
  for (int m = 1; m <= 6; ++m) {
    const double via_3f2 =
        terminating_3f2(params.b[1] - params.a[2], params.b[0] - params.a[2],
                        m, params.a[0] + s, params.a[1] + s);
    CHECK(testref::close_rel(inner_sum(params, m), via_3f2, 1e-12));
  }
}

TEST_CASE("order reduction is term-by-term") {
  const ParameterSet reduced({0.3, 0.7}, {0.9});
  const ParameterSet lifted({0.3, 0.7, 1.25}, {0.9, 1.25});
  for (long n : {10L, 40L}) {
    for (int m = 0; m <= 5; ++m) {
      const TermRecord low = series_term(reduced, n, m);
      const TermRecord high = series_term(lifted, n, m);
      CHECK(testref::close_dual(high.value, low.value, 1e-13, 1e-16));
    }
  }
}

TEST_CASE("termination analysis") {
  CHECK(termination_index(ParameterSet({1.0, 3.0}, {2.0})) == 1);
  CHECK(termination_index(ParameterSet({0.7, 1.9}, {1.9})) == 0);
  CHECK_FALSE(termination_index(ParameterSet({1.0, 1.0}, {2.0})).has_value());
  CHECK_FALSE(
      termination_index(ParameterSet({0.3, 0.7, 1.1}, {0.9, 1.3})).has_value());
}

TEST_CASE("terminating order-two family is exact") {
  // a_3 = b_1 + 1 kills the coefficients beyond k = 1, and b_2 = a_2
  // puts a_1 + s on -1, so the series stops after m = 1.
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const double a1 = (static_cast<double>(rng() % 32) + 4.0) / 16.0;
    const double a2 = (static_cast<double>(rng() % 32) + 8.0) / 16.0;
    const double b1 = (static_cast<double>(rng() % 32) + 6.0) / 16.0;
    const ParameterSet params({a1, a2, b1 + 1.0}, {b1, a2});
    const auto stop = termination_index(params);
    REQUIRE(stop.has_value());
    const long n = 12 + static_cast<long>(rng() % 50);
    const EvaluationResult result = evaluate(params, n, 4);
    CHECK(result.terminated);
    CHECK(testref::close_rel(result.value, oracle_ratio(params, n), 1e-11));
  }
}

TEST_CASE("optimal truncation with a zero-order cap") {
  const ParameterSet params({0.3, 0.7, 1.1}, {0.9, 1.3});
  const EvaluationResult capped = optimal_truncation(params, 20, 0);
  const EvaluationResult direct = evaluate(params, 20, 0);
  CHECK(capped.value == direct.value);
  CHECK(capped.M_used == 0);
  CHECK(capped.error_estimate == direct.error_estimate);
}

TEST_CASE("optimal truncation stops at termination") {
  const ParameterSet params({1.0, 3.0}, {2.0});
  const EvaluationResult result = optimal_truncation(params, 5, 3);
  CHECK(result.M_used == 1);
  CHECK(result.terminated);
  CHECK(testref::close_rel(result.value, 7.0 / 6.0, 1e-14));
}

TEST_CASE("optimal truncation matches exhaustive enumeration") {
  const ParameterSet params({1.0, 1.0}, {2.0});
  const long n = 10;
  const int cap = 8;
  int best_M = 0;
  double best_magnitude = std::abs(series_term(params, n, 1).value);
  for (int M = 1; M <= cap; ++M) {
    const double magnitude = std::abs(series_term(params, n, M + 1).value);
    if (magnitude < best_magnitude) {
      best_magnitude = magnitude;
      best_M = M;
    }
  }
  const EvaluationResult result = optimal_truncation(params, n, cap);
  CHECK(result.M_used == best_M);
  // the |term| ladder for these parameters ties at m = 4 and m = 5, so
  // the tie-break must pick M* = 3
  CHECK(result.M_used == 3);
}

TEST_CASE("integer excess passes through the ordinary branch") {
  const ParameterSet params({1.0, 1.0}, {2.0});
  REQUIRE(params.excess == 0.0);
  const EvaluationResult result = evaluate(params, 50, 3);
  CHECK_FALSE(result.terminated);
  for (const TermRecord& term : result.terms) {
    CHECK(term.inner_sum.has_value());
    CHECK(term.outer_factor.has_value());
    CHECK(std::isfinite(term.value));
  }
}
