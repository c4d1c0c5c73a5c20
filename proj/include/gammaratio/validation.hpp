#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gammaratio/coefficients.hpp"
#include "gammaratio/errors.hpp"
#include "gammaratio/expansion.hpp"
#include "gammaratio/kernels.hpp"

namespace gammaratio {

/// Relative accuracy budget of the oracle; grid rows within 1e3 of this
/// scale are treated as noise and excluded from decay fits.
inline constexpr double kOracleRelativeNoise = 1e-12;
inline constexpr double kNoiseFloorFactor = 1e3;

/// Seed of the shipped random-parameter corpus.
inline constexpr std::uint64_t kDefaultSeed = 1729;

struct GridRow {
  long n = 0;
  double oracle_value = 0.0;
  double series_value = 0.0;
  double abs_error = 0.0;
};

/// Per-n comparison grid plus the fitted empirical decay order.
struct ConvergenceReport {
  ParameterSet params;
  int M = 0;
  std::vector<GridRow> grid;
  double fitted_order = 0.0;
  double expected_order = 0.0;
};

inline bool row_admissible(const GridRow& row) {
  return row.abs_error >
         kNoiseFloorFactor * kOracleRelativeNoise * std::abs(row.oracle_value);
}

/// Ordinary least-squares slope of log(abs_error) against log(n) over
/// the rows above the noise floor. The slope of an O(n^-q) law is -q.
inline double fit_decay_order(const std::vector<GridRow>& grid) {
  std::vector<std::pair<double, double>> points;
  for (const GridRow& row : grid) {
    if (row_admissible(row)) {
      points.emplace_back(std::log(static_cast<double>(row.n)),
                          std::log(row.abs_error));
    }
  }
  if (points.size() < 3) throw InsufficientData(points.size());

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());

  double covariance = 0.0;
  double variance = 0.0;
  for (const auto& [x, y] : points) {
    covariance += (x - mean_x) * (y - mean_y);
    variance += (x - mean_x) * (x - mean_x);
  }
  return covariance / variance;
}

namespace detail {

inline void require_strictly_increasing(const std::vector<long>& n_grid) {
  if (n_grid.empty()) throw DomainError("n grid must not be empty");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i) {
    if (n_grid[i] >= n_grid[i + 1]) {
      throw DomainError("n grid must be strictly increasing");
    }
  }
}

}  // namespace detail

/// Fills the grid with oracle/series values at each n and fits the
/// empirical decay order of the truncation error.
inline ConvergenceReport convergence_scan(const ParameterSet& params, int M,
                                          const std::vector<long>& n_grid) {
  detail::require_strictly_increasing(n_grid);
  ConvergenceReport report{params, M, {}, 0.0, -(static_cast<double>(M) + 1)};
  report.grid.reserve(n_grid.size());
  for (long n : n_grid) {
    const double oracle = oracle_ratio(params, n);
    const double series = evaluate(params, n, M).value;
    report.grid.push_back(GridRow{n, oracle, series, std::abs(series - oracle)});
  }
  report.fitted_order = fit_decay_order(report.grid);
  return report;
}

/// Maximum pairwise discrepancy among the three p = 3 coefficient
/// representations over k = 0..K. Differences at or below the 1e-13
/// absolute floor count as zero; otherwise the difference is scaled by
/// the larger magnitude.
inline double representation_crosscheck(const ParameterSet& params, int K) {
  if (params.order() != 3) {
    throw DomainError("representation_crosscheck requires p = 3");
  }
  const auto discrepancy = [](double x, double y) {
    const double diff = std::abs(x - y);
    if (diff <= 1e-13) return 0.0;
    return diff / std::max(std::abs(x), std::abs(y));
  };
  double worst = 0.0;
  for (int k = 0; k <= K; ++k) {
    const double nested = series_coefficient(params, k);
    const double shifted = series_coefficient_3f2_shifted(params, k);
    const double matched = series_coefficient_3f2_matched(params, k);
    worst = std::max({worst, discrepancy(nested, shifted),
                      discrepancy(nested, matched),
                      discrepancy(shifted, matched)});
  }
  return worst;
}

/// Compares the truncated series under two assignments of the
/// distinguished parameter pair: the given a-order against the order
/// with a[swap.first] and a[swap.second] exchanged. The difference of
/// the two evaluations takes the place of the truncation error in the
/// report, so its fitted slope quantifies the role asymmetry.
inline ConvergenceReport permutation_sensitivity(
    const ParameterSet& params, const std::vector<long>& n_grid, int M,
    std::pair<std::size_t, std::size_t> swap = {1, 2}) {
  if (params.order() < 2) {
    throw DomainError(
        "permutation_sensitivity requires p >= 2: with two shifts there is "
        "only one role assignment");
  }
  if (swap.first == swap.second || swap.first >= params.a.size() ||
      swap.second >= params.a.size()) {
    throw DomainError("invalid swap indices for the a-list");
  }
  detail::require_strictly_increasing(n_grid);

  std::vector<double> swapped = params.a;
  std::swap(swapped[swap.first], swapped[swap.second]);
  const ParameterSet alternate(std::move(swapped), params.b);

  ConvergenceReport report{params, M, {}, 0.0, -(static_cast<double>(M) + 1)};
  report.grid.reserve(n_grid.size());
  for (long n : n_grid) {
    const double original = evaluate(params, n, M).value;
    const double exchanged = evaluate(alternate, n, M).value;
    report.grid.push_back(
        GridRow{n, original, exchanged, std::abs(original - exchanged)});
  }
  report.fitted_order = fit_decay_order(report.grid);
  return report;
}

// ---------------------------------------------------------------------------
// Seeded random-parameter corpus
// ---------------------------------------------------------------------------

namespace detail {

// Uniform draw from the rationals j/16 in [-2, 3]. Uses the raw engine
// output so the stream is identical on every platform.
inline double draw_sixteenth(std::mt19937_64& rng) {
  return (static_cast<double>(rng() % 81) - 32.0) / 16.0;
}

inline bool integer_in_range(double x, long lo, long hi, double tol = 1e-9) {
  const double r = std::round(x);
  return std::abs(x - r) <= tol && r >= static_cast<double>(lo) &&
         r <= static_cast<double>(hi);
}

}  // namespace detail

/// Seeded p = 3 parameter sets suitable for all three coefficient
/// representations up to k_max: draws are rejected while any 3F2 lower
/// parameter would hit a nonpositive integer inside the truncation range.
inline std::vector<ParameterSet> representation_corpus(std::uint64_t seed,
                                                       int count = 200,
                                                       int k_max = 10) {
  std::mt19937_64 rng(seed);
  std::vector<ParameterSet> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  while (corpus.size() < static_cast<std::size_t>(count)) {
    std::vector<double> a(4);
    std::vector<double> b(3);
    for (double& x : a) x = detail::draw_sixteenth(rng);
    for (double& x : b) x = detail::draw_sixteenth(rng);

    const long lo = -(static_cast<long>(k_max) - 1);
    const bool degenerate =
        detail::integer_in_range(b[0] - a[2], lo, 0) ||
        detail::integer_in_range(b[2] + b[1] - a[3] - a[2], lo, 0) ||
        detail::integer_in_range(b[0] + b[2] - a[2] - a[3], lo, 0) ||
        detail::integer_in_range(b[1] + b[2] - a[2] - a[3], lo, 0);
    if (degenerate) continue;
    corpus.emplace_back(std::move(a), std::move(b));
  }
  return corpus;
}

/// Shipped convergence-scan scenario for each order. p = 1 and p = 2 are
/// fixed reference sets; p = 3 and p = 4 are the first generic draws of
/// the seeded corpus (no near-integer shifted parameters, so neither the
/// pole-safe branch nor termination can mask the decay order).
inline ParameterSet default_scenario(int p, std::uint64_t seed = kDefaultSeed) {
  if (p == 1) return ParameterSet({1.0, 1.0}, {2.0});
  if (p == 2) return ParameterSet({0.3, 0.7, 1.1}, {0.9, 1.3});
  if (p != 3 && p != 4) {
    throw DomainError("default scenarios exist for p = 1..4 only");
  }

  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(p));
  while (true) {
    std::vector<double> a(static_cast<std::size_t>(p) + 1);
    std::vector<double> b(static_cast<std::size_t>(p));
    for (double& x : a) x = detail::draw_sixteenth(rng);
    for (double& x : b) x = detail::draw_sixteenth(rng);
    ParameterSet candidate(std::move(a), std::move(b));

    if (std::abs(candidate.excess) > 8.0) continue;
    const double u = candidate.a[0] + candidate.excess;
    const double v = candidate.a[1] + candidate.excess;
    if (detail::integer_in_range(u, -12, 0, 1e-6) ||
        detail::integer_in_range(v, -12, 0, 1e-6)) {
      continue;
    }

    // Keep the coefficient family free of identically-vanishing factors.
    std::vector<double> structure;
    const auto& ca = candidate.a;
    const auto& cb = candidate.b;
    structure.push_back(cb[0] - ca[2]);
    if (p == 3) {
      structure.push_back(cb[2] - ca[3]);
      structure.push_back(cb[1] - ca[3]);
    } else {
      structure.push_back(cb[1] - ca[3]);
      structure.push_back(cb[3] - ca[4]);
      structure.push_back(cb[2] - ca[4]);
    }
    bool vanishing = false;
    for (double x : structure) {
      vanishing = vanishing || detail::integer_in_range(x, -12, 0, 1e-6);
    }
    if (vanishing) continue;
    return candidate;
  }
}

// ---------------------------------------------------------------------------
// Shipped invariant battery (CLI `validate`)
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::vector<long> doubling_grid() { return {20, 40, 80, 160, 320, 640}; }

inline bool close_rel(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

// Coefficient of z^target in (1-z)^m log(1-z), by multiplying the
// binomial polynomial against the truncated logarithm series. The
// convolution cancels catastrophically in floating point, so it is
// accumulated as an exact integer rational; with m <= 5 and target <= 30
// the denominator stays below 30^6 and everything fits in 64 bits.
inline double log_series_brute_force(int m, int target) {
  std::vector<long long> binomial(static_cast<std::size_t>(m) + 1, 0);
  binomial[0] = 1;
  for (int i = 1; i <= m; ++i) {
    for (int j = i; j >= 1; --j) binomial[j] -= binomial[j - 1];
  }
  long long numerator = 0;
  long long denominator = 1;
  for (int j = 0; j <= m && j < target; ++j) {
    const long long k = target - j;
    numerator = numerator * k - binomial[static_cast<std::size_t>(j)] *
                                    denominator;
    denominator *= k;
  }
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace detail

/// Runs the shipped quantitative checks and reports one row per
/// property. The battery makes no assertions itself; the caller decides
/// what a failure means (the CLI maps any failure to exit code 3).
inline std::vector<CheckResult> run_validation(std::uint64_t seed = kDefaultSeed) {
  std::vector<CheckResult> results;
  const auto record = [&results](const std::string& name, bool ok,
                                 std::string detail_text) {
    results.push_back(CheckResult{name, ok, std::move(detail_text)});
  };
  const auto fmt = [](double x) { return std::to_string(x); };

  // Pure-regression self-test on an exact power law.
  {
    std::vector<GridRow> rows;
    for (long n : {20L, 40L, 80L, 160L}) {
      rows.push_back(GridRow{n, 1.0, 1.0, std::pow(n, -3.0)});
    }
    const double slope = fit_decay_order(rows);
    record("power-law regression self-test", std::abs(slope + 3.0) <= 1e-9,
           "slope " + fmt(slope) + " for exact n^-3 errors");
  }

  // Oracle self-checks.
  {
    const double half = signed_log_gamma(0.5).value();
    const double five = signed_log_gamma(5.0).value();
    const bool ok_half =
        detail::close_rel(half, std::sqrt(3.14159265358979323846), 1e-13);
    const bool ok_five = detail::close_rel(five, 24.0, 1e-13);
    bool ok_shift = true;
    for (double x = -10.5; x <= 50.0; x += 0.25) {
      const bool near_pole = snap_nonpositive_integer(x, 0.1).has_value() ||
                             snap_nonpositive_integer(x + 1.0, 0.1).has_value();
      if (near_pole) continue;
      const double upper = signed_log_gamma(x + 1.0).log_abs;
      const double lhs = upper - signed_log_gamma(x).log_abs;
      const double rhs = std::log(std::abs(x));
      ok_shift =
          ok_shift &&
          std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(upper));
    }
    record("oracle gamma self-checks", ok_half && ok_five && ok_shift,
           "Gamma(1/2), Gamma(5), shift recurrence over [-10.5, 50]");
  }

  // Oracle permutation invariance.
  {
    const ParameterSet base = default_scenario(3, seed);
    bool ok = true;
    for (long n : {7L, 25L, 100L}) {
      const double reference = oracle_ratio(base, n);
      std::vector<double> ra(base.a.rbegin(), base.a.rend());
      std::vector<double> rb(base.b.rbegin(), base.b.rend());
      const double permuted = oracle_ratio(ParameterSet(ra, rb), n);
      ok = ok && detail::close_rel(reference, permuted, 1e-13);
    }
    record("oracle permutation invariance", ok,
           "a- and b-lists reversed, n in {7, 25, 100}");
  }

  // Termination exactness on the integer-shift reference set.
  {
    const ParameterSet params({1.0, 3.0}, {2.0});
    bool ok = true;
    for (long n : {5L, 10L, 50L, 100L}) {
      const EvaluationResult r = evaluate(params, n, 3);
      const double closed = (static_cast<double>(n) + 2.0) / (n + 1.0);
      ok = ok && r.terminated && detail::close_rel(r.value, closed, 1e-11) &&
           detail::close_rel(r.value, oracle_ratio(params, n), 1e-11);
    }
    record("termination exactness", ok, "a=(1,3), b=(2) equals (n+2)/(n+1)");
  }

  // Cancellation identity.
  {
    const ParameterSet params({0.7, 1.9}, {1.9});
    bool ok = true;
    for (long n = 5; n <= 200; ++n) {
      for (int M = 0; M <= 6; ++M) {
        ok = ok && evaluate(params, n, M).value == 1.0;
      }
      ok = ok && std::abs(oracle_ratio(params, n) - 1.0) <= 1e-13;
    }
    record("cancellation identity", ok, "a=(0.7,1.9), b=(1.9) gives exactly 1");
  }

  // Convergence order for every shipped scenario.
  for (int p = 1; p <= 4; ++p) {
    const ParameterSet scenario = default_scenario(p, seed);
    bool ok = true;
    std::string detail_text;
    for (int M = 0; M <= 3; ++M) {
      const ConvergenceReport report =
          convergence_scan(scenario, M, detail::doubling_grid());
      const double deviation =
          std::abs(report.fitted_order - report.expected_order);
      ok = ok && deviation <= 0.3;
      detail_text += (M ? ", " : "") + std::string("M=") + std::to_string(M) +
                     ": " + fmt(report.fitted_order);
    }
    record("convergence order, p=" + std::to_string(p), ok, detail_text);
  }

  // Representation agreement over the seeded corpus.
  {
    double worst = 0.0;
    for (const ParameterSet& params : representation_corpus(seed)) {
      worst = std::max(worst, representation_crosscheck(params, 10));
    }
    char scientific[32];
    std::snprintf(scientific, sizeof(scientific), "%.3e", worst);
    record("p=3 representation agreement", worst <= 1e-11,
           std::string("max discrepancy ") + scientific +
               " over 200 seeded sets");
  }

  // Reduction chain: appending matching shifts must not change anything.
  {
    const auto agree = [](double x, double y) {
      return std::abs(x - y) <= 1e-13 ||
             detail::close_rel(x, y, 1e-12);
    };
    const auto lift = [](const ParameterSet& base, double extra) {
      std::vector<double> a = base.a;
      std::vector<double> b = base.b;
      a.push_back(extra);
      b.push_back(extra);
      return ParameterSet(std::move(a), std::move(b));
    };
    bool ok = true;
    ParameterSet level = default_scenario(2, seed);
    for (int step = 0; step < 2; ++step) {
      const ParameterSet lifted = lift(level, 1.25);
      for (int k = 0; k <= 8; ++k) {
        ok = ok && agree(series_coefficient(lifted, k),
                         series_coefficient(level, k));
      }
      for (long n : {25L, 50L}) {
        ok = ok && agree(evaluate(lifted, n, 3).value,
                         evaluate(level, n, 3).value);
      }
      level = lifted;
    }
    record("reduction chain p=2 -> p=3 -> p=4", ok,
           "matching trailing shifts collapse the order");
  }

  // Logarithm-series coefficients against polynomial arithmetic.
  {
    bool ok = true;
    for (int m = 0; m <= 5; ++m) {
      for (int n = m + 1; n <= 30; ++n) {
        const double direct = log_series_coefficient(m, n);
        const double brute = detail::log_series_brute_force(m, n);
        ok = ok && detail::close_rel(direct, brute, 1e-12);
      }
    }
    record("log-series coefficients", ok,
           "(1-z)^m log(1-z) Taylor read-off, m <= 5, n <= 30");
  }

  // Role-asymmetry bound. The inverse-factorial expansion has unique
  // coefficients for a given excess, so swapping which shifts act as the
  // distinguished pair changes nothing beyond rounding; differences
  // below the noise floor satisfy the decay bound vacuously.
  {
    const ParameterSet params({0.3, 0.7, 1.1}, {0.9, 1.3});
    bool ok = false;
    std::string detail_text;
    try {
      const ConvergenceReport report =
          permutation_sensitivity(params, detail::doubling_grid(), 1);
      ok = report.fitted_order <= -1.7;
      detail_text = "slope " + fmt(report.fitted_order) + " for swapped roles";
    } catch (const InsufficientData&) {
      ok = true;
      std::vector<double> swapped = params.a;
      std::swap(swapped[1], swapped[2]);
      const ParameterSet alternate(swapped, params.b);
      for (long n : detail::doubling_grid()) {
        const double original = evaluate(params, n, 1).value;
        const double exchanged = evaluate(alternate, n, 1).value;
        ok = ok && std::abs(original - exchanged) <=
                       kNoiseFloorFactor * kOracleRelativeNoise *
                           std::abs(original);
      }
      detail_text = "role differences below the noise floor at every n";
    }
    record("permutation sensitivity bound", ok, detail_text);
  }

  return results;
}

}  // namespace gammaratio
