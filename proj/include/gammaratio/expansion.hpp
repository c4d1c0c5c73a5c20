#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gammaratio/coefficients.hpp"
#include "gammaratio/errors.hpp"
#include "gammaratio/kernels.hpp"

namespace gammaratio {

/// Re-derives the excess s = b_1+...+b_p - a_1-...-a_{p+1} with the same
/// left-to-right order used at construction; bit-identical to params.excess.
inline double parameter_excess(const ParameterSet& params) {
  double s = 0.0;
  for (double bj : params.b) s += bj;
  for (double ai : params.a) s -= ai;
  return s;
}

/// One summand of the truncated series.
///
/// For the ordinary factored evaluation, value = outer_factor * inner_sum.
/// When a shifted parameter sits on a nonpositive integer the factored
/// split is 0/0 and the term is computed in a combined pole-free form;
/// the factor fields are then disengaged.
struct TermRecord {
  int m = 0;
  double value = 0.0;
  std::optional<double> inner_sum;
  std::optional<double> outer_factor;
};

/// Truncated-series evaluation at one point.
struct EvaluationResult {
  double value = 0.0;
  std::vector<TermRecord> terms;
  double error_estimate = 0.0;
  int M_used = 0;
  bool terminated = false;
};

/// Inner k-sum of the m-th term:
///   sum_{k=0}^{m} (-m)_k / ((a_1+s)_k (a_2+s)_k) * A_k,
/// in increasing k. Terms whose coefficient is exactly zero are skipped,
/// which makes the p = 1 sum identically 1 for any shifts. A vanishing
/// denominator under a nonzero coefficient is a DenominatorPole; use the
/// combined form in series_term instead.
inline double inner_sum(const ParameterSet& params, int m) {
  if (m < 0) throw DomainError("inner_sum requires m >= 0");
  const double s = params.excess;
  const double u = params.a[0] + s;
  const double v = params.a[1] + s;
  const auto pole_u = snap_nonpositive_integer(u);
  const auto pole_v = snap_nonpositive_integer(v);

  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double coeff = series_coefficient(params, k);
    if (coeff == 0.0) continue;
    if (pole_u && k >= -*pole_u + 1) throw DenominatorPole("(a_1+s)_k", k);
    if (pole_v && k >= -*pole_v + 1) throw DenominatorPole("(a_2+s)_k", k);
    const double denominator = pochhammer(u, k) * pochhammer(v, k);
    sum += pochhammer(-static_cast<double>(m), k) / denominator * coeff;
  }
  return sum;
}

namespace detail {

// (1+s-n)_m vanishes exactly when n - s is an integer in [1, m]. The
// guard rejects evaluation points whose required Pochhammers, up to
// order max_m, sit on such a pole (within the pole tolerance); for
// integer excess this is the familiar bound n > s + max_m.
inline void require_pole_free_point(const ParameterSet& params, long n,
                                    int max_m) {
  if (n <= 0) throw DomainError("evaluation point n must be a positive integer");
  const double distance = static_cast<double>(n) - params.excess;
  const double nearest = std::round(distance);
  if (std::abs(distance - nearest) <= kPoleTolerance && nearest >= 1.0 &&
      nearest <= static_cast<double>(max_m)) {
    throw EvaluationPointTooSmall(n, params.excess + max_m);
  }
}

// True when x is within kPoleTolerance of a nonpositive integer no less
// than -(m-1), i.e. when (x)_k vanishes for some k <= m.
inline std::optional<long> pochhammer_zero_within(double x, int m) {
  const auto snapped = snap_nonpositive_integer(x);
  if (snapped && *snapped >= -(static_cast<long>(m) - 1)) return snapped;
  return std::nullopt;
}

// Smallest j+1 such that (x)_k = 0 for every k >= j+1, i.e. x snapped
// to the nonpositive integer -j; empty when x is not such an integer.
inline std::optional<long> pochhammer_cutoff(double x) {
  const auto snapped = snap_nonpositive_integer(x);
  if (snapped) return -*snapped + 1;
  return std::nullopt;
}

// Smallest K such that every coefficient with k >= K vanishes
// identically, proved from the Pochhammer structure of the family.
inline std::optional<long> coefficient_cutoff(const ParameterSet& params) {
  const std::vector<double>& a = params.a;
  const std::vector<double>& b = params.b;
  const auto min_cutoff = [](std::optional<long> x,
                             std::optional<long> y) -> std::optional<long> {
    if (x && y) return std::min(*x, *y);
    return x ? x : y;
  };
  switch (params.order()) {
    case 1:
      return 1;
    case 2:
      return min_cutoff(pochhammer_cutoff(b[1] - a[2]),
                        pochhammer_cutoff(b[0] - a[2]));
    case 3: {
      const auto left = pochhammer_cutoff(b[0] - a[2]);
      const auto right = min_cutoff(pochhammer_cutoff(b[2] - a[3]),
                                    pochhammer_cutoff(b[1] - a[3]));
      if (left && right) return *left + *right - 1;
      return std::nullopt;
    }
    case 4: {
      const auto left = pochhammer_cutoff(b[0] - a[2]);
      const auto middle = pochhammer_cutoff(b[1] - a[3]);
      const auto right = min_cutoff(pochhammer_cutoff(b[3] - a[4]),
                                    pochhammer_cutoff(b[2] - a[4]));
      if (left && middle && right) return *left + *middle + *right - 2;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace detail

/// Index m0 past which every series term is identically zero, when the
/// Pochhammer structure proves it; empty for a genuinely infinite series.
///
/// In the combined form the k-th component of term m carries the factor
/// (a_i+s+k)_{m-k}, which vanishes for every m > N_i once k <= N_i when
/// a_i+s sits on the nonpositive integer -N_i. All terms beyond m0 are
/// zero when every index k below the coefficient cutoff is covered by
/// some N_i; m0 is the smallest N_i covering the largest such k.
inline std::optional<int> termination_index(const ParameterSet& params) {
  const double s = params.excess;
  const auto n1 = snap_nonpositive_integer(params.a[0] + s);
  const auto n2 = snap_nonpositive_integer(params.a[1] + s);
  if (!n1 && !n2) return std::nullopt;

  const auto cutoff = detail::coefficient_cutoff(params);
  if (!cutoff) return std::nullopt;
  const long top_k = *cutoff - 1;

  std::optional<long> stop;
  for (const auto& snapped : {n1, n2}) {
    if (!snapped) continue;
    const long N = -*snapped;
    if (N >= top_k && (!stop || N < *stop)) stop = N;
  }
  if (!stop) return std::nullopt;
  return static_cast<int>(*stop);
}

/// m-th summand of the series at evaluation point n:
///   (a_1+s)_m (a_2+s)_m / (m! (1+s-n)_m) * inner_sum(m).
///
/// When (a_1+s)_k or (a_2+s)_k vanishes for some k <= m, numerator and
/// inner denominator cancel analytically; the term is then evaluated in
/// the combined form
///   sum_k (a_1+s+k)_{m-k} (a_2+s+k)_{m-k} (-m)_k A_k / (m! (1+s-n)_m),
/// with the offending parameter snapped to its integer so the
/// cancellation is exact.
inline TermRecord series_term(const ParameterSet& params, long n, int m) {
  if (m < 0) throw DomainError("series_term requires m >= 0");
  if (m == 0) return TermRecord{0, 1.0, 1.0, 1.0};
  detail::require_pole_free_point(params, n, m);
  const double s = params.excess;

  const double u = params.a[0] + s;
  const double v = params.a[1] + s;
  const double denominator =
      detail::factorial(m) * pochhammer((1.0 + s) - n, m);

  const auto pole_u = detail::pochhammer_zero_within(u, m);
  const auto pole_v = detail::pochhammer_zero_within(v, m);
  if (!pole_u && !pole_v) {
    const double outer = pochhammer(u, m) * pochhammer(v, m) / denominator;
    const double inner = inner_sum(params, m);
    return TermRecord{m, outer * inner, inner, outer};
  }

  const double u_eff = pole_u ? static_cast<double>(*pole_u) : u;
  const double v_eff = pole_v ? static_cast<double>(*pole_v) : v;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double coeff = series_coefficient(params, k);
    if (coeff == 0.0) continue;
    sum += pochhammer(u_eff + k, m - k) * pochhammer(v_eff + k, m - k) *
           pochhammer(-static_cast<double>(m), k) * coeff;
  }
  return TermRecord{m, sum / denominator, std::nullopt, std::nullopt};
}

/// Sum of terms m = 0..M in increasing m, with the magnitude of the
/// first omitted term as the error estimate. The evaluation point must
/// keep every required (1+s-n)_m, including the estimate's, pole-free;
/// n > s + M + 1 always suffices.
inline EvaluationResult evaluate(const ParameterSet& params, long n, int M) {
  if (M < 0) throw DomainError("evaluate requires M >= 0");
  detail::require_pole_free_point(params, n, M + 1);

  EvaluationResult result;
  result.M_used = M;
  result.terms.reserve(static_cast<std::size_t>(M) + 1);
  double sum = 0.0;
  for (int m = 0; m <= M; ++m) {
    result.terms.push_back(series_term(params, n, m));
    sum += result.terms.back().value;
  }
  result.value = sum;

  const auto stop = termination_index(params);
  result.terminated = stop.has_value() && *stop <= M;
  result.error_estimate =
      result.terminated ? 0.0 : std::abs(series_term(params, n, M + 1).value);
  return result;
}

/// Evaluation truncated at the M* <= M_cap minimizing the first omitted
/// term magnitude |term(M*+1)|; ties resolve to the smallest M*.
inline EvaluationResult optimal_truncation(const ParameterSet& params, long n,
                                           int M_cap) {
  if (M_cap < 0) throw DomainError("optimal_truncation requires M_cap >= 0");
  detail::require_pole_free_point(params, n, M_cap + 1);

  int best_M = 0;
  double best_magnitude = std::abs(series_term(params, n, 1).value);
  for (int M = 1; M <= M_cap; ++M) {
    const double magnitude = std::abs(series_term(params, n, M + 1).value);
    if (magnitude < best_magnitude) {
      best_magnitude = magnitude;
      best_M = M;
    }
  }
  return evaluate(params, n, best_M);
}

}  // namespace gammaratio
