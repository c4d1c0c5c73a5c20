#pragma once

#include <string>
#include <vector>

#include "gammaratio/errors.hpp"
#include "gammaratio/kernels.hpp"

namespace gammaratio {

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Terminating hypergeometric sum
///   3F2(n1, n2, -k; d1, d2 | 1) = sum_{j=0}^{k} term_j,
/// evaluated strictly term by term in increasing j with the (-k)_j
/// factor as the cutoff. A zero numerator factor ends the series early
/// (all later terms vanish); a zero denominator factor before that is a
/// degenerate parameterization.
///
/// The alternating terms can exceed the sum by many orders of magnitude,
/// so the accumulation runs in extended precision; the result is still a
/// binary64 value and the summation order is fixed.
inline double terminating_3f2(double n1, double n2, int k, double d1,
                              double d2) {
  if (k < 0) throw DomainError("terminating_3f2 requires k >= 0");
  long double sum = 1.0L;
  long double term = 1.0L;
  for (int j = 0; j < k; ++j) {
    const long double numerator = (static_cast<long double>(n1) + j) *
                                  (static_cast<long double>(n2) + j) *
                                  (static_cast<long double>(j) - k);
    if (numerator == 0.0L) break;
    const long double den1 = static_cast<long double>(d1) + j;
    const long double den2 = static_cast<long double>(d2) + j;
    if (den1 == 0.0L) throw DegenerateDenominator(std::to_string(d1), j + 1);
    if (den2 == 0.0L) throw DegenerateDenominator(std::to_string(d2), j + 1);
    term *= numerator / (den1 * den2 * (j + 1));
    sum += term;
  }
  return static_cast<double>(sum);
}

/// k-th inner-sum coefficient of the expansion for order p = 1..4.
///
/// p = 1 has the degenerate family 1, 0, 0, ...; p = 2..4 are nested
/// finite sums of Pochhammer products over factorials, accumulated in
/// increasing k_2 (then k_3) order.
inline double series_coefficient(const ParameterSet& params, int k) {
  if (k < 0) throw DomainError("coefficient index must be nonnegative");
  const int p = params.order();
  const std::vector<double>& a = params.a;
  const std::vector<double>& b = params.b;

  switch (p) {
    case 1:
      return k == 0 ? 1.0 : 0.0;
    case 2:
      return pochhammer(b[1] - a[2], k) * pochhammer(b[0] - a[2], k) /
             detail::factorial(k);
    case 3: {
      const double pair = b[2] + b[1] - a[3] - a[2];
      double sum = 0.0;
      for (int k2 = 0; k2 <= k; ++k2) {
        sum += pochhammer(pair + k2, k - k2) * pochhammer(b[0] - a[2], k - k2) *
               pochhammer(b[2] - a[3], k2) * pochhammer(b[1] - a[3], k2) /
               (detail::factorial(k - k2) * detail::factorial(k2));
      }
      return sum;
    }
    case 4: {
      const double triple = b[3] + b[2] + b[1] - a[4] - a[3] - a[2];
      const double pair = b[3] + b[2] - a[4] - a[3];
      double sum = 0.0;
      for (int k2 = 0; k2 <= k; ++k2) {
        double inner = 0.0;
        for (int k3 = 0; k3 <= k2; ++k3) {
          inner += pochhammer(pair + k3, k2 - k3) *
                   pochhammer(b[1] - a[3], k2 - k3) *
                   pochhammer(b[3] - a[4], k3) * pochhammer(b[2] - a[4], k3) /
                   (detail::factorial(k2 - k3) * detail::factorial(k3));
        }
        sum += pochhammer(triple + k2, k - k2) *
               pochhammer(b[0] - a[2], k - k2) / detail::factorial(k - k2) *
               inner;
      }
      return sum;
    }
    default:
      throw UnsupportedOrder(p);
  }
}

/// Alternative representation of the p = 3 coefficient built on a
/// terminating 3F2 whose second lower parameter carries a -k shift.
inline double series_coefficient_3f2_shifted(const ParameterSet& params,
                                             int k) {
  if (params.order() != 3) {
    throw DomainError("series_coefficient_3f2_shifted requires p = 3");
  }
  if (k < 0) throw DomainError("coefficient index must be nonnegative");
  const std::vector<double>& a = params.a;
  const std::vector<double>& b = params.b;
  const double pair = b[2] + b[1] - a[3] - a[2];
  const double prefactor = pochhammer(pair, k) * pochhammer(b[0] - a[2], k) /
                           detail::factorial(k);
  const double hyp = terminating_3f2(b[2] - a[3], b[1] - a[3], k, pair,
                                     1.0 + a[2] - b[0] - k);
  return prefactor * hyp;
}

/// Alternative representation of the p = 3 coefficient whose 3F2 lower
/// parameters match the two prefactor bases.
inline double series_coefficient_3f2_matched(const ParameterSet& params,
                                             int k) {
  if (params.order() != 3) {
    throw DomainError("series_coefficient_3f2_matched requires p = 3");
  }
  if (k < 0) throw DomainError("coefficient index must be nonnegative");
  const std::vector<double>& a = params.a;
  const std::vector<double>& b = params.b;
  const double base1 = b[0] + b[2] - a[2] - a[3];
  const double base2 = b[1] + b[2] - a[2] - a[3];
  const double prefactor =
      pochhammer(base1, k) * pochhammer(base2, k) / detail::factorial(k);
  const double hyp =
      terminating_3f2(b[2] - a[2], b[2] - a[3], k, base1, base2);
  return prefactor * hyp;
}

/// Coefficient of z^n in (1-z)^m log(1-z), n > m >= 0.
///
/// Uses c_n = -(1/n) (-1)^m m! / (n-m)_m, which needs no gamma
/// evaluation at all.
inline double log_series_coefficient(int m, long n) {
  if (m < 0 || n <= m) {
    throw DomainError("log_series_coefficient requires n > m >= 0");
  }
  const double magnitude =
      detail::factorial(m) / pochhammer(static_cast<double>(n - m), m);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return -sign * magnitude / static_cast<double>(n);
}

/// Coefficients k = 0..K of one parameter set, in index order.
struct CoefficientTable {
  ParameterSet params;
  std::vector<double> values;
};

inline CoefficientTable coefficient_table(const ParameterSet& params, int K) {
  if (K < 0) throw DomainError("coefficient table size must be nonnegative");
  CoefficientTable table{params, {}};
  table.values.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    table.values.push_back(series_coefficient(params, k));
  }
  return table;
}

}  // namespace gammaratio
