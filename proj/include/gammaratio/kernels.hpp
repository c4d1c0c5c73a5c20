#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammaratio/compensated.hpp"
#include "gammaratio/errors.hpp"

namespace gammaratio {

/// Proximity at which a gamma argument counts as sitting on a pole.
inline constexpr double kPoleTolerance = 1e-8;

/// A nonzero real stored as (log of magnitude, sign).
///
/// Products of gamma values at shifted arguments overflow binary64 long
/// before the ratios of interest do; keeping the logarithm and the sign
/// separately makes those products exact-rank arithmetic. Zero is not
/// representable; operations that can produce zero return an optional.
struct SignedLog {
  double log_abs = 0.0;
  int sign = +1;

  /// sign * exp(log_abs). May overflow to +/-inf for large log_abs.
  double value() const { return sign * std::exp(log_abs); }

  friend SignedLog operator*(const SignedLog& x, const SignedLog& y) {
    return SignedLog{x.log_abs + y.log_abs, x.sign * y.sign};
  }
};

/// The problem instance: numerator shifts a_1..a_{p+1}, denominator
/// shifts b_1..b_p, and the derived excess s = sum(b) - sum(a).
///
/// The excess is accumulated left to right over b then a, once, at
/// construction; every consumer reads the stored value so repeated
/// evaluations are bit-identical.
struct ParameterSet {
  std::vector<double> a;
  std::vector<double> b;
  double excess = 0.0;

  ParameterSet(std::vector<double> a_in, std::vector<double> b_in)
      : a(std::move(a_in)), b(std::move(b_in)) {
    if (b.empty() || a.size() != b.size() + 1) {
      throw DomainError("parameter lists must satisfy len(a) = len(b) + 1 >= 2");
    }
    double s = 0.0;
    for (double bj : b) s += bj;
    for (double ai : a) s -= ai;
    excess = s;
  }

  int order() const { return static_cast<int>(b.size()); }
};

/// The nonpositive integer nearest x, when x lies within tol of one.
inline std::optional<long> snap_nonpositive_integer(double x,
                                                    double tol = kPoleTolerance) {
  const double r = std::round(x);
  if (r <= 0.0 && std::abs(x - r) <= tol) return static_cast<long>(r);
  return std::nullopt;
}

/// Rising factorial x(x+1)...(x+m-1); empty product is 1.
///
/// Returns exactly 0 when some factor is zero. Throws RangeError if the
/// running product overflows; callers that expect large values should
/// use pochhammer_signed_log instead.
inline double pochhammer(double x, int m) {
  if (m < 0) throw DomainError("pochhammer order must be nonnegative");
  for (int i = 0; i < m; ++i) {
    if (x + i == 0.0) return 0.0;
  }
  double product = 1.0;
  for (int i = 0; i < m; ++i) product *= x + i;
  if (!std::isfinite(product)) {
    throw RangeError("pochhammer(" + std::to_string(x) + ", " +
                     std::to_string(m) + ") overflows binary64");
  }
  return product;
}

/// Rising factorial in signed-log form; empty optional when the product
/// is exactly zero.
inline std::optional<SignedLog> pochhammer_signed_log(double x, int m) {
  if (m < 0) throw DomainError("pochhammer order must be nonnegative");
  for (int i = 0; i < m; ++i) {
    if (x + i == 0.0) return std::nullopt;
  }
  SignedLog out{0.0, +1};
  for (int i = 0; i < m; ++i) {
    const double factor = x + i;
    out.log_abs += std::log(std::abs(factor));
    if (factor < 0.0) out.sign = -out.sign;
  }
  return out;
}

namespace detail {

// sin(pi * x) with the argument reduced to [-1/2, 1/2] first, so the
// result keeps full relative accuracy arbitrarily close to integers.
inline double sin_pi(double x) {
  const double k = std::round(x);
  const double r = x - k;  // exact: |r| <= 1/2 and k, x share scale
  const double s = std::sin(3.14159265358979323846 * r);
  return (static_cast<long long>(k) % 2 == 0) ? s : -s;
}

// Lanczos(g = 7, 9 terms) evaluation of log Gamma(x) for x >= 0.5.
inline double log_gamma_lanczos(double x) {
  static constexpr double kCoefficients[9] = {
      0.99999999999980993227684700473478,
      676.520368121885098567009190444019,
      -1259.13921672240287047156078755283,
      771.3234287776530788486528258894,
      -176.61502916214059906584551354,
      12.507343278686904814458936853,
      -0.13857109526572011689554707,
      9.984369578019570859563e-6,
      1.50563273514931155834e-7};
  static constexpr double kLogRootTwoPi = 0.91893853320467274178032973640562;

  const double z = x - 1.0;
  double series = kCoefficients[0];
  for (int k = 1; k <= 8; ++k) series += kCoefficients[k] / (z + k);
  const double t = z + 7.5;
  return (z + 0.5) * std::log(t) - t + kLogRootTwoPi + std::log(series);
}

}  // namespace detail

/// log|Gamma(x)| and the sign of Gamma(x).
///
/// Lanczos approximation for x >= 0.5, reflection below. Arguments
/// within kPoleTolerance of a nonpositive integer are poles.
inline SignedLog signed_log_gamma(double x) {
  if (snap_nonpositive_integer(x)) {
    throw PoleError("x", x);
  }
  if (x >= 0.5) {
    return SignedLog{detail::log_gamma_lanczos(x), +1};
  }
  // Gamma(x) Gamma(1-x) = pi / sin(pi x)
  static constexpr double kLogPi = 1.1447298858494001741434273513531;
  const double s = detail::sin_pi(x);
  const double log_abs =
      kLogPi - std::log(std::abs(s)) - detail::log_gamma_lanczos(1.0 - x);
  return SignedLog{log_abs, s < 0.0 ? -1 : +1};
}

/// Direct evaluation of
///   Gamma(a_1+n)...Gamma(a_{p+1}+n) / (Gamma(b_1+n)...Gamma(b_p+n) Gamma(n-s))
/// through compensated summation of signed log-gammas. This is the
/// ground-truth side of every series comparison.
inline double oracle_ratio(const ParameterSet& params, long n) {
  if (n <= 0) throw DomainError("oracle_ratio requires a positive integer n");

  const auto factor = [](double shift, long nn, const std::string& label) {
    const double argument = shift + static_cast<double>(nn);
    if (snap_nonpositive_integer(argument)) throw PoleError(label, argument);
    return signed_log_gamma(argument);
  };

  CompensatedSum log_sum;
  int sign = +1;
  for (std::size_t i = 0; i < params.a.size(); ++i) {
    const SignedLog g =
        factor(params.a[i], n, "a_" + std::to_string(i + 1) + "+n");
    log_sum.add(g.log_abs);
    sign *= g.sign;
  }
  for (std::size_t j = 0; j < params.b.size(); ++j) {
    const SignedLog g =
        factor(params.b[j], n, "b_" + std::to_string(j + 1) + "+n");
    log_sum.add(-g.log_abs);
    sign *= g.sign;
  }
  const SignedLog g = factor(-params.excess, n, "-s+n");
  log_sum.add(-g.log_abs);
  sign *= g.sign;

  return sign * std::exp(log_sum.value());
}

}  // namespace gammaratio
