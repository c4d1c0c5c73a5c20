#pragma once

#include <cmath>

namespace gammaratio {

/// Neumaier (Kahan-Babuska) compensated accumulator.
///
/// Tracks the rounding error of each addition with a two-sum
/// transformation and folds it back in at read time, so a short sum of
/// large, cancelling terms keeps nearly full precision.
struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + compensation; }
};

}  // namespace gammaratio
