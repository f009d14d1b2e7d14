#pragma once

#include <cmath>

namespace qfdiv {

/// Neumaier-compensated sum: the result is the correctly rounded sum of the
/// addends unless their condition number is extreme, so it does not depend
/// on addition order in practice.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace qfdiv
