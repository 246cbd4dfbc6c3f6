#pragma once

#include <cmath>

namespace kwidth {

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays exact when an addend is larger in magnitude
/// than the running sum, which happens in alternating kernel series.
template <typename Value>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Value initial) : sum_(initial) {}

  CompensatedSum& operator+=(Value value) {
    const Value t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator-=(Value value) { return *this += -value; }

  Value value() const { return sum_ + compensation_; }

 private:
  Value sum_{0};
  Value compensation_{0};
};

}  // namespace kwidth
