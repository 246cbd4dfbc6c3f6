#pragma once

#include <cmath>
#include <cstdint>

#include "kwidth/compensated_sum.hpp"
#include "kwidth/errors.hpp"

namespace kwidth::detail {

// Sums term(v, ratio^v) for v = 0, 1, ... where |term(v, p)| <= p. Stops once
// the geometric remainder ratio^{v+1}/(1 - ratio) drops below tol.
template <typename Term>
double geometric_series(double ratio, double tol, Term term,
                        std::int64_t max_terms = 10'000'000) {
  CompensatedSum<double> sum;
  double power = 1.0;
  const double denom = 1.0 - ratio;
  for (std::int64_t v = 0;; ++v) {
    if (v >= max_terms) {
      throw Error(ErrorKind::TolUnreachable, "geometric series did not converge within cap");
    }
    sum += term(v, power);
    power *= ratio;
    if (power / denom <= tol) break;
  }
  return sum.value();
}

}  // namespace kwidth::detail
