#include "kwidth/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kwidth/errors.hpp"
#include "kwidth/kernel.hpp"

namespace kwidth {
namespace {

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::Validation, "q out of (0,1)");
}

}  // namespace

ConditionCheck check_condition_z(double q, int n) {
  require_q(q);
  if (n < 2) throw Error(ErrorKind::Validation, "condition requires n >= 2");
  const double nn = static_cast<double>(n);
  const double n2 = nn * nn;
  const double qn = std::pow(q, nn);
  const double first = 2.0 * std::pow(q, std::sqrt(nn)) / (15.0 * n2);
  const double second = 8.0 / (3.0 * n2) *
                        ((2.0 * nn - 1.0) / (7.0 * (nn - 1.0) * (nn - 1.0)) -
                         std::numbers::pi * std::numbers::pi / (8.0 * n2));
  ConditionCheck check;
  check.lhs = qn / (1.0 - qn * qn);
  check.rhs = std::min(first, second);
  check.holds = check.lhs <= check.rhs;
  return check;
}

ConditionCheck check_condition_n0(double q, int n) {
  require_q(q);
  if (n < 2) throw Error(ErrorKind::Domain, "condition undefined for n < 2 (sqrt(n) - 1 <= 0)");
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(nn);
  const double one_minus = 1.0 - q;
  ConditionCheck check;
  check.lhs = 24.0 / (5.0 * one_minus) * std::pow(q, root) +
              160.0 / 63.0 * ((2.0 * root - 1.0) / (nn * (root - 1.0))) * q / (one_minus * one_minus);
  check.rhs = pq_lower_bound(q);
  check.holds = check.lhs <= check.rhs;
  return check;
}

ThresholdVerdict check_thresholds(double q, int n) {
  return ThresholdVerdict{n, check_condition_z(q, n), check_condition_n0(q, n)};
}

NqResult compute_nq(double q, int cap, bool keep_trace) {
  require_q(q);
  if (cap < 2) throw Error(ErrorKind::Validation, "cap must be at least 2");
  NqResult result;
  for (int n = 2; n <= cap; ++n) {
    const ThresholdVerdict verdict = check_thresholds(q, n);
    if (keep_trace) result.trace.push_back(verdict);
    if (verdict.holds()) {
      result.n = n;
      break;
    }
  }
  if (result.n == 0) {
    throw Error(ErrorKind::NotFound,
                "no n in [2, " + std::to_string(cap) + "] satisfies both conditions for q = " +
                    std::to_string(q));
  }
  const long long limit = std::min<long long>(cap, 4LL * result.n);
  for (long long n = result.n + 1; n < limit; ++n) {
    if (!check_thresholds(q, static_cast<int>(n)).holds()) {
      result.later_failure = static_cast<int>(n);
      break;
    }
  }
  return result;
}

bool is_integer_phase(double beta) {
  if (!std::isfinite(beta)) throw Error(ErrorKind::Validation, "beta must be finite");
  return std::fmod(beta, 1.0) == 0.0;
}

int compute_nq_beta(double q, double beta, int cap) {
  require_q(q);
  const bool integer = is_integer_phase(beta);
  if ((integer && q <= kIntegerPhaseQ) || (!integer && q <= kNonIntegerPhaseQ)) return 1;
  return compute_nq(q, cap).n;
}

}  // namespace kwidth
