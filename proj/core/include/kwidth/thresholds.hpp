#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace kwidth {

struct ConditionCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sufficient conditions at one index.
struct ThresholdVerdict {
  int n = 0;
  ConditionCheck cond_z;
  ConditionCheck cond_n0;
  bool holds() const { return cond_z.holds && cond_n0.holds; }
};

/// q^n/(1 - q^{2n}) <= min{2 q^{sqrt n}/(15 n^2), (8/(3n^2))((2n-1)/(7(n-1)^2) - pi^2/(8n^2))}.
/// Throws Validation for q outside (0, 1) or n < 2.
ConditionCheck check_condition_z(double q, int n);

/// (24/(5(1-q))) q^{sqrt n} + (160/63)((2 sqrt n - 1)/(n(sqrt n - 1))) q/(1-q)^2
///   <= (1/2 + 2q/((1+q^2)(1-q))) ((1-q)/(1+q))^{4/(1-q^2)}.
/// Throws Domain for n < 2.
ConditionCheck check_condition_n0(double q, int n);

ThresholdVerdict check_thresholds(double q, int n);

inline constexpr int kDefaultThresholdCap = 10'000'000;

struct NqResult {
  int n = 0;
  // First index in (n, min(cap, 4n)) where a condition fails again, if any.
  std::optional<int> later_failure;
  // Verdicts for 2..n, filled when tracing is requested.
  std::vector<ThresholdVerdict> trace;
};

/// Smallest n in [2, cap] at which both conditions hold, by a linear scan.
/// Throws NotFound when the scan reaches cap.
NqResult compute_nq(double q, int cap = kDefaultThresholdCap, bool keep_trace = false);

/// Upper bound on q below which the integer-phase case starts at n = 1.
inline constexpr double kIntegerPhaseQ = 0.2;
/// Same for non-integer phases.
inline constexpr double kNonIntegerPhaseQ = 0.193864;

/// beta mod 1 == 0, compared exactly.
bool is_integer_phase(double beta);

/// 1 on the small-q branch, compute_nq(q, cap).n otherwise.
int compute_nq_beta(double q, double beta, int cap = kDefaultThresholdCap);

}  // namespace kwidth
