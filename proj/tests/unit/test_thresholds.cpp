#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kwidth/errors.hpp"
#include "kwidth/kernel.hpp"
#include "kwidth/thresholds.hpp"

using namespace kwidth;

namespace {

// Independent restatement of both conditions in plain arithmetic.
bool oracle_holds(double q, int n) {
  const double pi = std::numbers::pi;
  const double rn = std::sqrt(static_cast<double>(n));
  const double nn = static_cast<double>(n) * n;
  const double lhs_z = std::pow(q, n) / (1 - std::pow(q, 2 * n));
  const double a = 2 * std::pow(q, rn) / (15 * nn);
  const double b = 8 / (3 * nn) * ((2.0 * n - 1) / (7.0 * (n - 1) * (n - 1)) - pi * pi / (8 * nn));
  const double lhs_n0 = 24 / (5 * (1 - q)) * std::pow(q, rn) +
                        160.0 / 63 * ((2 * rn - 1) / (n * (rn - 1))) * q / ((1 - q) * (1 - q));
  const double rhs_n0 = (0.5 + 2 * q / ((1 + q * q) * (1 - q))) *
                        std::pow((1 - q) / (1 + q), 4 / (1 - q * q));
  return lhs_z <= std::min(a, b) && lhs_n0 <= rhs_n0;
}

int oracle_nq(double q) {
  int n = 2;
  while (!oracle_holds(q, n)) ++n;
  return n;
}

}  // namespace

TEST(Thresholds, PinnedValues) {
  EXPECT_EQ(oracle_nq(0.2), 13);
  EXPECT_EQ(compute_nq(0.2).n, 13);
  EXPECT_EQ(oracle_nq(0.5), 1717);
  EXPECT_EQ(compute_nq(0.5).n, 1717);
}

TEST(Thresholds, MatchesOracleAcrossQ) {
  const std::pair<double, int> table[] = {{0.05, 4},  {0.1, 5},   {0.15, 7},  {0.25, 22},
                                          {0.3, 42},  {0.35, 87}, {0.4, 201}, {0.45, 537}};
  for (auto [q, expected] : table) {
    EXPECT_EQ(oracle_nq(q), expected) << q;
    EXPECT_EQ(compute_nq(q).n, expected) << q;
  }
}

TEST(Thresholds, EveryEarlierIndexFails) {
  for (double q : {0.05, 0.2, 0.3}) {
    const auto r = compute_nq(q, kDefaultThresholdCap, true);
    ASSERT_EQ(static_cast<int>(r.trace.size()), r.n - 1);
    for (const auto& v : r.trace) {
      if (v.n < r.n) EXPECT_FALSE(v.holds()) << q << " " << v.n;
    }
    EXPECT_TRUE(r.trace.back().holds());
    EXPECT_EQ(r.trace.back().n, r.n);
  }
}

TEST(Thresholds, ConditionsAreMonotoneNearThreshold) {
  const auto r = compute_nq(0.2);
  EXPECT_FALSE(r.later_failure.has_value());
  for (int n = r.n; n < r.n + 40; ++n) EXPECT_TRUE(check_thresholds(0.2, n).holds()) << n;
}

TEST(Thresholds, ConditionValues) {
  const auto c = check_condition_n0(0.2, 13);
  EXPECT_NEAR(c.rhs, pq_lower_bound(0.2), 0.0);
  EXPECT_TRUE(c.holds);
  EXPECT_LE(c.lhs, c.rhs);
  EXPECT_FALSE(check_condition_z(0.2, 3).holds);
}

TEST(Thresholds, PhaseDependentIndex) {
  EXPECT_TRUE(is_integer_phase(2.0));
  EXPECT_TRUE(is_integer_phase(-3.0));
  EXPECT_FALSE(is_integer_phase(0.5));
  EXPECT_EQ(compute_nq_beta(0.2, 1.0), 1);
  EXPECT_EQ(compute_nq_beta(0.15, 0.5), 1);
  EXPECT_EQ(compute_nq_beta(0.2, 0.5), 13);
  EXPECT_EQ(compute_nq_beta(0.193864, 0.5), 1);
  EXPECT_EQ(compute_nq_beta(0.3, 1.0), 42);
}

TEST(Thresholds, Errors) {
  EXPECT_THROW(check_condition_z(1.5, 4), Error);
  try {
    check_condition_n0(0.3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  try {
    compute_nq(0.9, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
}
