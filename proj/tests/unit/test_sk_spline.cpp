#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kwidth/errors.hpp"
#include "kwidth/extremal_widths.hpp"
#include "kwidth/sk_spline.hpp"
#include "kwidth/thresholds.hpp"

using namespace kwidth;
constexpr double kPi = std::numbers::pi;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> direct_normalized(const NeumannParams& p, int n, double y) {
  const auto sol = solve_fundamental_spline(KernelSpec::neumann(p), n, y);
  std::vector<double> out;
  for (int k = 1; k <= 2 * n; ++k) {
    out.push_back((k % 2 == 1 ? 1.0 : -1.0) * sol.midpoint_derivs[k - 1] / derivative_scale(p, n));
  }
  return out;
}

}  // namespace

TEST(Partition, NodesAndMidpoints) {
  const Partition2n part(3);
  EXPECT_DOUBLE_EQ(part.node(0), 0.0);
  EXPECT_DOUBLE_EQ(part.node(6), 2 * kPi);
  EXPECT_DOUBLE_EQ(part.midpoint(1), kPi / 6);
  EXPECT_THROW(part.midpoint(0), Error);
  EXPECT_THROW(part.node(7), Error);
  EXPECT_THROW(Partition2n(0), Error);
}

TEST(ShiftPoint, RejectsOutOfRangeShift) {
  const auto p = NeumannParams::make(0.3, 0.2);
  EXPECT_THROW(ShiftPoint::at(p, 4, kPi / 4), Error);
  EXPECT_THROW(ShiftPoint::at(p, 4, -0.01), Error);
  EXPECT_TRUE(ShiftPoint::at(NeumannParams::make(0.3, 0.0), 4, 0.0).degenerate());
}

TEST(Eigen, FiniteSumMatchesFourierSplit) {
  const auto p = NeumannParams::make(0.3, 0.7);
  const auto spec = KernelSpec::neumann(p);
  const int n = 5;
  for (int j = 0; j < n; ++j) {
    const auto a = lambda_finite_sum(spec, n, n - j, 0.1);
    const auto b = lambda_fourier(p, n, j, 0.1);
    EXPECT_LE(std::abs(a - b), 1e-12) << j;
  }
}

TEST(Eigen, AgreementOnSmallGrid) {
  for (double q : {0.2, 0.5}) {
    for (double beta : {0.0, 1.0, 0.3}) {
      for (int n = 2; n <= 8; ++n) {
        const auto p = NeumannParams::make(q, beta);
        const auto spec = KernelSpec::neumann(p);
        for (double y : {0.0, solve_theta(p, n).y0(), 0.3 * kPi / n}) {
          if (ShiftPoint::at(p, n, y).degenerate()) {
            EXPECT_THROW(lambda_fourier(p, n, 0, y), Error);
            continue;
          }
          for (int j = 0; j < n; ++j) {
            const auto a = lambda_finite_sum(spec, n, n - j, y);
            EXPECT_LE(std::abs(a - lambda_fourier(p, n, j, y)), 1e-11);
          }
          EXPECT_LE(std::abs(lambda_finite_sum(spec, n, n, y).imag()), 1e-12);
        }
      }
    }
  }
}

TEST(Eigen, ModulusMarginAndScaledTerms) {
  const auto p = NeumannParams::make(0.2, 0.5);
  const int n = 40;
  const auto eigen = decompose_eigenvalues(p, n, ShiftPoint::at_root(solve_theta(p, n)));
  ASSERT_EQ(eigen.terms.size(), static_cast<std::size_t>(n));
  EXPECT_GE(eigen.modulus_margin(), 0.9);
  EXPECT_EQ(eigen.terms[0].r1.imag(), 0.0);
  for (const auto& t : eigen.terms) {
    EXPECT_NEAR(t.modulus - t.a - t.b, t.excess, 1e-12 * t.modulus);
  }
}

TEST(Spline, InterpolatesDeltaAndSumsToZero) {
  const auto p = NeumannParams::make(0.4, 0.6);
  const int n = 4;
  const auto sol = solve_fundamental_spline(KernelSpec::neumann(p), n, 0.2);
  EXPECT_LE(sol.residual, 1e-10);
  double total = 0;
  for (int m = 1; m <= 2 * n; ++m) total += sol.alpha[m];
  EXPECT_NEAR(total, 0.0, 1e-12 * max_abs(sol.alpha));
  for (int k = 1; k <= 2 * n; ++k) {
    EXPECT_DOUBLE_EQ(sol.derivative_at(Partition2n(n).midpoint(k)), sol.midpoint_derivs[k - 1]);
  }
}

TEST(Spline, ThreeRepresentationsAgree) {
  for (double q : {0.2, 0.5}) {
    for (double beta : {0.0, 1.0, 0.3}) {
      for (int n = 2; n <= 8; ++n) {
        const auto p = NeumannParams::make(q, beta);
        for (double y : {0.0, solve_theta(p, n).y0(), 0.3 * kPi / n}) {
          const auto shift = ShiftPoint::at(p, n, y);
          if (shift.degenerate()) continue;
          const auto eigen = decompose_eigenvalues(p, n, shift);
          const auto direct = direct_normalized(p, n, y);
          const auto l1 = lemma1_brackets(eigen);
          const auto l2 = lemma2_ledgers(p, eigen);
          const double scale = max_abs(direct);
          for (int k = 0; k < 2 * n; ++k) {
            EXPECT_LE(std::abs(direct[k] - l1[k]), 1e-9 * scale) << q << " " << beta << " " << n;
            EXPECT_LE(std::abs(l2[k].bracket - l1[k]), 1e-9 * scale);
          }
        }
      }
    }
  }
}

TEST(Spline, SingleMidpointEntryPoints) {
  const auto p = NeumannParams::make(0.3, 0.3);
  const int n = 5;
  const auto shift = ShiftPoint::at_root(solve_theta(p, n));
  const auto sol = solve_fundamental_spline(KernelSpec::neumann(p), n, shift.y);
  for (int k = 1; k <= 2 * n; ++k) {
    const double d = sol.midpoint_derivs[k - 1];
    EXPECT_NEAR(derivative_lemma1(p, n, shift, k), d, 1e-9 * std::abs(d));
    EXPECT_NEAR(derivative_lemma2(p, n, shift, k).value, d, 1e-9 * std::abs(d));
  }
  EXPECT_THROW(derivative_lemma1(p, n, shift, 0), Error);
}

TEST(Spline, Lemma3BoundFromThreshold) {
  const auto p = NeumannParams::make(0.2, 0.0);
  const int nq = compute_nq(0.2).n;
  for (int n = nq; n < nq + 5; ++n) {
    const auto check = lemma3_bound(p, n);
    EXPECT_TRUE(check.holds()) << n;
    EXPECT_DOUBLE_EQ(check.rhs, lemma3_rhs(0.2, n));
  }
}

TEST(Spline, GammaLedgerAddsUp) {
  const auto p = NeumannParams::make(0.2, 0.5);
  const int n = 20;
  const auto eigen = decompose_eigenvalues(p, n, ShiftPoint::at_root(solve_theta(p, n)));
  const auto l1 = lemma1_brackets(eigen);
  for (const auto& led : lemma2_ledgers(p, eigen)) {
    double sum = led.pq_term, abs_sum = 0;
    for (double g : led.gamma) {
      sum += g;
      abs_sum += std::abs(g);
    }
    EXPECT_NEAR(sum, led.bracket, 1e-14);
    EXPECT_NEAR(abs_sum, led.lemma3_lhs, 1e-15);
    EXPECT_EQ(led.delta.size(), 4u);
    EXPECT_NEAR(led.bracket, l1[led.k - 1], 1e-12);
  }
}

TEST(Cy2n, HoldsFromThreshold) {
  for (double beta : {0.0, 1.0, 0.5}) {
    for (int n : {13, 16}) {
      const auto v = verify_Cy2n(NeumannParams::make(0.2, beta), n);
      EXPECT_TRUE(v.holds) << beta << " " << n;
      EXPECT_EQ(v.path, DerivativePath::Lemma1);
      ASSERT_TRUE(v.modulus_margin.has_value());
      for (int s : v.pattern) EXPECT_EQ(s, 1);
    }
  }
}

TEST(Cy2n, PathsGiveSameVerdict) {
  const auto p = NeumannParams::make(0.2, 0.3);
  for (auto path : {DerivativePath::Direct, DerivativePath::Lemma1, DerivativePath::Lemma2}) {
    const auto v = verify_Cy2n(p, 6, {std::nullopt, path});
    EXPECT_TRUE(v.holds);
    EXPECT_EQ(v.path, path);
  }
}

TEST(Cy2n, DegenerateShift) {
  // sin(ny - beta pi/2) = 0 makes lambda_n vanish: no fundamental spline exists.
  const auto p = NeumannParams::make(0.2, 0.0);
  try {
    verify_Cy2n(p, 4, {0.0, DerivativePath::Auto});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
  }
  try {
    verify_Cy2n(p, 4, {0.0, DerivativePath::Lemma1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SignDegenerate);
  }
  EXPECT_LE(std::abs(lambda_finite_sum(KernelSpec::neumann(p), 4, 4, 0.0)), 1e-15);
}

TEST(Cy2n, ExplicitShiftOffRoot) {
  const auto v = verify_Cy2n(NeumannParams::make(0.2, 0.5), 13, {0.01, DerivativePath::Auto});
  EXPECT_EQ(v.path, DerivativePath::Lemma1);
  EXPECT_DOUBLE_EQ(v.y, 0.01);
  ASSERT_TRUE(v.modulus_margin.has_value());
  EXPECT_EQ(v.pattern.size(), 26u);
}

TEST(Cy2n, GeneralSpecDirectPath) {
  const double q = 0.2;
  const KernelSpec spec([q](std::int64_t k) { return std::pow(q, static_cast<double>(k)) / k; },
                        [q](std::int64_t k) { return std::pow(q, static_cast<double>(k + 1)) / (1 - q); },
                        0.5);
  const auto p = NeumannParams::make(q, 0.5);
  const auto y = solve_theta(p, 13).y0();
  EXPECT_TRUE(verify_Cy2n(spec, 13, y).holds);
  EXPECT_THROW(verify_Cy2n(spec, 13, 1.0), Error);
}

TEST(Cy2n, ClassifySigns) {
  auto v = classify_signs({-1.0, 2.0, -3.0, 4.0}, 1e-9);
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.epsilon, 1);
  v = classify_signs({1.0, -2.0, 0.0, -4.0}, 1e-9);
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.epsilon, -1);
  EXPECT_EQ(v.pattern, (std::vector<int>{1, 1, 0, 1}));
  v = classify_signs({-1.0, 2.0, 3.0, 4.0}, 1e-9);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.pattern, (std::vector<int>{1, 1, -1, 1}));
}

TEST(Cy2n, Errors) {
  try {
    lemma2_ledgers(NeumannParams::make(0.2, 0.3),
                   decompose_eigenvalues(NeumannParams::make(0.2, 0.3), 1,
                                         ShiftPoint::at(NeumannParams::make(0.2, 0.3), 1, 0.5)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  try {
    lambda_fourier(NeumannParams::make(0.2, 0.0), 3, 0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SignDegenerate);
  }
}
