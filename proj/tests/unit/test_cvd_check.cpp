#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kwidth/cvd_check.hpp"
#include "kwidth/errors.hpp"

using namespace kwidth;

namespace {

// Reference determinants from tests/oracle/derive_reference_values.py.
constexpr double kNegBeta0 = -2.7490707450445169019e-10;
constexpr double kPosBeta0 = 1.0910986919010903094e-6;
constexpr double kNegBeta1 = -5.1709070375633059012e-10;
constexpr double kPosBeta1 = 3.9937516482795610737e-6;

CvdKernel kernel(double beta) { return CvdKernel::neumann(NeumannParams::make(0.21, beta)); }

}  // namespace

TEST(PiRational, ParseAndReduce) {
  EXPECT_EQ(PiRational::parse("13/36"), PiRational::make(13, 36));
  EXPECT_EQ(PiRational::parse("2/4"), PiRational::make(1, 2));
  EXPECT_EQ(PiRational::parse("5"), PiRational::make(5, 1));
  EXPECT_EQ(PiRational::make(3, -6), PiRational::make(-1, 2));
  EXPECT_THROW(PiRational::parse("1/0"), Error);
  EXPECT_THROW(PiRational::parse("abc"), Error);
  EXPECT_THROW(PiRational::parse("1/"), Error);
  EXPECT_EQ(PiRational::make(1, 18).minus_mod2(PiRational::make(13, 36)), PiRational::make(61, 36));
  EXPECT_EQ(PiRational::make(5, 2).minus_mod2(PiRational::make(0, 1)), PiRational::make(1, 2));
  EXPECT_NEAR(PiRational::make(1, 4).radians(), std::numbers::pi / 4, 1e-16);
  EXPECT_EQ(PiRational::make(7, 3).to_string(), "7/3");
  EXPECT_TRUE(PiRational::make(1, 3) < PiRational::make(1, 2));
}

TEST(NodeVectors, Validation) {
  EXPECT_NO_THROW(reference_nodes_negative().validate());
  EXPECT_NO_THROW(reference_nodes_positive().validate());
  NodeVectors even{{PiRational::make(0, 1), PiRational::make(1, 2)},
                   {PiRational::make(0, 1), PiRational::make(1, 2)}};
  EXPECT_THROW(even.validate(), Error);
  NodeVectors unsorted{{PiRational::make(1, 2), PiRational::make(0, 1), PiRational::make(1, 1)},
                       {PiRational::make(0, 1), PiRational::make(1, 2), PiRational::make(1, 1)}};
  EXPECT_THROW(unsorted.validate(), Error);
  NodeVectors outside{{PiRational::make(0, 1)}, {PiRational::make(2, 1)}};
  EXPECT_THROW(outside.validate(), Error);
}

TEST(Determinant, ReferenceConfigurations) {
  const struct {
    double beta;
    NodeVectors nodes;
    double expected;
  } cases[] = {{0.0, reference_nodes_negative(), kNegBeta0},
               {0.0, reference_nodes_positive(), kPosBeta0},
               {1.0, reference_nodes_negative(), kNegBeta1},
               {1.0, reference_nodes_positive(), kPosBeta1}};
  for (const auto& c : cases) {
    const auto det = det_D(kernel(c.beta), c.nodes, 1);
    EXPECT_NEAR(det.value, c.expected, 1e-6 * std::abs(c.expected));
    EXPECT_LT(det.error_estimate, 0.1 * std::abs(det.value));
    EXPECT_EQ(det.certified_sign(), c.expected > 0 ? 1 : -1);
    EXPECT_EQ(det.dimension, 3);
  }
}

TEST(Determinant, EpsilonFlipsOddOrderSign) {
  const auto a = det_D(kernel(0.0), reference_nodes_positive(), 1);
  const auto b = det_D(kernel(0.0), reference_nodes_positive(), -1);
  EXPECT_DOUBLE_EQ(a.value, -b.value);
}

static NodeVectors five_nodes() {
  auto r = [](std::int64_t a, std::int64_t b) { return PiRational::make(a, b); };
  return {{r(0, 1), r(1, 5), r(2, 3), r(1, 1), r(3, 2)}, {r(1, 7), r(1, 2), r(4, 5), r(5, 4), r(7, 4)}};
}

TEST(Determinant, RankThreeKernelVanishesAtOrderFive) {
  EXPECT_GT(det_D(CvdKernel::harmonic(1.0, 0.5), reference_nodes_positive(), 1).certified_sign(), 0);
  const auto det = det_D(CvdKernel::harmonic(1.0, 0.5), five_nodes(), 1);
  EXPECT_LE(std::abs(det.value), det.error_estimate);
  EXPECT_EQ(det.certified_sign(), 0);
  EXPECT_TRUE(det.extended);
}

TEST(Determinant, OneByOneIsKernelValue) {
  const NodeVectors nodes{{PiRational::make(1, 3)}, {PiRational::make(1, 6)}};
  const auto det = det_D(kernel(0.0), nodes, 1);
  const double t = std::numbers::pi / 6, q = 0.21;
  EXPECT_NEAR(det.value, -0.5 * std::log(1 - 2 * q * std::cos(t) + q * q), 1e-15);
}

TEST(Witness, FoundForNeumannKernel) {
  WitnessSearch search;
  search.budget = 20'000;
  const auto w = cvd_witness(kernel(1.0), 1, search);
  EXPECT_EQ(w.det_negative.certified_sign(), -1);
  EXPECT_EQ(w.det_positive.certified_sign(), 1);
  EXPECT_LE(w.evaluations, search.budget);
  EXPECT_NO_THROW(w.negative.validate());
}

TEST(Witness, DeterministicForSeed) {
  WitnessSearch search;
  search.seed = 7;
  const auto a = cvd_witness(kernel(0.0), 1, search);
  const auto b = cvd_witness(kernel(0.0), 1, search);
  EXPECT_EQ(a.negative.x, b.negative.x);
  EXPECT_EQ(a.positive.y, b.positive.y);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Witness, NotFoundForRankThreeKernel) {
  WitnessSearch search;
  search.budget = 300;
  try {
    cvd_witness(CvdKernel::harmonic(1.0, 0.5), 2, search);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
}
