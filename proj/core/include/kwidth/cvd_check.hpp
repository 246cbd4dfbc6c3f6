#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kwidth/double_double.hpp"
#include "kwidth/kernel.hpp"

namespace kwidth {

/// The angle (num/den) * pi, kept exact.
struct PiRational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  /// Reduced fraction; throws Validation for den == 0.
  static PiRational make(std::int64_t num, std::int64_t den);
  /// Parses "13/36" or "5" (meaning 5 pi). Throws Validation on bad input.
  static PiRational parse(const std::string& text);

  double radians() const;
  /// Difference reduced into [0, 2) turns of pi.
  PiRational minus_mod2(const PiRational& other) const;
  std::string to_string() const;

  friend bool operator==(const PiRational&, const PiRational&) = default;
};

bool operator<(const PiRational& a, const PiRational& b);

/// Node sets 0 <= x_1 < ... < x_{2l+1} < 2pi and the same for y.
struct NodeVectors {
  std::vector<PiRational> x;
  std::vector<PiRational> y;

  /// Throws Validation unless both vectors share an odd length and are
  /// strictly increasing inside [0, 2pi).
  void validate() const;
  int dimension() const { return static_cast<int>(x.size()); }
};

/// Kernel evaluated at rational multiples of pi.
struct CvdKernel {
  std::string name;
  std::function<double(const PiRational&)> value;
  // Optional double-double evaluation used to settle small determinants.
  std::function<DoubleDouble(const PiRational&)> value_dd;
  double entry_error = 1e-16;     // absolute error bound of value()
  double entry_error_dd = 1e-30;  // same for value_dd()

  static CvdKernel neumann(const NeumannParams& params);
  /// constant + amplitude * cos(t): rank three, so every determinant of order 5 vanishes.
  static CvdKernel harmonic(double constant, double amplitude);
};

struct DetResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool extended = false;  // recomputed in double-double
  int dimension = 0;

  /// Sign certified by the error estimate, 0 if inconclusive.
  int certified_sign() const;
};

/// det(epsilon * phi(x_i - y_j)) with full pivoting. The error estimate is
/// entry_error * sum |cofactors| plus a rounding term on the Hadamard bound.
/// Falls back to double-double when |det| < 100 * estimate and the kernel
/// provides value_dd.
DetResult det_D(const CvdKernel& kernel, const NodeVectors& nodes, int epsilon = 1);

/// The two fixed configurations that defeat CVD_{2n} at q = 0.21.
NodeVectors reference_nodes_negative();  // D_3 < 0
NodeVectors reference_nodes_positive();  // D_3 > 0

struct CvdWitness {
  NodeVectors negative;  // certified D < 0 for epsilon = +1
  NodeVectors positive;  // certified D > 0 for epsilon = +1
  DetResult det_negative;
  DetResult det_positive;
  std::int64_t evaluations = 0;
};

struct WitnessSearch {
  std::int64_t budget = 100'000;
  std::uint64_t seed = 1;
  std::int64_t grid = 720;  // nodes on multiples of pi/grid
  std::vector<NodeVectors> seeds;
};

/// Random plus local search for two node configurations whose determinants
/// have opposite certified signs; a sign change defeats both epsilon = +-1.
/// Throws NotFound when the budget runs out.
CvdWitness cvd_witness(const CvdKernel& kernel, int l, const WitnessSearch& search = {});

}  // namespace kwidth
