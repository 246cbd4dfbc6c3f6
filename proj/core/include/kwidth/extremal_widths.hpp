#pragma once

#include <cmath>
#include <map>
#include <shared_mutex>
#include <tuple>

#include "kwidth/kernel.hpp"

namespace kwidth {

/// Which half of [0, 1) holds theta_n; follows from the sign structure of
/// G_q and H_q once beta is reduced modulo 4.
enum class RootBranch {
  HalfClass,  // n*y0 in [pi/2, pi): beta in [0,1) or [2,3)
  ZeroClass,  // n*y0 in [0, pi/2): beta in [1,2) or [3,4)
};

RootBranch classify_branch(double beta);

/// The root theta_n in [0, 1) of
///   sum_{v>=0} q^{2vn}/(2v+1) cos((2v+1) theta pi - beta pi/2) = 0.
struct ThetaRoot {
  double q = 0.0;
  double beta = 0.0;
  int n = 0;
  double theta = 0.0;
  double residual = 0.0;
  RootBranch branch = RootBranch::HalfClass;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  bool exact = false;  // closed-form root (beta integer), no bisection

  // cos(theta pi - beta pi/2), recovered from the root identity
  //   cos(theta pi - beta pi/2) = -sum_{v>=1} q^{2vn}/(2v+1) cos(...)
  // which is accurate relative to its own O(q^{2n}) size; plain cos() of the
  // rounded theta is only accurate to ~1e-16 absolute.
  double cos_offset = 0.0;
  double cos_offset_scaled = 0.0;  // cos_offset / q^{2n}
  int sin_sign = 1;                // sign of sin(theta pi - beta pi/2)

  double y0() const;
};

/// Left-hand side of the theta equation.
double theta_equation(const NeumannParams& params, int n, double theta);

/// Bisection on the branch bracket; trivial roots (beta integer) returned
/// exactly. Throws BracketFailure if the bracket lost its sign change.
ThetaRoot solve_theta(const NeumannParams& params, int n);

/// Phi_{q,beta,n}(t) = (N_{q,beta} * sign sin n.)(t)
///   = (4/pi) sum_{v>=0} q^{(2v+1)n}/(n(2v+1)^2) sin((2v+1)nt - beta pi/2).
double eval_phi(const NeumannParams& params, int n, double t, const EvalPolicy& policy = {});

inline constexpr double kGammaBound = 16.0 / (9.0 * 3.141592653589793238462643383279502884);

struct WidthReport {
  double q = 0.0;
  double beta = 0.0;
  int n = 0;
  ThetaRoot root;
  double width = 0.0;  // d_{2n} = d_{2n-1} = E_n for n >= n_{q,beta}
  double y0 = 0.0;
  double gamma_n = 0.0;
  double sandwich_lo = 0.0;  // (q^n/n)(1 - (4/9) q^{2n}/(1 - q^{2n}))
  double sandwich_hi = 0.0;  // (q^n/n)(1 + (4/9) q^{2n}/(1 - q^{2n}))

  // ((pi/4) width n / q^n - 1) / q^{2n}, evaluated without cancellation.
  // The sandwich band is narrower than one ulp of width once q^{2n} < 1e-16,
  // so the band test is carried out on this quantity.
  double deviation_scaled = 0.0;

  /// (pi/4) width lies in [sandwich_lo, sandwich_hi].
  bool sandwich_holds() const;
  bool gamma_within_bound() const { return std::abs(gamma_n) <= kGammaBound; }
};

WidthReport exact_width(const NeumannParams& params, int n);
WidthReport exact_width(const NeumannParams& params, const ThetaRoot& root);

struct CosBound {
  double lhs = 0.0;  // |cos(theta_n pi - beta pi/2)|
  double rhs = 0.0;  // q^{2n} / (3(1 - q^{2n}))
  bool holds() const { return lhs <= rhs + 1e-13; }
};

CosBound theta_cos_bound(const ThetaRoot& root);
CosBound theta_cos_bound(const NeumannParams& params, int n);

/// Memo of solved roots keyed by (q, beta, n); safe for concurrent use.
class ThetaCache {
 public:
  ThetaRoot get(const NeumannParams& params, int n);
  std::size_t size() const;

 private:
  using Key = std::tuple<double, double, int>;
  mutable std::shared_mutex mutex_;
  std::map<Key, ThetaRoot> roots_;
};

}  // namespace kwidth
