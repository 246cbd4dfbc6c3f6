#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "kwidth/extremal_widths.hpp"
#include "kwidth/kernel.hpp"

namespace kwidth {

/// Uniform partition x_k = k pi/n of [0, 2pi] with midpoints
/// t_k = k pi/n - pi/(2n), k = 1..2n.
struct Partition2n {
  int n = 1;

  explicit Partition2n(int n);
  double node(int k) const;      // k = 0..2n
  double midpoint(int k) const;  // k = 1..2n
};

/// A shift y together with the phase n*y - beta*pi/2 it induces.
///
/// at_root() carries the cosine recovered from the theta equation, which is
/// accurate relative to its O(q^{2n}) magnitude; at() evaluates it directly.
struct ShiftPoint {
  double y = 0.0;
  double phase_turns = 0.0;  // n*y/pi
  double cos_phase = 0.0;    // cos(n*y - beta*pi/2)
  double sin_abs = 1.0;      // |sin(n*y - beta*pi/2)|
  int sign = 1;              // sign sin(n*y - beta*pi/2)

  /// Throws Validation unless 0 <= y < pi/n.
  static ShiftPoint at(const NeumannParams& params, int n, double y);
  static ShiftPoint at_root(const ThetaRoot& root);

  bool degenerate() const { return sin_abs < kDegenerateSin; }
  static constexpr double kDegenerateSin = 1e-14;
};

/// lambda_l(y) = (1/n) sum_{v=1}^{2n} e^{i l v pi/n} Psi_{beta,1}(y - v pi/n),
/// each kernel value certified to policy.abs_tol / (2n).
std::complex<double> lambda_finite_sum(const KernelSpec& spec, int n, int l, double y,
                                       const EvalPolicy& policy = {1e-16, 1'000'000});

/// Fourier split of lambda_{n-j}, stored divided by rho_j = q^{n-j}/n^2 so
/// that nothing underflows at large n:
///   lambda_{n-j} / rho_j = e^{-ijy}((a + b) s + r1 + r2 + r3),
///   a = n^2/(n-j)^2, b = q^{2j} n^2/(n+j)^2, s = sign sin(ny - beta pi/2).
struct EigenTerm {
  int j = 0;
  double a = 0.0;
  double b = 0.0;
  std::complex<double> r1;  // aliased frequencies (2m+1)n - j and (2m-1)n + j
  std::complex<double> r2;  // i (b - a) cos(ny - beta pi/2)
  std::complex<double> r3;  // (a + b)(|sin| - 1) s
  double modulus = 0.0;     // |lambda_{n-j}| / rho_j
  double excess = 0.0;      // modulus - a - b, i.e. R_j / rho_j

  std::complex<double> r() const { return r1 + r2 + r3; }
};

struct EigenDecomposition {
  double q = 0.0;
  double beta = 0.0;
  int n = 0;
  ShiftPoint shift;
  std::vector<EigenTerm> terms;  // j = 0..n-1

  /// rho_j = q^{n-j}/n^2.
  double scale(int j) const;
  /// Unscaled lambda_{n-j}(y).
  std::complex<double> lambda(int j) const;
  /// min_j modulus_j / a_j; the lower bound |lambda_{n-j}| >= (9/10) q^{n-j}/(n-j)^2
  /// reads as margin >= 0.9.
  double modulus_margin() const;
};

/// Throws SignDegenerate when |sin(ny - beta pi/2)| < 1e-14.
EigenDecomposition decompose_eigenvalues(const NeumannParams& params, int n,
                                         const ShiftPoint& shift);

/// lambda_{n-j}(y) from the Fourier split, j = 0..n-1.
std::complex<double> lambda_fourier(const NeumannParams& params, int n, int j, double y);

/// Fundamental spline alpha_0 + sum_{m=1}^{2n} alpha_m Psi_{beta,1}(t - x_m) with
/// S(y + x_k) = delta_{0,k}, k = 0..2n-1, and sum alpha_m = 0.
struct SKSplineSolution {
  int n = 0;
  double y = 0.0;
  std::vector<double> alpha;             // alpha_0..alpha_{2n}
  std::vector<double> midpoint_derivs;   // k = 1..2n stored at index k-1
  double residual = 0.0;                 // max_k |S(y_k) - delta_{0,k}|
  double pivot_ratio = 0.0;              // max |pivot| / min |pivot|

  /// sum_m alpha_m B_1(t - x_m): the (psi, beta)-derivative, piecewise constant.
  double derivative_at(double t) const;
};

/// Partial-pivoting elimination in long double plus one refinement step.
/// Throws SingularSystem when the pivots collapse.
SKSplineSolution solve_fundamental_spline(const KernelSpec& spec, int n, double y,
                                          const EvalPolicy& policy = {1e-19, 10'000'000});

/// pi/(4 n psi(n)) for psi(n) = q^n/n; may overflow to inf at large n.
double derivative_scale(const NeumannParams& params, int n);

/// Inner bracket of the first representation at midpoint k = 1..2n:
///   (1/2 + 2 sum_{j=1}^{n-1} q^j cos(j(t_k - y)) / (|L_j| cos(j pi/2n))) s + gamma_1 + gamma_2,
/// with L_j the scaled eigenvalue; the derivative is (-1)^{k+1} derivative_scale * bracket.
std::vector<double> lemma1_brackets(const EigenDecomposition& eigen);

double derivative_lemma1(const NeumannParams& params, int n, const ShiftPoint& shift, int k);

/// Correction terms of the second representation at one midpoint.
struct GammaLedger {
  int k = 0;
  std::array<double, 5> gamma{};
  double pq_term = 0.0;        // P_q(t_k - y) * s
  double bracket = 0.0;        // pq_term + sum gamma
  std::vector<double> z;       // z_j / rho_j, j = 0..n-1
  std::vector<double> delta;   // delta_j, j = 1..[sqrt n] stored at j-1
  double lemma3_lhs = 0.0;     // sum |gamma_m|
  double lemma3_rhs = 0.0;

  bool lemma3_holds() const { return lemma3_lhs <= lemma3_rhs; }
};

/// Ledgers for every midpoint k = 1..2n. Throws Domain for n < 2.
std::vector<GammaLedger> lemma2_ledgers(const NeumannParams& params, const EigenDecomposition& eigen);

struct Lemma2Result {
  double value = 0.0;
  GammaLedger ledger;
  EigenDecomposition eigen;
};

Lemma2Result derivative_lemma2(const NeumannParams& params, int n, const ShiftPoint& shift, int k);

/// (24/(5(1-q))) q^{sqrt n} + (160/63)((2 sqrt n - 1)/(n(sqrt n - 1))) q/(1-q)^2.
double lemma3_rhs(double q, int n);

struct Lemma3Check {
  int n = 0;
  double lhs = 0.0;  // max over k of sum |gamma_m(y0)|
  double rhs = 0.0;
  int worst_k = 0;
  bool holds() const { return lhs <= rhs; }
};

/// Evaluated at y0 through the Fourier eigenvalue path.
Lemma3Check lemma3_bound(const NeumannParams& params, int n);

enum class DerivativePath { Auto, Direct, Lemma1, Lemma2 };

struct CyVerdict {
  bool holds = false;
  int epsilon = 1;
  // Per midpoint: +1 sign (-1)^k epsilon, 0 classified zero, -1 wrong sign.
  std::vector<int> pattern;
  // Derivative divided by derivative_scale; same sign, never overflows.
  std::vector<double> normalized;
  double zero_tol = 0.0;  // on the normalized values
  DerivativePath path = DerivativePath::Auto;
  std::optional<double> modulus_margin;  // Fourier paths only
  double y = 0.0;
};

struct CyOptions {
  std::optional<double> y;  // defaults to y0
  DerivativePath path = DerivativePath::Auto;
};

/// Sign pattern check of the spline derivative at the midpoints. Auto uses the
/// first representation and falls back to the direct solve when the phase is
/// sign-degenerate.
CyVerdict verify_Cy2n(const NeumannParams& params, int n, const CyOptions& options = {});

/// Direct-solve check for a general kernel.
CyVerdict verify_Cy2n(const KernelSpec& spec, int n, double y);

/// Classification shared by both overloads, exposed for testing.
CyVerdict classify_signs(const std::vector<double>& normalized, double zero_tol);

}  // namespace kwidth
