#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace kwidth {

/// Truncation control shared by every series evaluator.
struct EvalPolicy {
  double abs_tol = 1e-14;
  std::int64_t max_terms = 1'000'000;

  /// Throws Error(Validation) unless abs_tol > 0 and max_terms >= 1.
  void validate() const;
};

/// The pair (q, beta) that specializes psi(k) = q^k / k.
struct NeumannParams {
  double q = 0.5;
  double beta = 0.0;

  /// Validated constructor; throws Error(Validation) unless 0 < q < 1 and
  /// beta is finite.
  static NeumannParams make(double q, double beta);
  void validate() const;

  /// beta mod 4 in [0, 4). Kernels for beta and beta + 4 coincide.
  double reduced_beta() const;

  double psi(std::int64_t k) const;
};

/// A summable positive coefficient sequence psi(k) together with its phase
/// beta. Generates Psi_beta(t) = sum psi(k) cos(kt - beta*pi/2) and the
/// integrated kernel Psi_{beta,1}(t) = sum psi(k)/k cos(kt - (beta+1)*pi/2).
///
/// `tail_bound(K)` must bound sum_{k>K} psi(k) from above, be nonincreasing
/// in K and tend to zero; truncation indices are chosen from it.
class KernelSpec {
 public:
  using Coefficients = std::function<double(std::int64_t)>;
  using TailBound = std::function<double(std::int64_t)>;

  KernelSpec(Coefficients psi, TailBound tail_bound, double beta);

  static KernelSpec neumann(const NeumannParams& params);

  /// Throws Error(Validation) if the supplied coefficient is not positive.
  double psi(std::int64_t k) const;
  double tail_bound(std::int64_t last_index) const { return tail_(last_index); }
  double beta() const { return beta_; }
  double reduced_beta() const;

  /// Present when the spec was built by neumann(); enables the closed-form
  /// eigenvalue decomposition in sk_spline.
  const std::optional<NeumannParams>& neumann_params() const { return neumann_; }

 private:
  Coefficients psi_;
  TailBound tail_;
  double beta_;
  std::optional<NeumannParams> neumann_;
};

/// Smallest K with q^{K+1} / ((K+1)(1-q)) <= tol, i.e. the certified
/// truncation index for the Neumann series. Throws TolUnreachable past
/// max_terms.
std::int64_t neumann_truncation(double q, double tol, std::int64_t max_terms);

/// N_{q,beta}(t) = sum_{k>=1} q^k/k cos(kt - beta*pi/2), absolute error
/// at most policy.abs_tol.
double eval_neumann(const NeumannParams& params, double t, const EvalPolicy& policy = {});

/// Psi_beta(t) for a general spec.
double eval_psi_beta(const KernelSpec& spec, double t, const EvalPolicy& policy = {});

/// Psi_{beta,1}(t) = (Psi_beta * B_1)(t).
double eval_psi_beta1(const KernelSpec& spec, double t, const EvalPolicy& policy = {});

/// Psi_{beta,1} accumulated and returned in long double; feeds the
/// extended-precision interpolation solve.
long double eval_psi_beta1_extended(const KernelSpec& spec, long double t,
                                    const EvalPolicy& policy = {});

/// Bernoulli kernel B_1(t) = sum sin(kt)/k in closed sawtooth form:
/// (pi - (t mod 2pi))/2, and 0 at multiples of 2pi.
double eval_bernoulli(double t);
long double eval_bernoulli(long double t);

/// P_q(t) = 1/2 + 2 sum_{j>=1} cos(jt) / (q^j + q^{-j}). For q >= 0.25 it is summed
/// through the all-positive Poisson dual, accurate relative to P_q itself.
double eval_Pq(double q, double t, const EvalPolicy& policy = {});

/// Lower bound ((1/2 + 2q/((1+q^2)(1-q))) ((1-q)/(1+q))^{4/(1-q^2)}) that
/// P_q exceeds everywhere.
double pq_lower_bound(double q);

/// G_q(x) = sum_{v>=0} q^{(2v+1)n} / ((2v+1)n) cos((2v+1)x), closed form.
double eval_Gq(double q, int n, double x);

/// H_q(x) = sum_{v>=0} q^{(2v+1)n} / ((2v+1)n) sin((2v+1)x), closed form.
double eval_Hq(double q, int n, double x);

}  // namespace kwidth
