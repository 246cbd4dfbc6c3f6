#include "kwidth/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kwidth/compensated_sum.hpp"
#include "kwidth/errors.hpp"
#include "kwidth/trig.hpp"

namespace kwidth {
namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

// Above this ratio eval_Pq switches to the positive dual series.
constexpr double kPqDualFrom = 0.25;

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorKind::Validation, "q out of (0,1)");
  }
}

[[noreturn]] void tol_unreachable(std::int64_t cap) {
  throw Error(ErrorKind::TolUnreachable,
              "series tail bound not reached within max_terms=" + std::to_string(cap));
}

// Smallest K >= 1 with bound(K) <= tol, for a nonincreasing bound.
template <typename Bound>
std::int64_t truncation_index(const Bound& bound, double tol, std::int64_t max_terms) {
  std::int64_t hi = 1;
  while (bound(hi) > tol) {
    if (hi >= max_terms) tol_unreachable(max_terms);
    hi = std::min(hi * 2, max_terms);
  }
  std::int64_t lo = hi / 2;  // bound(lo) > tol unless lo == 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (bound(mid) > tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

long double reduce_angle(long double t) {
  long double r = std::fmod(t, kTwoPiL);
  if (r < 0) r += kTwoPiL;
  return r;
}

}  // namespace

void EvalPolicy::validate() const {
  if (!(abs_tol > 0.0)) throw Error(ErrorKind::Validation, "abs_tol must be positive");
  if (max_terms < 1) throw Error(ErrorKind::Validation, "max_terms must be at least 1");
}

NeumannParams NeumannParams::make(double q, double beta) {
  NeumannParams p{q, beta};
  p.validate();
  return p;
}

void NeumannParams::validate() const {
  require_q(q);
  if (!std::isfinite(beta)) throw Error(ErrorKind::Validation, "beta must be finite");
}

double NeumannParams::reduced_beta() const { return reduce_phase(beta); }

double NeumannParams::psi(std::int64_t k) const {
  return std::pow(q, static_cast<double>(k)) / static_cast<double>(k);
}

KernelSpec::KernelSpec(Coefficients psi, TailBound tail_bound, double beta)
    : psi_(std::move(psi)), tail_(std::move(tail_bound)), beta_(beta) {
  if (!psi_ || !tail_) throw Error(ErrorKind::Validation, "kernel spec needs psi and tail_bound");
  if (!std::isfinite(beta_)) throw Error(ErrorKind::Validation, "beta must be finite");
}

KernelSpec KernelSpec::neumann(const NeumannParams& params) {
  params.validate();
  const double q = params.q;
  KernelSpec spec(
      [q](std::int64_t k) { return std::pow(q, static_cast<double>(k)) / static_cast<double>(k); },
      [q](std::int64_t last) {
        const double next = static_cast<double>(last + 1);
        return std::pow(q, next) / (next * (1.0 - q));
      },
      params.beta);
  spec.neumann_ = params;
  return spec;
}

double KernelSpec::psi(std::int64_t k) const {
  const double value = psi_(k);
  if (!(value > 0.0)) {
    throw Error(ErrorKind::Validation, "psi(" + std::to_string(k) + ") is not positive");
  }
  return value;
}

double KernelSpec::reduced_beta() const { return reduce_phase(beta_); }

std::int64_t neumann_truncation(double q, double tol, std::int64_t max_terms) {
  require_q(q);
  const double one_minus_q = 1.0 - q;
  double q_next = q * q;  // q^{K+1} for K = 1
  for (std::int64_t k = 1; k <= max_terms; ++k) {
    if (q_next / (static_cast<double>(k + 1) * one_minus_q) <= tol) return k;
    q_next *= q;
  }
  tol_unreachable(max_terms);
}

double eval_neumann(const NeumannParams& params, double t, const EvalPolicy& policy) {
  params.validate();
  policy.validate();
  const std::int64_t terms = neumann_truncation(params.q, policy.abs_tol, policy.max_terms);
  const long double phase = static_cast<long double>(params.reduced_beta()) * kPiL / 2;
  const long double base = reduce_angle(t);
  const long double q = params.q;
  long double qk = 1;
  CompensatedSum<long double> sum;
  for (std::int64_t k = 1; k <= terms; ++k) {
    qk *= q;
    sum += qk / static_cast<long double>(k) * std::cos(static_cast<long double>(k) * base - phase);
  }
  return static_cast<double>(sum.value());
}

double eval_psi_beta(const KernelSpec& spec, double t, const EvalPolicy& policy) {
  policy.validate();
  const std::int64_t terms = truncation_index(
      [&](std::int64_t k) { return spec.tail_bound(k); }, policy.abs_tol, policy.max_terms);
  const long double phase = static_cast<long double>(spec.reduced_beta()) * kPiL / 2;
  const long double base = reduce_angle(t);
  CompensatedSum<long double> sum;
  for (std::int64_t k = 1; k <= terms; ++k) {
    sum += static_cast<long double>(spec.psi(k)) *
           std::cos(static_cast<long double>(k) * base - phase);
  }
  return static_cast<double>(sum.value());
}

long double eval_psi_beta1_extended(const KernelSpec& spec, long double t,
                                    const EvalPolicy& policy) {
  policy.validate();
  // sum_{k>K} psi(k)/k <= tail_bound(K) / (K+1)
  const std::int64_t terms = truncation_index(
      [&](std::int64_t k) { return spec.tail_bound(k) / static_cast<double>(k + 1); },
      policy.abs_tol, policy.max_terms);
  const long double phase =
      (static_cast<long double>(spec.reduced_beta()) + 1.0L) * kPiL / 2;
  const long double base = reduce_angle(t);
  CompensatedSum<long double> sum;
  for (std::int64_t k = 1; k <= terms; ++k) {
    const long double kk = static_cast<long double>(k);
    sum += static_cast<long double>(spec.psi(k)) / kk * std::cos(kk * base - phase);
  }
  return sum.value();
}

double eval_psi_beta1(const KernelSpec& spec, double t, const EvalPolicy& policy) {
  return static_cast<double>(eval_psi_beta1_extended(spec, t, policy));
}

long double eval_bernoulli(long double t) {
  const long double r = reduce_angle(t);
  if (r == 0) return 0;
  return (kPiL - r) / 2;
}

double eval_bernoulli(double t) {
  return static_cast<double>(eval_bernoulli(static_cast<long double>(t)));
}

double eval_Pq(double q, double t, const EvalPolicy& policy) {
  require_q(q);
  policy.validate();
  const long double base = reduce_angle(t);
  const long double ql = q;
  if (q >= kPqDualFrom) {
    // Poisson dual: P_q(t) = (pi/(2a)) sum_m sech(pi (t - 2 pi m)/(2a)), a = ln(1/q).
    // Every term is positive, so P_q keeps full relative accuracy where the
    // cosine series cancels down to O(1e-16) noise (q near 1, t near pi).
    const long double a = -std::log(ql);
    const long double c = kPiL / (2 * a);
    auto sech = [](long double x) {
      x = std::abs(x);
      const long double e = std::exp(-x);
      return 2 * e / (1 + e * e);
    };
    CompensatedSum<long double> sum;
    for (std::int64_t m = 0;; ++m) {
      if (m > policy.max_terms) tol_unreachable(policy.max_terms);
      const long double lo = sech(c * (base + kTwoPiL * m));
      const long double hi = sech(c * (base - kTwoPiL * (m + 1)));
      sum += lo;
      sum += hi;
      if (lo + hi <= 1e-22L * sum.value()) break;
    }
    return static_cast<double>(c * sum.value());
  }
  // tail after J terms: 2 sum_{j>J} q^j/(1+q^{2j}) <= 2 q^{J+1} / (1-q)
  CompensatedSum<long double> sum(0.5L);
  long double qj = 1;
  for (std::int64_t j = 1;; ++j) {
    if (j > policy.max_terms) tol_unreachable(policy.max_terms);
    qj *= ql;
    sum += 2 * qj / (1 + qj * qj) * std::cos(static_cast<long double>(j) * base);
    if (2 * qj * ql / (1 - ql) <= policy.abs_tol) break;
  }
  return static_cast<double>(sum.value());
}

double pq_lower_bound(double q) {
  require_q(q);
  const double lead = 0.5 + 2.0 * q / ((1.0 + q * q) * (1.0 - q));
  return lead * std::pow((1.0 - q) / (1.0 + q), 4.0 / (1.0 - q * q));
}

// (1/4) ln((1 + 2a cos x + a^2)/(1 - 2a cos x + a^2)) == (1/2) atanh(2a cos x/(1 + a^2));
// the atanh form keeps full relative accuracy when a = q^n is tiny.
double eval_Gq(double q, int n, double x) {
  require_q(q);
  if (n < 1) throw Error(ErrorKind::Validation, "n must be positive");
  const double a = std::pow(q, n);
  return 0.5 * std::atanh(2.0 * a * std::cos(x) / (1.0 + a * a)) / n;
}

double eval_Hq(double q, int n, double x) {
  require_q(q);
  if (n < 1) throw Error(ErrorKind::Validation, "n must be positive");
  const double a = std::pow(q, n);
  return 0.5 * std::atan(2.0 * a * std::sin(x) / (1.0 - a * a)) / n;
}

}  // namespace kwidth
