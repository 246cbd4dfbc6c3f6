#include "kwidth/extremal_widths.hpp"

#include <mutex>
#include <numbers>
#include <string>

#include "kwidth/compensated_sum.hpp"
#include "kwidth/errors.hpp"
#include "kwidth/trig.hpp"
#include "series.hpp"

namespace kwidth {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesTol = 1e-18;
constexpr double kResidualLimit = 1e-13;

void require_n(int n) {
  if (n < 1) throw Error(ErrorKind::Validation, "n must be a positive integer");
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace

RootBranch classify_branch(double beta) {
  const double b = reduce_phase(beta);
  if (b < 1.0 || (b >= 2.0 && b < 3.0)) return RootBranch::HalfClass;
  return RootBranch::ZeroClass;
}

double ThetaRoot::y0() const { return theta * kPi / n; }

double theta_equation(const NeumannParams& params, int n, double theta) {
  params.validate();
  require_n(n);
  const double half_b = params.reduced_beta() / 2.0;
  const double ratio = std::pow(params.q, 2.0 * n);
  return detail::geometric_series(ratio, kSeriesTol, [&](std::int64_t v, double p) {
    const double odd = static_cast<double>(2 * v + 1);
    return p / odd * cos_pi(odd * theta - half_b);
  });
}

ThetaRoot solve_theta(const NeumannParams& params, int n) {
  params.validate();
  require_n(n);
  const double b = params.reduced_beta();

  ThetaRoot root;
  root.q = params.q;
  root.beta = params.beta;
  root.n = n;
  root.branch = classify_branch(b);

  if (b == 0.0 || b == 2.0) {
    root.theta = 0.5;
    root.exact = true;
  } else if (b == 1.0 || b == 3.0) {
    root.theta = 0.0;
    root.exact = true;
  }

  if (root.exact) {
    root.bracket_lo = root.bracket_hi = root.theta;
  } else {
    double lo = root.branch == RootBranch::HalfClass ? 0.5 : 0.0;
    double hi = lo + 0.5;
    root.bracket_lo = lo;
    root.bracket_hi = hi;
    double f_lo = theta_equation(params, n, lo);
    const double f_hi = theta_equation(params, n, hi);
    if (f_lo == 0.0) {
      root.theta = lo;
    } else if (f_hi == 0.0 || sign_of(f_lo) == sign_of(f_hi)) {
      // f(hi) == 0 would put the root at theta = 1, outside [0, 1).
      throw Error(ErrorKind::BracketFailure,
                  "theta equation has no sign change on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
    } else {
      double best = lo;
      double best_abs = std::abs(f_lo);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        ++root.iterations;
        const double f_mid = theta_equation(params, n, mid);
        if (std::abs(f_mid) < best_abs) {
          best = mid;
          best_abs = std::abs(f_mid);
        }
        if (f_mid == 0.0) break;
        if (sign_of(f_mid) == sign_of(f_lo)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      if (std::abs(theta_equation(params, n, hi)) < best_abs) best = hi;
      root.theta = best;
    }
  }

  root.residual = std::abs(theta_equation(params, n, root.theta));
  if (!(root.residual <= kResidualLimit)) {
    throw Error(ErrorKind::BracketFailure,
                "theta residual " + std::to_string(root.residual) + " above limit");
  }

  const double ratio = std::pow(params.q, 2.0 * n);
  const double half_b = b / 2.0;
  root.cos_offset_scaled = -detail::geometric_series(ratio, kSeriesTol, [&](std::int64_t v, double p) {
    const double odd = static_cast<double>(2 * v + 3);
    return p / odd * cos_pi(odd * root.theta - half_b);
  });
  root.cos_offset = root.cos_offset_scaled * ratio;
  root.sin_sign = sign_of(sin_pi(root.theta - half_b));
  return root;
}

double eval_phi(const NeumannParams& params, int n, double t, const EvalPolicy& policy) {
  params.validate();
  require_n(n);
  policy.validate();
  constexpr long double pi = std::numbers::pi_v<long double>;
  const long double phase = static_cast<long double>(params.reduced_beta()) * pi / 2;
  const long double nt = static_cast<long double>(n) * std::fmod(static_cast<long double>(t), 2 * pi);
  const long double qn = std::pow(static_cast<long double>(params.q), n);
  const long double ratio = qn * qn;
  const long double scale = 4 / (pi * n);
  CompensatedSum<long double> sum;
  long double power = qn;
  for (std::int64_t v = 0;; ++v) {
    if (v >= policy.max_terms) {
      throw Error(ErrorKind::TolUnreachable, "Phi series did not converge within max_terms");
    }
    const long double odd = static_cast<long double>(2 * v + 1);
    sum += power / (odd * odd) * std::sin(odd * nt - phase);
    power *= ratio;
    // remaining terms bounded by scale * power / (1 - ratio)
    if (scale * power / (1 - ratio) <= policy.abs_tol) break;
  }
  return static_cast<double>(scale * sum.value());
}

WidthReport exact_width(const NeumannParams& params, int n) {
  return exact_width(params, solve_theta(params, n));
}

WidthReport exact_width(const NeumannParams& params, const ThetaRoot& root) {
  params.validate();
  const int n = root.n;
  const double q = params.q;
  const double half_b = params.reduced_beta() / 2.0;
  const double qn = std::pow(q, n);
  const double ratio = qn * qn;

  // S = sum_{v>=0} q^{2vn}/(2v+1)^2 sin((2v+1) theta pi - beta pi/2) = s0 + ratio * tail
  const double tail = detail::geometric_series(ratio, kSeriesTol, [&](std::int64_t v, double p) {
    const double odd = static_cast<double>(2 * v + 3);
    return p / (odd * odd) * sin_pi(odd * root.theta - half_b);
  });
  const double c = root.cos_offset;
  const double s_abs = std::sqrt((1.0 - c) * (1.0 + c));
  const double s0 = root.sin_sign * s_abs;
  const double total = s0 + ratio * tail;

  WidthReport report;
  report.q = q;
  report.beta = params.beta;
  report.n = n;
  report.root = root;
  report.y0 = root.y0();
  report.width = 4.0 / (kPi * n) * qn * std::abs(total);
  if (sign_of(total) == root.sin_sign) {
    // |S| - 1 = (|s0| - 1) + sign * ratio * tail, with |s0| - 1 = -c^2/(1 + |s0|)
    report.deviation_scaled = root.sin_sign * tail - root.cos_offset_scaled * c / (1.0 + s_abs);
  } else {
    report.deviation_scaled = (std::abs(total) - 1.0) / ratio;
  }
  report.gamma_n = 4.0 / kPi * (1.0 - ratio) * report.deviation_scaled;
  const double band = 4.0 / 9.0 * ratio / (1.0 - ratio);
  report.sandwich_lo = qn / n * (1.0 - band);
  report.sandwich_hi = qn / n * (1.0 + band);
  return report;
}

bool WidthReport::sandwich_holds() const {
  const double ratio = std::pow(q, 2.0 * n);
  return std::abs(deviation_scaled) * (1.0 - ratio) <= 4.0 / 9.0;
}

CosBound theta_cos_bound(const ThetaRoot& root) {
  const double ratio = std::pow(root.q, 2.0 * root.n);
  return CosBound{std::abs(root.cos_offset), ratio / (3.0 * (1.0 - ratio))};
}

CosBound theta_cos_bound(const NeumannParams& params, int n) {
  return theta_cos_bound(solve_theta(params, n));
}

ThetaRoot ThetaCache::get(const NeumannParams& params, int n) {
  const Key key{params.q, params.reduced_beta(), n};
  {
    std::shared_lock lock(mutex_);
    if (auto it = roots_.find(key); it != roots_.end()) return it->second;
  }
  ThetaRoot root = solve_theta(params, n);
  std::unique_lock lock(mutex_);
  return roots_.emplace(key, root).first->second;
}

std::size_t ThetaCache::size() const {
  std::shared_lock lock(mutex_);
  return roots_.size();
}

}  // namespace kwidth
