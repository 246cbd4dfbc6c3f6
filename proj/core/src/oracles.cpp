#include "kwidth/oracles.hpp"

#include <cmath>
#include <numbers>

#include "kwidth/errors.hpp"

namespace kwidth::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t terms_for(double ratio) {
  // ratio^K < 1e-20
  return static_cast<std::int64_t>(std::ceil(-46.0 / std::log(ratio))) + 2;
}

}  // namespace

double slow_neumann(const NeumannParams& params, double t, std::int64_t terms) {
  double sum = 0.0;
  for (std::int64_t k = 1; k <= terms; ++k) {
    sum += std::pow(params.q, double(k)) / double(k) * std::cos(double(k) * t - params.beta * kPi / 2.0);
  }
  return sum;
}

double slow_psi_beta1(const KernelSpec& spec, double t, std::int64_t terms) {
  double sum = 0.0;
  for (std::int64_t k = 1; k <= terms; ++k) {
    sum += spec.psi(k) / double(k) * std::cos(double(k) * t - (spec.beta() + 1.0) * kPi / 2.0);
  }
  return sum;
}

double slow_Pq(double q, double t, std::int64_t terms) {
  double sum = 0.5;
  for (std::int64_t j = 1; j <= terms; ++j) {
    sum += 2.0 * std::cos(double(j) * t) / (std::pow(q, double(j)) + std::pow(q, -double(j)));
  }
  return sum;
}

double slow_Gq(double q, int n, double x, std::int64_t terms) {
  double sum = 0.0;
  for (std::int64_t v = 0; v < terms; ++v) {
    const double odd = 2.0 * v + 1.0;
    sum += std::pow(q, odd * n) / (odd * n) * std::cos(odd * x);
  }
  return sum;
}

double slow_Hq(double q, int n, double x, std::int64_t terms) {
  double sum = 0.0;
  for (std::int64_t v = 0; v < terms; ++v) {
    const double odd = 2.0 * v + 1.0;
    sum += std::pow(q, odd * n) / (odd * n) * std::sin(odd * x);
  }
  return sum;
}

double slow_phi(const NeumannParams& params, int n, double t, std::int64_t terms) {
  double sum = 0.0;
  for (std::int64_t v = 0; v < terms; ++v) {
    const double odd = 2.0 * v + 1.0;
    sum += std::pow(params.q, odd * n) / (n * odd * odd) * std::sin(odd * n * t - params.beta * kPi / 2.0);
  }
  return 4.0 / kPi * sum;
}

SupNorm supnorm_phi(const NeumannParams& params, int n, int grid_points, double refine_tol) {
  params.validate();
  if (n < 1) throw Error(ErrorKind::Validation, "n must be positive");
  if (grid_points < 64) throw Error(ErrorKind::Validation, "grid_points must be at least 64");
  if (!(refine_tol > 0.0)) throw Error(ErrorKind::Validation, "refine_tol must be positive");
  const std::int64_t terms = terms_for(std::pow(params.q, 2.0 * n));
  // Extended precision keeps the flat top resolvable to ~sqrt(1e-19).
  const long double half_phase = static_cast<long double>(params.beta) * std::numbers::pi_v<long double> / 2;
  auto f = [&](double t) {
    long double sum = 0.0L;
    for (std::int64_t v = 0; v < terms; ++v) {
      const long double odd = 2.0L * v + 1.0L;
      sum += std::pow(static_cast<long double>(params.q), odd * n) / (n * odd * odd) *
             std::sin(odd * n * static_cast<long double>(t) - half_phase);
    }
    return std::abs(4.0L / std::numbers::pi_v<long double> * sum);
  };

  const double period = kPi / n;
  const double h = period / grid_points;
  int best = 0;
  long double best_value = -1.0L;
  for (int i = 0; i < grid_points; ++i) {
    const long double v = f(i * h);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  // |Phi| has period pi/n, so the bracket may cross 0 freely.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (best - 1) * h;
  double b = (best + 1) * h;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  long double fc = f(c), fd = f(d);
  while (b - a > refine_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double arg = 0.5 * (a + b);
  long double value = f(arg);
  if (best_value > value) {
    value = best_value;
    arg = best * h;
  }
  arg = std::fmod(arg, period);
  if (arg < 0.0) arg += period;
  if (arg >= period) arg = 0.0;
  return {static_cast<double>(value), arg};
}

std::vector<SignInterval> theta_sign_scan(const NeumannParams& params, int n, int points) {
  params.validate();
  if (n < 1) throw Error(ErrorKind::Validation, "n must be positive");
  if (points < 1000) throw Error(ErrorKind::Validation, "points must be at least 1000");
  const double ratio = std::pow(params.q, 2.0 * n);
  const std::int64_t terms = terms_for(ratio);
  // value and a scale for deciding that a sample vanished
  auto lhs = [&](double theta, double& scale) {
    double sum = 0.0;
    scale = 0.0;
    for (std::int64_t v = 0; v < terms; ++v) {
      const double odd = 2.0 * v + 1.0;
      const double term = std::pow(ratio, double(v)) / odd *
                          std::cos(odd * theta * kPi - params.beta * kPi / 2.0);
      sum += term;
      scale += std::abs(term);
    }
    return sum;
  };

  std::vector<SignInterval> out;
  int last_sign = 0;
  double last_theta = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double theta = static_cast<double>(i) / points;
    double scale = 0.0;
    const double v = lhs(theta, scale);
    if (std::abs(v) <= 1e-14 * scale) {
      if (i < points) out.push_back({theta, theta, true});
      last_sign = 0;
      continue;
    }
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) out.push_back({last_theta, theta, false});
    last_sign = sign;
    last_theta = theta;
  }
  return out;
}

}  // namespace kwidth::oracle
