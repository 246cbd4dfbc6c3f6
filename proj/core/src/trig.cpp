#include "kwidth/trig.hpp"

#include <cmath>
#include <numbers>

namespace kwidth {
namespace {

// Reduces x into (-1, 1]; every step is exact in binary floating point.
template <typename Real>
Real reduce_unit(Real x) {
  Real r = std::fmod(x, Real{2});
  if (r < 0) r += 2;
  if (r > 1) r -= 2;
  return r;
}

template <typename Real>
Real cos_pi_impl(Real x) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real a = std::abs(reduce_unit(x));
  if (a <= Real{0.25}) return std::cos(pi * a);
  if (a <= Real{0.75}) return std::sin(pi * (Real{0.5} - a));
  return -std::cos(pi * (Real{1} - a));
}

template <typename Real>
Real sin_pi_impl(Real x) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const Real y = reduce_unit(x);
  const Real a = std::abs(y);
  Real value;
  if (a <= Real{0.25}) {
    value = std::sin(pi * a);
  } else if (a <= Real{0.75}) {
    value = std::cos(pi * (Real{0.5} - a));
  } else {
    value = std::sin(pi * (Real{1} - a));
  }
  return y < 0 ? -value : value;
}

}  // namespace

double cos_pi(double x) { return cos_pi_impl(x); }
double sin_pi(double x) { return sin_pi_impl(x); }
long double cos_pi(long double x) { return cos_pi_impl(x); }
long double sin_pi(long double x) { return sin_pi_impl(x); }

double reduce_phase(double beta) {
  double b = std::fmod(beta, 4.0);
  if (b < 0.0) b += 4.0;
  // fmod of a tiny negative beta can land on exactly 4 after the shift.
  if (b >= 4.0) b = 0.0;
  return b;
}

}  // namespace kwidth
