#pragma once

namespace kwidth {

/// cos(pi * x) with exact argument reduction modulo 2.
///
/// Half-integer arguments return exact zeros and integer arguments exact +-1,
/// so phases such as theta*pi - beta*pi/2 at the trivial roots cancel exactly.
double cos_pi(double x);

/// sin(pi * x), same reduction and exactness as cos_pi.
double sin_pi(double x);

/// long double counterparts used by the extended-precision spline solve.
long double cos_pi(long double x);
long double sin_pi(long double x);

/// beta reduced into [0, 4). Exact: fmod introduces no rounding.
double reduce_phase(double beta);

}  // namespace kwidth
