#pragma once

#include <cstdint>
#include <vector>

#include "kwidth/kernel.hpp"

namespace kwidth::oracle {

// Brute-force references. None of these call the evaluators they are used to
// check; sums are plain left-to-right with std::sin/std::cos.

struct SupNorm {
  double max_abs = 0.0;
  double argmax = 0.0;  // in [0, pi/n)
};

/// max |Phi_{q,beta,n}| over one period [0, pi/n): uniform grid, then
/// golden-section refinement around the best cell.
SupNorm supnorm_phi(const NeumannParams& params, int n, int grid_points = 4096,
                    double refine_tol = 1e-13);

struct SignInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool exact_zero = false;  // a sample itself vanished (lo == hi)
};

/// Every place on [0, 1) where the theta-equation left side changes sign
/// or vanishes at a sample.
std::vector<SignInterval> theta_sign_scan(const NeumannParams& params, int n, int points = 100'000);

/// sum_{k=1}^{terms} q^k/k cos(kt - beta pi/2).
double slow_neumann(const NeumannParams& params, double t, std::int64_t terms);

/// sum_{k=1}^{terms} psi(k)/k cos(kt - (beta+1) pi/2).
double slow_psi_beta1(const KernelSpec& spec, double t, std::int64_t terms);

/// 1/2 + 2 sum_{j=1}^{terms} cos(jt)/(q^j + q^{-j}).
double slow_Pq(double q, double t, std::int64_t terms);

/// sum_{v<terms} q^{(2v+1)n}/((2v+1)n) cos((2v+1)x) and the sine version.
double slow_Gq(double q, int n, double x, std::int64_t terms);
double slow_Hq(double q, int n, double x, std::int64_t terms);

/// (4/pi) sum_{v<terms} q^{(2v+1)n}/(n(2v+1)^2) sin((2v+1)nt - beta pi/2).
double slow_phi(const NeumannParams& params, int n, double t, std::int64_t terms);

}  // namespace kwidth::oracle
