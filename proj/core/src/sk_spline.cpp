#include "kwidth/sk_spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kwidth/compensated_sum.hpp"
#include "kwidth/errors.hpp"
#include "kwidth/thresholds.hpp"
#include "kwidth/trig.hpp"

namespace kwidth {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTinyR = 1e-300;

void require_n(int n) {
  if (n < 1) throw Error(ErrorKind::Validation, "n must be a positive integer");
}

int integer_sqrt(int n) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// cos and sin of j (t_k - y) with j t_k = j (2k - 1) pi / (2n) reduced exactly.
struct MidpointAngle {
  double c = 0.0;
  double s = 0.0;
};

MidpointAngle midpoint_angle(int n, int j, int k, double cos_jy, double sin_jy) {
  const long long period = 4LL * n;
  const long long steps = (static_cast<long long>(j) * (2LL * k - 1)) % period;
  const double turns = static_cast<double>(steps) / (2.0 * n);
  const double ca = cos_pi(turns);
  const double sa = sin_pi(turns);
  return {ca * cos_jy + sa * sin_jy, sa * cos_jy - ca * sin_jy};
}

struct JTables {
  std::vector<double> cos_jy, sin_jy, cos_half, q_pow;
};

JTables make_tables(double q, int n, double y) {
  JTables t;
  t.cos_jy.resize(n);
  t.sin_jy.resize(n);
  t.cos_half.resize(n);
  t.q_pow.resize(n);
  double p = 1.0;
  for (int j = 0; j < n; ++j) {
    t.cos_jy[j] = std::cos(j * y);
    t.sin_jy[j] = std::sin(j * y);
    t.cos_half[j] = cos_pi(static_cast<double>(j) / (2.0 * n));
    t.q_pow[j] = p;
    p *= q;
  }
  return t;
}

double z_term(const EigenTerm& term, const MidpointAngle& angle, int sign) {
  const double r_abs = std::abs(term.r());
  const double tail = term.excess * angle.c * sign;
  if (r_abs <= kTinyR) return -tail;
  const double arg = std::atan2(term.r().imag(), term.r().real());
  // cos(j d + arg) from the components of j d
  const double rotated = angle.c * std::cos(arg) - angle.s * std::sin(arg);
  return r_abs * rotated - tail;
}

}  // namespace

Partition2n::Partition2n(int n_) : n(n_) { require_n(n_); }

double Partition2n::node(int k) const {
  if (k < 0 || k > 2 * n) throw Error(ErrorKind::Validation, "node index out of 0..2n");
  return k * kPi / n;
}

double Partition2n::midpoint(int k) const {
  if (k < 1 || k > 2 * n) throw Error(ErrorKind::Validation, "midpoint index out of 1..2n");
  return (2.0 * k - 1.0) * kPi / (2.0 * n);
}

ShiftPoint ShiftPoint::at(const NeumannParams& params, int n, double y) {
  params.validate();
  require_n(n);
  if (!(y >= 0.0 && y < kPi / n)) throw Error(ErrorKind::Validation, "y must lie in [0, pi/n)");
  ShiftPoint shift;
  shift.y = y;
  shift.phase_turns = n * y / kPi;
  const double x = shift.phase_turns - params.reduced_beta() / 2.0;
  shift.cos_phase = cos_pi(x);
  const double s = sin_pi(x);
  shift.sin_abs = std::abs(s);
  shift.sign = s < 0.0 ? -1 : 1;
  return shift;
}

ShiftPoint ShiftPoint::at_root(const ThetaRoot& root) {
  ShiftPoint shift;
  shift.y = root.y0();
  shift.phase_turns = root.theta;
  shift.cos_phase = root.cos_offset;
  shift.sin_abs = std::sqrt((1.0 - root.cos_offset) * (1.0 + root.cos_offset));
  shift.sign = root.sin_sign;
  return shift;
}

std::complex<double> lambda_finite_sum(const KernelSpec& spec, int n, int l, double y,
                                       const EvalPolicy& policy) {
  require_n(n);
  if (l < 1 || l > n) throw Error(ErrorKind::Validation, "eigenvalue index out of 1..n");
  policy.validate();
  EvalPolicy per_term = policy;
  per_term.abs_tol = policy.abs_tol / (2.0 * n);
  CompensatedSum<double> re, im;
  for (int v = 1; v <= 2 * n; ++v) {
    const double value = eval_psi_beta1(spec, y - v * kPi / n, per_term);
    const double turns = static_cast<double>((static_cast<long long>(l) * v) % (2LL * n)) / n;
    re += cos_pi(turns) * value;
    im += sin_pi(turns) * value;
  }
  return {re.value() / n, im.value() / n};
}

double EigenDecomposition::scale(int j) const { return std::pow(q, n - j) / (double(n) * n); }

std::complex<double> EigenDecomposition::lambda(int j) const {
  const EigenTerm& t = terms.at(j);
  const std::complex<double> inner = (t.a + t.b) * double(shift.sign) + t.r();
  return scale(j) * std::polar(1.0, -j * shift.y) * inner;
}

double EigenDecomposition::modulus_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const EigenTerm& t : terms) margin = std::min(margin, t.modulus / t.a);
  return margin;
}

EigenDecomposition decompose_eigenvalues(const NeumannParams& params, int n, const ShiftPoint& shift) {
  params.validate();
  require_n(n);
  if (shift.degenerate()) {
    throw Error(ErrorKind::SignDegenerate,
                "|sin(ny - beta pi/2)| = " + std::to_string(shift.sin_abs) + " below 1e-14");
  }
  const double q = params.q;
  const double p = std::pow(q, 2.0 * n);
  const double u = shift.phase_turns;
  const double phase = (params.reduced_beta() + 1.0) / 2.0;
  const double c = shift.cos_phase;
  const int s = shift.sign;
  const double nn = n;

  EigenDecomposition out;
  out.q = q;
  out.beta = params.beta;
  out.n = n;
  out.shift = shift;
  out.terms.resize(n);

  const double stop = 1e-20 * p;
  for (int j = 0; j < n; ++j) {
    EigenTerm& t = out.terms[j];
    t.j = j;
    const double ra = nn / (n - j);
    const double rb = nn / (n + j);
    const double q2j = std::pow(q, 2.0 * j);
    t.a = ra * ra;
    t.b = q2j * rb * rb;

    CompensatedSum<double> re, im;
    double pm = p;  // p^m
    for (int m = 1;; ++m) {
      const double k1 = (2.0 * m + 1.0) * n - j;
      const double w1 = pm * (nn / k1) * (nn / k1);
      const double a1 = (2.0 * m + 1.0) * u - phase;
      re += w1 * cos_pi(a1);
      im += w1 * sin_pi(a1);
      if (m >= 2) {
        const double k2 = (2.0 * m - 1.0) * n + j;
        const double w2 = pm / p * q2j * (nn / k2) * (nn / k2);
        const double a2 = (2.0 * m - 1.0) * u - phase;
        re += w2 * cos_pi(a2);
        im -= w2 * sin_pi(a2);
      }
      if (pm == 0.0 || 2.0 * pm / (1.0 - p) <= stop) break;
      pm *= p;
    }
    // j = 0 pairs conjugate frequencies, so the aliased part is real.
    t.r1 = {re.value(), j == 0 ? 0.0 : im.value()};
    t.r2 = {0.0, (t.b - t.a) * c};
    t.r3 = {-(t.a + t.b) * (c * c / (1.0 + shift.sin_abs)) * s, 0.0};

    const double big = t.a + t.b;
    const std::complex<double> r = t.r();
    const double ur = r.real() * s;
    const double vr = r.imag() * s;
    t.modulus = std::hypot(big + ur, vr);
    t.excess = (2.0 * big * ur + ur * ur + vr * vr) / (t.modulus + big);
  }
  return out;
}

std::complex<double> lambda_fourier(const NeumannParams& params, int n, int j, double y) {
  if (j < 0 || j >= n) throw Error(ErrorKind::Validation, "j out of 0..n-1");
  return decompose_eigenvalues(params, n, ShiftPoint::at(params, n, y)).lambda(j);
}

double SKSplineSolution::derivative_at(double t) const {
  CompensatedSum<long double> sum;
  for (int m = 1; m <= 2 * n; ++m) {
    sum += static_cast<long double>(alpha[m]) *
           eval_bernoulli(static_cast<long double>(t) - m * std::numbers::pi_v<long double> / n);
  }
  return static_cast<double>(sum.value());
}

SKSplineSolution solve_fundamental_spline(const KernelSpec& spec, int n, double y,
                                          const EvalPolicy& policy) {
  require_n(n);
  policy.validate();
  using LD = long double;
  constexpr LD pi = std::numbers::pi_v<LD>;
  const int size = 2 * n + 1;
  const int nodes = 2 * n;

  std::vector<LD> kernel(nodes);
  for (int d = 0; d < nodes; ++d) {
    kernel[d] = eval_psi_beta1_extended(spec, static_cast<LD>(y) + d * pi / n, policy);
  }

  std::vector<LD> matrix(static_cast<std::size_t>(size) * size, 0.0L);
  auto at = [&](std::vector<LD>& a, int r, int c) -> LD& { return a[static_cast<std::size_t>(r) * size + c]; };
  for (int r = 0; r < nodes; ++r) {
    at(matrix, r, 0) = 1.0L;
    for (int m = 1; m <= nodes; ++m) at(matrix, r, m) = kernel[((r - m) % nodes + nodes) % nodes];
  }
  for (int m = 1; m <= nodes; ++m) at(matrix, nodes, m) = 1.0L;
  std::vector<LD> rhs(size, 0.0L);
  rhs[0] = 1.0L;

  std::vector<LD> lu = matrix;
  std::vector<int> perm(size);
  for (int i = 0; i < size; ++i) perm[i] = i;
  LD max_pivot = 0.0L;
  LD min_pivot = std::numeric_limits<LD>::infinity();
  for (int col = 0; col < size; ++col) {
    int best = col;
    for (int r = col + 1; r < size; ++r) {
      if (std::abs(at(lu, r, col)) > std::abs(at(lu, best, col))) best = r;
    }
    if (best != col) {
      for (int c = 0; c < size; ++c) std::swap(at(lu, col, c), at(lu, best, c));
      std::swap(perm[col], perm[best]);
    }
    const LD pivot = at(lu, col, col);
    max_pivot = std::max(max_pivot, std::abs(pivot));
    min_pivot = std::min(min_pivot, std::abs(pivot));
    if (pivot == 0.0L) break;
    for (int r = col + 1; r < size; ++r) {
      const LD f = at(lu, r, col) / pivot;
      at(lu, r, col) = f;
      for (int c = col + 1; c < size; ++c) at(lu, r, c) -= f * at(lu, col, c);
    }
  }
  const LD ratio = min_pivot > 0.0L ? max_pivot / min_pivot : std::numeric_limits<LD>::infinity();
  if (!(ratio * size * std::numeric_limits<LD>::epsilon() < 1.0L)) {
    throw Error(ErrorKind::SingularSystem,
                "interpolation system is singular (pivot ratio " +
                    std::to_string(static_cast<double>(ratio)) + ")");
  }

  auto lu_solve = [&](const std::vector<LD>& b) {
    std::vector<LD> x(size);
    for (int i = 0; i < size; ++i) {
      LD v = b[perm[i]];
      for (int c = 0; c < i; ++c) v -= at(lu, i, c) * x[c];
      x[i] = v;
    }
    for (int i = size - 1; i >= 0; --i) {
      LD v = x[i];
      for (int c = i + 1; c < size; ++c) v -= at(lu, i, c) * x[c];
      x[i] = v / at(lu, i, i);
    }
    return x;
  };
  auto residual_of = [&](const std::vector<LD>& x) {
    std::vector<LD> res(size);
    for (int r = 0; r < size; ++r) {
      CompensatedSum<LD> acc(rhs[r]);
      for (int c = 0; c < size; ++c) acc -= at(matrix, r, c) * x[c];
      res[r] = acc.value();
    }
    return res;
  };

  std::vector<LD> x = lu_solve(rhs);
  const std::vector<LD> correction = lu_solve(residual_of(x));
  for (int i = 0; i < size; ++i) x[i] += correction[i];

  SKSplineSolution sol;
  sol.n = n;
  sol.y = y;
  sol.pivot_ratio = static_cast<double>(ratio);
  sol.alpha.assign(x.begin(), x.end());
  LD worst = 0.0L;
  for (LD v : residual_of(x)) worst = std::max(worst, std::abs(v));
  sol.residual = static_cast<double>(worst);

  sol.midpoint_derivs.resize(nodes);
  for (int k = 1; k <= nodes; ++k) {
    const LD t = (2.0L * k - 1.0L) * pi / (2.0L * n);
    CompensatedSum<LD> sum;
    for (int m = 1; m <= nodes; ++m) sum += x[m] * eval_bernoulli(t - m * pi / n);
    sol.midpoint_derivs[k - 1] = static_cast<double>(sum.value());
  }
  return sol;
}

double derivative_scale(const NeumannParams& params, int n) {
  return kPi / (4.0 * std::pow(params.q, n));
}

std::vector<double> lemma1_brackets(const EigenDecomposition& eigen) {
  const int n = eigen.n;
  const int s = eigen.shift.sign;
  const JTables tab = make_tables(eigen.q, n, eigen.shift.y);
  const EigenTerm& t0 = eigen.terms[0];
  const double gamma2 = -t0.excess / (2.0 * (2.0 + t0.excess)) * s;

  std::vector<double> out(2 * n);
  for (int k = 1; k <= 2 * n; ++k) {
    CompensatedSum<double> main(0.5 * s);
    CompensatedSum<double> gamma1(z_term(t0, {1.0, 0.0}, s) / (t0.modulus * t0.modulus));
    for (int j = 1; j < n; ++j) {
      const EigenTerm& t = eigen.terms[j];
      const MidpointAngle ang = midpoint_angle(n, j, k, tab.cos_jy[j], tab.sin_jy[j]);
      const double w = 2.0 * tab.q_pow[j] / (t.modulus * tab.cos_half[j]);
      main += w * ang.c * s;
      gamma1 += w * z_term(t, ang, s) / t.modulus;
    }
    out[k - 1] = main.value() + gamma1.value() + gamma2;
  }
  return out;
}

double derivative_lemma1(const NeumannParams& params, int n, const ShiftPoint& shift, int k) {
  if (k < 1 || k > 2 * n) throw Error(ErrorKind::Validation, "k out of 1..2n");
  const std::vector<double> brackets = lemma1_brackets(decompose_eigenvalues(params, n, shift));
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * derivative_scale(params, n) * brackets[k - 1];
}

double lemma3_rhs(double q, int n) { return check_condition_n0(q, n).lhs; }

std::vector<GammaLedger> lemma2_ledgers(const NeumannParams& params, const EigenDecomposition& eigen) {
  const int n = eigen.n;
  if (n < 2) throw Error(ErrorKind::Domain, "second representation needs n >= 2");
  const double q = params.q;
  const int s = eigen.shift.sign;
  const int root = integer_sqrt(n);
  const JTables tab = make_tables(q, n, eigen.shift.y);
  const EigenTerm& t0 = eigen.terms[0];
  const double gamma2 = -t0.excess / (2.0 * (2.0 + t0.excess)) * s;
  const double bound = lemma3_rhs(q, n);
  const EvalPolicy pq_policy{1e-17, 10'000'000};

  std::vector<double> delta(root);
  for (int j = 1; j <= root; ++j) {
    const EigenTerm& t = eigen.terms[j];
    delta[j - 1] = t.modulus * tab.cos_half[j] / (1.0 + tab.q_pow[j] * tab.q_pow[j]) - 1.0;
  }

  std::vector<GammaLedger> ledgers(2 * n);
  for (int k = 1; k <= 2 * n; ++k) {
    GammaLedger& led = ledgers[k - 1];
    led.k = k;
    led.delta = delta;
    led.z.resize(n);
    led.z[0] = z_term(t0, {1.0, 0.0}, s);

    CompensatedSum<double> g1(led.z[0] / (t0.modulus * t0.modulus));
    CompensatedSum<double> g3, g4, g5;
    for (int j = 1; j < n; ++j) {
      const EigenTerm& t = eigen.terms[j];
      const MidpointAngle ang = midpoint_angle(n, j, k, tab.cos_jy[j], tab.sin_jy[j]);
      const double w = 2.0 * tab.q_pow[j] / (t.modulus * tab.cos_half[j]);
      led.z[j] = z_term(t, ang, s);
      g1 += w * led.z[j] / t.modulus;
      if (j > root) {
        g3 += w * ang.c * s;
      } else {
        g4 -= delta[j - 1] * w * ang.c * s;
      }
    }

    const double d = (2.0 * k - 1.0) * kPi / (2.0 * n) - eigen.shift.y;
    double qj = std::pow(q, root + 1);
    for (int j = root + 1;; ++j) {
      if (qj == 0.0 || qj / (1.0 - q) <= 1e-20) break;
      g5 -= 2.0 * qj * std::cos(j * d) / (1.0 + qj * qj) * s;
      qj *= q;
    }

    led.gamma = {g1.value(), gamma2, g3.value(), g4.value(), g5.value()};
    led.pq_term = eval_Pq(q, d, pq_policy) * s;
    CompensatedSum<double> total(led.pq_term);
    double abs_sum = 0.0;
    for (double g : led.gamma) {
      total += g;
      abs_sum += std::abs(g);
    }
    led.bracket = total.value();
    led.lemma3_lhs = abs_sum;
    led.lemma3_rhs = bound;
  }
  return ledgers;
}

Lemma2Result derivative_lemma2(const NeumannParams& params, int n, const ShiftPoint& shift, int k) {
  if (k < 1 || k > 2 * n) throw Error(ErrorKind::Validation, "k out of 1..2n");
  Lemma2Result result;
  result.eigen = decompose_eigenvalues(params, n, shift);
  result.ledger = lemma2_ledgers(params, result.eigen)[k - 1];
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  result.value = sign * derivative_scale(params, n) * result.ledger.bracket;
  return result;
}

Lemma3Check lemma3_bound(const NeumannParams& params, int n) {
  if (n < 2) throw Error(ErrorKind::Domain, "bound needs n >= 2");
  const ShiftPoint shift = ShiftPoint::at_root(solve_theta(params, n));
  const EigenDecomposition eigen = decompose_eigenvalues(params, n, shift);
  Lemma3Check check;
  check.n = n;
  check.rhs = lemma3_rhs(params.q, n);
  for (const GammaLedger& led : lemma2_ledgers(params, eigen)) {
    if (led.lemma3_lhs > check.lhs || check.worst_k == 0) {
      check.lhs = led.lemma3_lhs;
      check.worst_k = led.k;
    }
  }
  return check;
}

CyVerdict classify_signs(const std::vector<double>& normalized, double zero_tol) {
  CyVerdict v;
  v.normalized = normalized;
  v.zero_tol = zero_tol;
  int agree_plus = 0;
  int agree_minus = 0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const double value = normalized[i];
    if (std::abs(value) <= zero_tol) continue;
    const int k = static_cast<int>(i) + 1;
    const int wanted = (k % 2 == 0) ? 1 : -1;  // (-1)^k
    ((value > 0.0) == (wanted > 0) ? agree_plus : agree_minus) += 1;
  }
  v.epsilon = agree_plus >= agree_minus ? 1 : -1;
  v.holds = agree_plus == 0 || agree_minus == 0;
  v.pattern.resize(normalized.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const double value = normalized[i];
    if (std::abs(value) <= zero_tol) {
      v.pattern[i] = 0;
      continue;
    }
    const int k = static_cast<int>(i) + 1;
    const int wanted = ((k % 2 == 0) ? 1 : -1) * v.epsilon;
    v.pattern[i] = (value > 0.0) == (wanted > 0) ? 1 : -1;
  }
  return v;
}

CyVerdict verify_Cy2n(const NeumannParams& params, int n, const CyOptions& options) {
  params.validate();
  require_n(n);
  const ShiftPoint shift = options.y ? ShiftPoint::at(params, n, *options.y)
                                     : ShiftPoint::at_root(solve_theta(params, n));
  DerivativePath path = options.path;
  if (path == DerivativePath::Auto) {
    path = shift.degenerate() ? DerivativePath::Direct : DerivativePath::Lemma1;
  }
  const double zero_tol = 1e-9 * eval_Pq(params.q, 0.0);

  std::vector<double> normalized(2 * n);
  std::optional<double> margin;
  if (path == DerivativePath::Direct) {
    const SKSplineSolution sol = solve_fundamental_spline(KernelSpec::neumann(params), n, shift.y);
    const double scale = derivative_scale(params, n);
    for (int k = 1; k <= 2 * n; ++k) normalized[k - 1] = sol.midpoint_derivs[k - 1] / scale;
  } else {
    const EigenDecomposition eigen = decompose_eigenvalues(params, n, shift);
    margin = eigen.modulus_margin();
    std::vector<double> brackets;
    if (path == DerivativePath::Lemma1) {
      brackets = lemma1_brackets(eigen);
    } else {
      for (const GammaLedger& led : lemma2_ledgers(params, eigen)) brackets.push_back(led.bracket);
    }
    for (int k = 1; k <= 2 * n; ++k) {
      normalized[k - 1] = (k % 2 == 1 ? 1.0 : -1.0) * brackets[k - 1];
    }
  }

  CyVerdict verdict = classify_signs(normalized, zero_tol);
  verdict.path = path;
  verdict.modulus_margin = margin;
  verdict.y = shift.y;
  return verdict;
}

CyVerdict verify_Cy2n(const KernelSpec& spec, int n, double y) {
  require_n(n);
  if (!(y >= 0.0 && y < kPi / n)) throw Error(ErrorKind::Validation, "y must lie in [0, pi/n)");
  const SKSplineSolution sol = solve_fundamental_spline(spec, n, y);
  const double scale = kPi / (4.0 * n * spec.psi(n));
  std::vector<double> normalized(2 * n);
  double largest = 0.0;
  for (int k = 1; k <= 2 * n; ++k) {
    normalized[k - 1] = sol.midpoint_derivs[k - 1] / scale;
    largest = std::max(largest, std::abs(normalized[k - 1]));
  }
  CyVerdict verdict = classify_signs(normalized, 1e-9 * largest);
  verdict.path = DerivativePath::Direct;
  verdict.y = y;
  return verdict;
}

}  // namespace kwidth
