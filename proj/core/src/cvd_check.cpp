#include "kwidth/cvd_check.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <type_traits>

#include "kwidth/compensated_sum.hpp"
#include "kwidth/errors.hpp"
#include "kwidth/trig.hpp"

namespace kwidth {
namespace {

constexpr DoubleDouble kPiDD{3.141592653589793116, 1.224646799147353207e-16};
constexpr double kUnitDouble = 0x1p-53;
constexpr double kUnitDD = 0x1p-104;

DoubleDouble dd_round(DoubleDouble x) {
  double r = std::nearbyint(x.hi);
  // hi sits on a half-integer boundary only if lo decides the side
  if (std::abs(x.hi - r) == 0.5) r = std::nearbyint(x.hi + x.lo);
  return DoubleDouble(r);
}

// cos(pi x) to double-double accuracy for moderate |x|.
DoubleDouble dd_cos_pi(DoubleDouble x) {
  x = x - DoubleDouble(2.0) * dd_round(x * DoubleDouble(0.5));  // [-1, 1]
  const DoubleDouble quarter = dd_round(x * DoubleDouble(2.0));
  const int m = ((static_cast<int>(quarter.hi) % 4) + 4) % 4;
  const DoubleDouble theta = (x - quarter * DoubleDouble(0.5)) * kPiDD;  // |theta| <= pi/4

  const DoubleDouble t2 = theta * theta;
  DoubleDouble c(1.0), s = theta;
  DoubleDouble term_c(1.0), term_s = theta;
  for (int k = 1; k < 20; ++k) {
    term_c = -(term_c * t2) / DoubleDouble(double((2 * k - 1) * (2 * k)));
    term_s = -(term_s * t2) / DoubleDouble(double((2 * k) * (2 * k + 1)));
    c = c + term_c;
    s = s + term_s;
    if (std::abs(term_c.hi) < 1e-34 && std::abs(term_s.hi) < 1e-34) break;
  }
  switch (m) {
    case 0: return c;
    case 1: return -s;
    case 2: return -c;
    default: return s;
  }
}

template <typename T>
double magnitude(const T& v) {
  if constexpr (std::is_same_v<T, DoubleDouble>) {
    return std::abs(v.to_double());
  } else {
    return std::abs(v);
  }
}

// Gaussian elimination with full pivoting on a row-major d x d matrix.
template <typename T>
T det_full_pivot(std::vector<T> a, int d) {
  auto at = [&](int r, int c) -> T& { return a[static_cast<std::size_t>(r) * d + c]; };
  T det(1.0);
  bool negate = false;
  for (int k = 0; k < d; ++k) {
    int pr = k, pc = k;
    double best = -1.0;
    for (int r = k; r < d; ++r) {
      for (int c = k; c < d; ++c) {
        const double m = magnitude(at(r, c));
        if (m > best) {
          best = m;
          pr = r;
          pc = c;
        }
      }
    }
    if (best == 0.0) return T(0.0);
    if (pr != k) {
      for (int c = 0; c < d; ++c) std::swap(at(k, c), at(pr, c));
      negate = !negate;
    }
    if (pc != k) {
      for (int r = 0; r < d; ++r) std::swap(at(r, k), at(r, pc));
      negate = !negate;
    }
    const T pivot = at(k, k);
    det = det * pivot;
    for (int r = k + 1; r < d; ++r) {
      const T f = at(r, k) / pivot;
      for (int c = k + 1; c < d; ++c) at(r, c) = at(r, c) - f * at(k, c);
    }
  }
  return negate ? T(-det) : det;
}

double cofactor_abs_sum(const std::vector<double>& a, int d) {
  if (d == 1) return 1.0;
  double total = 0.0;
  std::vector<double> minor(static_cast<std::size_t>(d - 1) * (d - 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      std::size_t idx = 0;
      for (int r = 0; r < d; ++r) {
        if (r == i) continue;
        for (int c = 0; c < d; ++c) {
          if (c != j) minor[idx++] = a[static_cast<std::size_t>(r) * d + c];
        }
      }
      total += std::abs(det_full_pivot(minor, d - 1));
    }
  }
  return total;
}

double hadamard_bound(const std::vector<double>& a, int d) {
  double product = 1.0;
  for (int r = 0; r < d; ++r) {
    double row = 0.0;
    for (int c = 0; c < d; ++c) row = std::hypot(row, a[static_cast<std::size_t>(r) * d + c]);
    product *= row;
  }
  return product;
}

std::vector<PiRational> sample_nodes(std::mt19937_64& rng, int count, std::int64_t grid) {
  std::vector<std::int64_t> picks;
  std::uniform_int_distribution<std::int64_t> dist(0, 2 * grid - 1);
  while (static_cast<int>(picks.size()) < count) {
    const std::int64_t v = dist(rng);
    if (std::find(picks.begin(), picks.end(), v) == picks.end()) picks.push_back(v);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<PiRational> out;
  for (std::int64_t v : picks) out.push_back(PiRational::make(v, grid));
  return out;
}

// Shifts one node by a few grid steps while keeping the vector increasing.
bool perturb(std::vector<PiRational>& nodes, std::mt19937_64& rng, std::int64_t grid) {
  std::uniform_int_distribution<std::size_t> which(0, nodes.size() - 1);
  std::uniform_int_distribution<int> step(-8, 8);
  const std::size_t i = which(rng);
  const int s = step(rng);
  if (s == 0 || grid % nodes[i].den != 0) return false;
  const PiRational moved = PiRational::make(nodes[i].num * (grid / nodes[i].den) + s, grid);
  if (moved.num < 0 || !(moved < PiRational::make(2, 1))) return false;
  if (i > 0 && !(nodes[i - 1] < moved)) return false;
  if (i + 1 < nodes.size() && !(moved < nodes[i + 1])) return false;
  nodes[i] = moved;
  return true;
}

}  // namespace

PiRational PiRational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::Validation, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

PiRational PiRational::parse(const std::string& text) {
  const auto slash = text.find('/');
  auto read = [&](const std::string& part) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw Error(ErrorKind::Validation, "bad rational multiple of pi: '" + text + "'");
    }
    return v;
  };
  if (slash == std::string::npos) return make(read(text), 1);
  return make(read(text.substr(0, slash)), read(text.substr(slash + 1)));
}

double PiRational::radians() const {
  return static_cast<double>(static_cast<long double>(num) / den * std::numbers::pi_v<long double>);
}

PiRational PiRational::minus_mod2(const PiRational& other) const {
  const std::int64_t den_out = den * other.den;
  std::int64_t num_out = num * other.den - other.num * den;
  num_out %= 2 * den_out;
  if (num_out < 0) num_out += 2 * den_out;
  return make(num_out, den_out);
}

std::string PiRational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool operator<(const PiRational& a, const PiRational& b) { return a.num * b.den < b.num * a.den; }

void NodeVectors::validate() const {
  if (x.size() != y.size() || x.empty() || x.size() % 2 == 0) {
    throw Error(ErrorKind::Validation, "node vectors need equal odd length 2l+1");
  }
  const PiRational two = PiRational::make(2, 1);
  for (const auto* v : {&x, &y}) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      const PiRational& p = (*v)[i];
      if (p.num < 0 || !(p < two)) throw Error(ErrorKind::Validation, "node outside [0, 2pi)");
      if (i > 0 && !((*v)[i - 1] < p)) throw Error(ErrorKind::Validation, "nodes not strictly increasing");
    }
  }
}

CvdKernel CvdKernel::neumann(const NeumannParams& params) {
  params.validate();
  const double q = params.q;
  const double half_beta = params.reduced_beta() / 2.0;
  const std::int64_t terms = neumann_truncation(q, 1e-19, 10'000'000);

  CvdKernel k;
  k.name = "neumann";
  k.entry_error = 1e-18;
  k.value = [q, half_beta, terms](const PiRational& t) {
    CompensatedSum<long double> sum;
    long double power = 1.0L;
    for (std::int64_t i = 1; i <= terms; ++i) {
      power *= q;
      const std::int64_t steps = (i % (2 * t.den)) * t.num % (2 * t.den);
      const long double turns = static_cast<long double>(steps) / t.den - half_beta;
      sum += power / i * cos_pi(turns);
    }
    return static_cast<double>(sum.value());
  };
  const std::int64_t dd_terms = neumann_truncation(q, 1e-33, 10'000'000);
  k.value_dd = [q, half_beta, dd_terms](const PiRational& t) {
    DoubleDouble sum(0.0);
    DoubleDouble power(1.0);
    for (std::int64_t i = 1; i <= dd_terms; ++i) {
      power = power * DoubleDouble(q);
      const std::int64_t steps = (i % (2 * t.den)) * t.num % (2 * t.den);
      const DoubleDouble turns = DoubleDouble(double(steps)) / DoubleDouble(double(t.den)) - DoubleDouble(half_beta);
      sum = sum + power / DoubleDouble(double(i)) * dd_cos_pi(turns);
    }
    return sum;
  };
  return k;
}

CvdKernel CvdKernel::harmonic(double constant, double amplitude) {
  CvdKernel k;
  k.name = "harmonic";
  k.entry_error = 4.0 * kUnitDouble * (std::abs(constant) + std::abs(amplitude));
  k.entry_error_dd = 16.0 * kUnitDD * (std::abs(constant) + std::abs(amplitude));
  k.value = [constant, amplitude](const PiRational& t) {
    return constant + amplitude * static_cast<double>(cos_pi(static_cast<long double>(t.num) / t.den));
  };
  k.value_dd = [constant, amplitude](const PiRational& t) {
    return DoubleDouble(constant) +
           DoubleDouble(amplitude) * dd_cos_pi(DoubleDouble(double(t.num)) / DoubleDouble(double(t.den)));
  };
  return k;
}

int DetResult::certified_sign() const {
  if (std::abs(value) <= error_estimate) return 0;
  return value > 0.0 ? 1 : -1;
}

DetResult det_D(const CvdKernel& kernel, const NodeVectors& nodes, int epsilon) {
  nodes.validate();
  if (epsilon != 1 && epsilon != -1) throw Error(ErrorKind::Validation, "epsilon must be +1 or -1");
  const int d = nodes.dimension();
  std::vector<double> a(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a[static_cast<std::size_t>(i) * d + j] = epsilon * kernel.value(nodes.x[i].minus_mod2(nodes.y[j]));
    }
  }
  DetResult result;
  result.dimension = d;
  result.value = det_full_pivot(a, d);
  const double cofactors = cofactor_abs_sum(a, d);
  const double hadamard = hadamard_bound(a, d);
  result.error_estimate = kernel.entry_error * cofactors + 2.0 * d * kUnitDouble * hadamard;

  if (std::abs(result.value) < 100.0 * result.error_estimate && kernel.value_dd) {
    std::vector<DoubleDouble> ext(a.size());
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const DoubleDouble v = kernel.value_dd(nodes.x[i].minus_mod2(nodes.y[j]));
        ext[static_cast<std::size_t>(i) * d + j] = epsilon > 0 ? v : -v;
      }
    }
    result.value = det_full_pivot(ext, d).to_double();
    result.error_estimate = kernel.entry_error_dd * cofactors + 2.0 * d * kUnitDD * hadamard;
    result.extended = true;
  }
  return result;
}

NodeVectors reference_nodes_negative() {
  return {{PiRational::make(1, 18), PiRational::make(1, 9), PiRational::make(1, 6)},
          {PiRational::make(13, 36), PiRational::make(11, 30), PiRational::make(67, 180)}};
}

NodeVectors reference_nodes_positive() {
  return {{PiRational::make(1, 18), PiRational::make(1, 9), PiRational::make(1, 6)},
          {PiRational::make(13, 30), PiRational::make(10, 9), PiRational::make(7, 6)}};
}

CvdWitness cvd_witness(const CvdKernel& kernel, int l, const WitnessSearch& search) {
  if (l < 1) throw Error(ErrorKind::Validation, "witness search needs l >= 1");
  if (search.budget < 1 || search.grid < 1) throw Error(ErrorKind::Validation, "budget and grid must be positive");
  const int d = 2 * l + 1;
  if (2 * search.grid < d) throw Error(ErrorKind::Validation, "grid too coarse for 2l+1 nodes");

  std::mt19937_64 rng(search.seed);
  CvdWitness w;
  std::optional<std::pair<NodeVectors, DetResult>> neg, pos;
  // Configurations with the most extreme determinant so far, seeds for local moves.
  std::optional<std::pair<NodeVectors, DetResult>> lowest, highest;

  auto consider = [&](const NodeVectors& nodes) {
    const DetResult r = det_D(kernel, nodes, 1);
    ++w.evaluations;
    const int s = r.certified_sign();
    if (s < 0 && !neg) neg.emplace(nodes, r);
    if (s > 0 && !pos) pos.emplace(nodes, r);
    if (!lowest || r.value < lowest->second.value) lowest.emplace(nodes, r);
    if (!highest || r.value > highest->second.value) highest.emplace(nodes, r);
  };

  for (const NodeVectors& seed : search.seeds) {
    if (seed.dimension() != d) throw Error(ErrorKind::Validation, "seed dimension differs from 2l+1");
    if (w.evaluations >= search.budget || (neg && pos)) break;
    consider(seed);
  }
  std::bernoulli_distribution local(0.5);
  while (w.evaluations < search.budget && !(neg && pos)) {
    const bool one_sided = (neg || pos) && lowest && highest;
    if (one_sided && local(rng)) {
      NodeVectors moved = neg ? highest->first : lowest->first;
      std::vector<PiRational>& side = local(rng) ? moved.x : moved.y;
      if (!perturb(side, rng, search.grid)) continue;
      consider(moved);
    } else {
      consider(NodeVectors{sample_nodes(rng, d, search.grid), sample_nodes(rng, d, search.grid)});
    }
  }
  if (!(neg && pos)) {
    throw Error(ErrorKind::NotFound, "no sign change found in " + std::to_string(w.evaluations) +
                                         " determinant evaluations (inconclusive)");
  }
  w.negative = neg->first;
  w.det_negative = neg->second;
  w.positive = pos->first;
  w.det_positive = pos->second;
  return w;
}

}  // namespace kwidth
