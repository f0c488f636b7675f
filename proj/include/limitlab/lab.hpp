#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Exact finite-dimensional functional lab: Choquet integrals against
// extensionally stored capacities, charge duality, lattice operations, the
// norm identity, the SL polytope (vertices, diameter), and the difference
// decomposition. Ground sets are capped at 16 atoms so the exhaustive
// 2^k oracles stay instant.

namespace limitlab {

inline constexpr double kAlgebraTol = 1e-12;  // algebraic identities in doubles
inline constexpr double kEnumTol = 1e-9;      // enumerated suprema
inline constexpr int kMaxGround = 16;

using Mask = std::uint32_t;

// Finite analogue of (omega, I): atoms {0..k-1} with a null part Z0; the ideal
// is {A : A subseteq Z0} and the free part F = complement(Z0) is nonempty.
struct GroundSet {
  int size = 0;
  Mask null_mask = 0;

  GroundSet(int k, Mask z0) : size(k), null_mask(z0) {
    if (k < 2 || k > kMaxGround) throw std::invalid_argument("GroundSet: size must lie in [2,16]");
    if (z0 >= (Mask{1} << k)) throw std::invalid_argument("GroundSet: null part exceeds ground set");
    if (z0 == full_mask()) throw std::invalid_argument("GroundSet: null part must be proper");
  }

  Mask full_mask() const { return (Mask{1} << size) - 1; }
  Mask free_mask() const { return full_mask() & ~null_mask; }
  int free_count() const { return std::popcount(free_mask()); }

  std::vector<int> free_indices() const {
    std::vector<int> out;
    for (int i = 0; i < size; ++i)
      if (free_mask() & (Mask{1} << i)) out.push_back(i);
    return out;
  }
};

// Monotone set function on 2^k, stored extensionally (one value per subset
// bitmask) so nu(x >= t) has no representation ambiguity.
class FiniteCapacity {
 public:
  FiniteCapacity(int ground_size, std::vector<double> values)
      : k_(ground_size), v_(std::move(values)) {
    if (k_ < 1 || k_ > kMaxGround) throw std::invalid_argument("capacity: ground size out of range");
    if (v_.size() != (std::size_t{1} << k_))
      throw std::invalid_argument("capacity: needs one value per subset (2^k)");
    if (std::abs(v_[0]) > kAlgebraTol) throw std::invalid_argument("capacity: nu(empty) must be 0");
    v_[0] = 0.0;
    for (Mask s = 0; s < v_.size(); ++s) {
      if (!std::isfinite(v_[s])) throw std::invalid_argument("capacity: non-finite value");
      for (int i = 0; i < k_; ++i) {
        Mask t = s | (Mask{1} << i);
        if (t != s && v_[s] > v_[t] + kAlgebraTol)
          throw std::invalid_argument("capacity: not monotone under inclusion");
      }
    }
  }

  static FiniteCapacity additive(const std::vector<double>& atom_weights) {
    int k = static_cast<int>(atom_weights.size());
    for (double w : atom_weights)
      if (w < 0 || !std::isfinite(w))
        throw std::invalid_argument("capacity: additive weights must be nonnegative");
    std::vector<double> v(std::size_t{1} << k, 0.0);
    for (Mask s = 1; s < v.size(); ++s) {
      double acc = 0;
      for (int i = 0; i < k; ++i)
        if (s & (Mask{1} << i)) acc += atom_weights[static_cast<std::size_t>(i)];
      v[s] = acc;
    }
    return FiniteCapacity(k, std::move(v));
  }

  static FiniteCapacity uniform(int k) {
    return additive(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
  }

  // nu(S) = (|S|/k)^p: normalized, monotone, non-additive for p != 1.
  static FiniteCapacity power_distortion(int k, double p) {
    if (!(p > 0)) throw std::invalid_argument("capacity: distortion exponent must be positive");
    std::vector<double> v(std::size_t{1} << k, 0.0);
    for (Mask s = 1; s < v.size(); ++s)
      v[s] = std::pow(static_cast<double>(std::popcount(s)) / k, p);
    return FiniteCapacity(k, std::move(v));
  }

  int ground_size() const { return k_; }
  double at(Mask s) const { return v_[s]; }
  double total() const { return v_.back(); }
  bool normalized(double tol = kAlgebraTol) const { return std::abs(total() - 1.0) <= tol; }
  const std::vector<double>& values() const { return v_; }

 private:
  int k_;
  std::vector<double> v_;
};

// Additive set function given by atom weights; the finite stage of a charge.
struct FiniteCharge {
  std::vector<double> weights;

  double of(Mask s) const {
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (s & (Mask{1} << i)) acc += weights[i];
    return acc;
  }

  double total_variation() const {
    double acc = 0;
    for (double w : weights) acc += std::abs(w);
    return acc;
  }
};

// f(x) = sum_i w_i x_i with the dual norm ||f|| = sum |w_i|.
struct FiniteFunctional {
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }

  double operator()(std::span<const double> x) const {
    if (x.size() != weights.size())
      throw std::invalid_argument("functional: dimension mismatch");
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * x[i];
    return acc;
  }

  double norm() const {
    double acc = 0;
    for (double w : weights) acc += std::abs(w);
    return acc;
  }

  double at_unit() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

  double at_indicator(Mask s) const {
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (s & (Mask{1} << i)) acc += weights[i];
    return acc;
  }

  static FiniteFunctional zero(int k) {
    return FiniteFunctional{std::vector<double>(static_cast<std::size_t>(k), 0.0)};
  }

  static FiniteFunctional vertex(int k, int atom) {
    FiniteFunctional f = zero(k);
    f.weights[static_cast<std::size_t>(atom)] = 1.0;
    return f;
  }
};

// Exact Choquet integral: telescoping over the descending sorted permutation.
// Equals the pair of improper Riemann integrals of the superlevel values by
// construction; choquet_riemann below is the independent cross-check.
inline double choquet(std::span<const double> x, const FiniteCapacity& nu) {
  const int k = nu.ground_size();
  if (static_cast<int>(x.size()) != k)
    throw std::invalid_argument("choquet: vector size must match the capacity's ground set");
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });

  double total = 0;
  Mask top = 0;
  for (int i = 0; i < k; ++i) {
    top |= Mask{1} << order[static_cast<std::size_t>(i)];
    if (i + 1 < k)
      total += (x[order[static_cast<std::size_t>(i)]] - x[order[static_cast<std::size_t>(i + 1)]]) *
               nu.at(top);
    else
      total += x[order[static_cast<std::size_t>(i)]] * nu.at(top);
  }
  return total;
}

// Left Riemann sums of nu(x >= t) on [0, max x] and of nu(x >= t) - nu(S) on
// [min x ^ 0, 0]. Error per branch is bounded by step times the total drop of
// the (monotone) integrand.
inline double choquet_riemann(std::span<const double> x, const FiniteCapacity& nu, double step) {
  if (!(step > 0)) throw std::invalid_argument("choquet_riemann: step must be positive");
  const int k = nu.ground_size();
  if (static_cast<int>(x.size()) != k)
    throw std::invalid_argument("choquet_riemann: vector size mismatch");

  auto superlevel = [&](double t) {
    Mask s = 0;
    for (int i = 0; i < k; ++i)
      if (x[static_cast<std::size_t>(i)] >= t) s |= Mask{1} << i;
    return nu.at(s);
  };

  const double hi = *std::max_element(x.begin(), x.end());
  const double lo = std::min(0.0, *std::min_element(x.begin(), x.end()));

  double total = 0;
  for (std::int64_t i = 0;; ++i) {
    double t = static_cast<double>(i) * step;
    if (t >= hi) break;
    total += superlevel(t) * step;
  }
  for (std::int64_t i = 0;; ++i) {
    double t = lo + static_cast<double>(i) * step;
    if (t >= 0) break;
    total += (superlevel(t) - nu.total()) * step;
  }
  return total;
}

// The duality T(f)(A) = f(1_A) and its inverse; on the finite stage both are
// the identity on atom weights, and the round trip is exact.
inline FiniteCharge charge_of(const FiniteFunctional& f) { return FiniteCharge{f.weights}; }
inline FiniteFunctional functional_of(const FiniteCharge& mu) {
  return FiniteFunctional{mu.weights};
}

inline FiniteFunctional lattice_sup(const FiniteFunctional& f, const FiniteFunctional& g) {
  if (f.weights.size() != g.weights.size())
    throw std::invalid_argument("lattice_sup: dimension mismatch");
  FiniteFunctional out = f;
  for (std::size_t i = 0; i < out.weights.size(); ++i)
    out.weights[i] = std::max(f.weights[i], g.weights[i]);
  return out;
}

inline FiniteFunctional lattice_inf(const FiniteFunctional& f, const FiniteFunctional& g) {
  if (f.weights.size() != g.weights.size())
    throw std::invalid_argument("lattice_inf: dimension mismatch");
  FiniteFunctional out = f;
  for (std::size_t i = 0; i < out.weights.size(); ++i)
    out.weights[i] = std::min(f.weights[i], g.weights[i]);
  return out;
}

inline FiniteFunctional positive_part(const FiniteFunctional& f) {
  return lattice_sup(f, FiniteFunctional::zero(f.size()));
}
inline FiniteFunctional negative_part(const FiniteFunctional& f) {
  FiniteFunctional neg = f;
  for (double& w : neg.weights) w = -w;
  return lattice_sup(neg, FiniteFunctional::zero(f.size()));
}

struct NormIdentityReport {
  double lhs = 0;  // sum |w_i|
  double rhs = 0;  // 2 max_{A} f(1_A), exhaustive over all 2^k subsets
  bool pass = false;
};

// ||f|| = 2 sup{f(1_A)} for f with f(e) = 0; the precondition is an error.
inline NormIdentityReport norm_identity_check(const FiniteFunctional& f) {
  if (f.size() < 1 || f.size() > kMaxGround)
    throw std::invalid_argument("norm_identity_check: dimension out of range");
  if (std::abs(f.at_unit()) > kAlgebraTol)
    throw std::invalid_argument("norm_identity_check: requires f(e) = 0");
  NormIdentityReport rep;
  rep.lhs = f.norm();
  double best = 0;  // A = empty
  const Mask full = (Mask{1} << f.size()) - 1;
  for (Mask s = 1; s <= full; ++s) best = std::max(best, f.at_indicator(s));
  rep.rhs = 2.0 * best;
  rep.pass = std::abs(rep.lhs - rep.rhs) <= kEnumTol;
  return rep;
}

// f is an SL member iff it is nonnegative, normalized, and vanishes on the
// null part.
inline bool sl_membership(const FiniteFunctional& f, const GroundSet& g) {
  if (f.size() != g.size) return false;
  for (int i = 0; i < g.size; ++i) {
    double w = f.weights[static_cast<std::size_t>(i)];
    if (w < -kAlgebraTol) return false;
    if ((g.null_mask & (Mask{1} << i)) && std::abs(w) > kAlgebraTol) return false;
  }
  return std::abs(f.at_unit() - 1.0) <= kAlgebraTol;
}

// Extreme points: the point evaluations at free atoms. Every SL member is the
// convex combination of them with its own weights as coefficients.
inline std::vector<FiniteFunctional> sl_vertices(const GroundSet& g) {
  std::vector<FiniteFunctional> out;
  for (int i : g.free_indices()) out.push_back(FiniteFunctional::vertex(g.size, i));
  return out;
}

inline double sl_diameter(const GroundSet& g) {
  auto verts = sl_vertices(g);
  double best = 0;
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      double d = 0;
      for (int i = 0; i < g.size; ++i)
        d += std::abs(verts[a].weights[static_cast<std::size_t>(i)] -
                      verts[b].weights[static_cast<std::size_t>(i)]);
      best = std::max(best, d);
    }
  return best;
}

struct DifferenceConditions {
  bool sum_zero = false;        // (a) f(e) = 0
  bool norm_at_most_two = false;  // (b) ||f|| <= 2
  bool null_vanishing = false;  // (c) f(1_A) = 0 for A in the ideal

  bool all() const { return sum_zero && norm_at_most_two && null_vanishing; }
  std::string failed() const {
    std::string out;
    if (!sum_zero) out += "(a) f(e) != 0; ";
    if (!norm_at_most_two) out += "(b) ||f|| > 2; ";
    if (!null_vanishing) out += "(c) f does not vanish on the null part; ";
    if (!out.empty()) out.resize(out.size() - 2);
    return out;
  }
};

inline DifferenceConditions difference_conditions(const FiniteFunctional& f, const GroundSet& g) {
  if (f.size() != g.size) throw std::invalid_argument("difference_conditions: dimension mismatch");
  DifferenceConditions c;
  c.sum_zero = std::abs(f.at_unit()) <= kAlgebraTol;
  c.norm_at_most_two = f.norm() <= 2.0 + kAlgebraTol;
  c.null_vanishing = true;
  for (int i = 0; i < g.size; ++i)
    if ((g.null_mask & (Mask{1} << i)) &&
        std::abs(f.weights[static_cast<std::size_t>(i)]) > kAlgebraTol)
      c.null_vanishing = false;
  return c;
}

class ConditionViolation : public std::runtime_error {
 public:
  ConditionViolation(DifferenceConditions c, const std::string& what)
      : std::runtime_error(what), conditions(c) {}
  DifferenceConditions conditions;
};

struct Decomposition {
  FiniteFunctional g, h;
};

inline FiniteFunctional uniform_on_free(const GroundSet& g) {
  FiniteFunctional f = FiniteFunctional::zero(g.size);
  double w = 1.0 / g.free_count();
  for (int i : g.free_indices()) f.weights[static_cast<std::size_t>(i)] = w;
  return f;
}

// Difference decomposition: under conditions (a)-(c),
//   g = f^+ + (1 - ||f||/2) f0,  h = g - f = f^- + (1 - ||f||/2) f0
// with both g and h in SL. Default f0 is the uniform distribution on the free
// part (symmetric, and visibly distinct from the vertex-witness probes).
inline Decomposition decompose_difference(const FiniteFunctional& f, const GroundSet& g,
                                          std::optional<FiniteFunctional> f0 = std::nullopt) {
  DifferenceConditions c = difference_conditions(f, g);
  if (!c.all())
    throw ConditionViolation(c, "decompose_difference: conditions failed: " + c.failed());
  FiniteFunctional base = f0 ? std::move(*f0) : uniform_on_free(g);
  if (!sl_membership(base, g))
    throw std::invalid_argument("decompose_difference: f0 is not an SL member");

  const double coeff = std::max(0.0, 1.0 - f.norm() / 2.0);
  Decomposition d{positive_part(f), negative_part(f)};
  for (int i = 0; i < g.size; ++i) {
    d.g.weights[static_cast<std::size_t>(i)] += coeff * base.weights[static_cast<std::size_t>(i)];
    d.h.weights[static_cast<std::size_t>(i)] += coeff * base.weights[static_cast<std::size_t>(i)];
  }
  if (!sl_membership(d.g, g) || !sl_membership(d.h, g))
    throw std::logic_error("decompose_difference: outputs left SL (internal error)");
  return d;
}

struct UniquenessReport {
  bool unique = false;
  Decomposition primary;
  // Two decompositions from distinct vertex choices of f0, in the Multiple case.
  std::optional<std::pair<Decomposition, Decomposition>> witnesses;
};

// Unique iff ||f|| = 2 (then g = f^+, h = f^- and g ^ h = 0) or the free part
// is a single atom (the maximal analogue, where f must be 0).
inline UniquenessReport decomposition_uniqueness_probe(const FiniteFunctional& f,
                                                       const GroundSet& g) {
  DifferenceConditions c = difference_conditions(f, g);
  if (!c.all())
    throw ConditionViolation(c, "decomposition_uniqueness_probe: conditions failed: " + c.failed());

  UniquenessReport rep;
  if (std::abs(f.norm() - 2.0) <= kEnumTol) {
    rep.unique = true;
    rep.primary = Decomposition{positive_part(f), negative_part(f)};
    FiniteFunctional meet = lattice_inf(rep.primary.g, rep.primary.h);
    if (meet.norm() > kAlgebraTol)
      throw std::logic_error("uniqueness probe: f^+ ^ f^- != 0 (internal error)");
    return rep;
  }
  if (g.free_count() == 1) {
    rep.unique = true;
    rep.primary = decompose_difference(f, g);
    return rep;
  }
  auto free = g.free_indices();
  rep.primary = decompose_difference(f, g);
  rep.witnesses = std::make_pair(
      decompose_difference(f, g, FiniteFunctional::vertex(g.size, free[0])),
      decompose_difference(f, g, FiniteFunctional::vertex(g.size, free[1])));
  return rep;
}

// f = kappa (g - h) for any kappa >= ||f||/2: decompose f / kappa.
inline Decomposition scaled_decomposition(const FiniteFunctional& f, const GroundSet& g,
                                          double kappa) {
  DifferenceConditions c = difference_conditions(f, g);
  c.norm_at_most_two = true;  // (b) is not required here; kappa takes its place
  if (!c.all())
    throw ConditionViolation(c, "scaled_decomposition: conditions failed: " + c.failed());
  if (!(kappa > 0) || kappa < f.norm() / 2.0 - kAlgebraTol)
    throw std::invalid_argument("scaled_decomposition: kappa must be positive and >= ||f||/2");
  FiniteFunctional scaled = f;
  for (double& w : scaled.weights) w /= kappa;
  return decompose_difference(scaled, g);
}

struct RepresentationReport {
  double direct = 0;       // f(x)
  double choquet_avg = 0;  // Choquet integral of i -> x_i over rho on the free part
  bool pass = false;
};

// Capacity representation at the finite stage: rho is the additive capacity
// on the free part built from f's weights; integrating the coordinate
// evaluations i -> x_i against it must reproduce f(x) for every SL member.
inline RepresentationReport representation_check(const FiniteFunctional& f,
                                                 std::span<const double> x, const GroundSet& g) {
  if (!sl_membership(f, g))
    throw std::invalid_argument("representation_check: f is not an SL member");
  if (static_cast<int>(x.size()) != g.size)
    throw std::invalid_argument("representation_check: vector size mismatch");

  auto free = g.free_indices();
  std::vector<double> rho_weights, x_free;
  for (int i : free) {
    rho_weights.push_back(std::max(0.0, f.weights[static_cast<std::size_t>(i)]));
    x_free.push_back(x[static_cast<std::size_t>(i)]);
  }
  FiniteCapacity rho = FiniteCapacity::additive(rho_weights);

  RepresentationReport rep;
  rep.direct = f(x);
  rep.choquet_avg = choquet(x_free, rho);
  rep.pass = std::abs(rep.direct - rep.choquet_avg) <= kAlgebraTol;
  return rep;
}

struct ValueInterval {
  double lo = 0, hi = 0;
};

// {f(x) : f in SL} = [min_F x_i, max_F x_i]; the null coordinates are invisible.
inline ValueInterval value_range(std::span<const double> x, const GroundSet& g) {
  if (static_cast<int>(x.size()) != g.size)
    throw std::invalid_argument("value_range: vector size mismatch");
  ValueInterval out{std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  for (int i : g.free_indices()) {
    out.lo = std::min(out.lo, x[static_cast<std::size_t>(i)]);
    out.hi = std::max(out.hi, x[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace limitlab
