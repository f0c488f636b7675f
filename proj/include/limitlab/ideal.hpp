#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "limitlab/seqset.hpp"

// Desk-scale ideal models on omega. Genuine membership "A in I" is a limit
// statement, so decisions are three-valued: In / NotIn / Undecided, with the
// tolerance and the dyadic checkpoint schedule recorded in the evidence.

namespace limitlab {

enum class IdealKind { Fin, Summable, Density, WeightedDensity };

enum class Verdict { In, NotIn, Undecided };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::In: return "In";
    case Verdict::NotIn: return "NotIn";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

struct MembershipEvidence {
  Verdict verdict = Verdict::Undecided;
  double tolerance = 0;
  // (horizon, score) pairs, horizons strictly increasing. The verdict is a
  // pure function of this trace and the tolerance.
  std::vector<std::pair<Index, double>> trace;
};

class IdealModel {
 public:
  using WeightFn = std::function<double(Index)>;

  static IdealModel fin() { return IdealModel(IdealKind::Fin, "fin", nullptr); }

  static IdealModel density() { return IdealModel(IdealKind::Density, "density", nullptr); }

  static IdealModel summable(WeightFn weight, std::string name) {
    return IdealModel(IdealKind::Summable, std::move(name), std::move(weight));
  }

  static IdealModel summable_harmonic() {
    return summable([](Index n) { return 1.0 / static_cast<double>(n + 1); }, "summable:harmonic");
  }

  static IdealModel weighted_density(WeightFn weight, std::string name) {
    return IdealModel(IdealKind::WeightedDensity, std::move(name), std::move(weight));
  }

  static IdealModel weighted_density_harmonic() {
    return weighted_density([](Index n) { return 1.0 / static_cast<double>(n + 1); },
                            "weighted-density:harmonic");
  }

  static IdealModel weighted_density_sqrt() {
    return weighted_density([](Index n) { return 1.0 / std::sqrt(static_cast<double>(n + 1)); },
                            "weighted-density:sqrt");
  }

  static IdealModel weighted_density_linear() {
    return weighted_density([](Index n) { return static_cast<double>(n + 1); },
                            "weighted-density:linear");
  }

  IdealKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool f_sigma() const { return kind_ == IdealKind::Fin || kind_ == IdealKind::Summable; }

  // Lazy positivity audit: w_n > 0 is part of the model's obligation.
  double weight(Index n) const {
    double w = weight_(n);
    if (!(w > 0.0) || !std::isfinite(w))
      throw SpecError("ideal '" + name_ + "': weight at n=" + format_index(n) + " is not positive");
    return w;
  }

 private:
  IdealModel(IdealKind kind, std::string name, WeightFn weight)
      : kind_(kind), name_(std::move(name)), weight_(std::move(weight)) {}

  IdealKind kind_;
  std::string name_;
  WeightFn weight_;
};

namespace detail {

// Flat ascending walk over the members of a in [m, n), in bounded chunks so
// dense rule trees never materialize more than one chunk at a time. The
// accumulation order is identical to a single flat enumeration.
template <typename Fn>
inline void for_each_member(const SetSpec& a, Index m, Index n, Fn&& fn) {
  constexpr Index kChunk = Index{1} << 16;
  for (Index lo = m; lo < n;) {
    Index hi = n - lo > kChunk ? lo + kChunk : n;
    for (Index i : a.window(lo, hi)) fn(i);
    lo = hi;
  }
}

// Same walk, stopping as soon as fn returns false.
template <typename Fn>
inline void for_each_member_until(const SetSpec& a, Index m, Index n, Fn&& fn) {
  constexpr Index kChunk = Index{1} << 16;
  for (Index lo = m; lo < n;) {
    Index hi = n - lo > kChunk ? lo + kChunk : n;
    for (Index i : a.window(lo, hi))
      if (!fn(i)) return;
    lo = hi;
  }
}

}  // namespace detail

// Kind-specific evidence score of "A in I" over a window.
//   Density:         |A n [0,N)| / N
//   WeightedDensity: (sum_{n in A n [0,N)} w_n) / s_N
//   Summable:        sum_{n in A n [m,N)} w_n   (tail mass)
//   Fin:             |A n [m,N)|
inline double score(const IdealModel& ideal, const SetSpec& a, Index m, Index n) {
  if (m >= n) throw std::invalid_argument("score: window requires m < N");
  switch (ideal.kind()) {
    case IdealKind::Fin: {
      double c = 0;
      detail::for_each_member(a, m, n, [&](Index) { c += 1.0; });
      return c;
    }
    case IdealKind::Summable: {
      double s = 0;
      detail::for_each_member(a, m, n, [&](Index i) { s += ideal.weight(i); });
      return s;
    }
    case IdealKind::Density: {
      double c = 0;
      detail::for_each_member(a, 0, n, [&](Index) { c += 1.0; });
      return c / static_cast<double>(n);
    }
    case IdealKind::WeightedDensity: {
      double s = 0;
      detail::for_each_member(a, 0, n, [&](Index i) { s += ideal.weight(i); });
      double total = 0;
      for (Index i = 0; i < n; ++i) total += ideal.weight(i);
      return s / total;
    }
  }
  return 0;
}

// Membership decision at the dyadic checkpoints {horizon >> j : horizon >> j >= 64}.
// Density/WeightedDensity score at checkpoint N is the prefix score over [0, N);
// Fin/Summable score is over the window [N/2, N).
inline MembershipEvidence decide_membership(const IdealModel& ideal, const SetSpec& a,
                                            Index horizon, double tol) {
  if (horizon < 64) throw std::invalid_argument("decide_membership: horizon must be >= 64");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("decide_membership: tol must lie in (0,1)");

  std::vector<Index> checkpoints;  // ascending
  for (Index c = horizon; c >= 64; c >>= 1) checkpoints.push_back(c);
  std::reverse(checkpoints.begin(), checkpoints.end());

  // Prefix aggregates are recorded at every checkpoint and every checkpoint
  // half, from one flat ascending pass.
  std::vector<Index> boundaries;
  for (Index c : checkpoints) {
    boundaries.push_back(c);
    boundaries.push_back(c >> 1);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

  const bool weighted =
      ideal.kind() == IdealKind::Summable || ideal.kind() == IdealKind::WeightedDensity;

  std::vector<double> prefix(boundaries.size(), 0.0);  // count or weighted sum over A n [0, b)
  {
    double acc = 0;
    std::size_t bi = 0;
    detail::for_each_member(a, 0, horizon, [&](Index i) {
      while (bi < boundaries.size() && boundaries[bi] <= i) prefix[bi++] = acc;
      acc += weighted ? ideal.weight(i) : 1.0;
    });
    while (bi < boundaries.size()) prefix[bi++] = acc;
  }

  std::vector<double> total(boundaries.size(), 0.0);  // s_b, WeightedDensity only
  if (ideal.kind() == IdealKind::WeightedDensity) {
    double acc = 0;
    std::size_t bi = 0;
    for (Index i = 0; i < horizon; ++i) {
      while (bi < boundaries.size() && boundaries[bi] <= i) total[bi++] = acc;
      acc += ideal.weight(i);
    }
    while (bi < boundaries.size()) total[bi++] = acc;
  }

  auto at = [&](const std::vector<double>& v, Index b) {
    auto it = std::lower_bound(boundaries.begin(), boundaries.end(), b);
    return v[static_cast<std::size_t>(it - boundaries.begin())];
  };

  MembershipEvidence ev;
  ev.tolerance = tol;
  for (Index c : checkpoints) {
    double s = 0;
    switch (ideal.kind()) {
      case IdealKind::Density:
        s = at(prefix, c) / static_cast<double>(c);
        break;
      case IdealKind::WeightedDensity:
        s = at(prefix, c) / at(total, c);
        break;
      case IdealKind::Summable:
      case IdealKind::Fin:
        s = at(prefix, c) - at(prefix, c >> 1);
        break;
    }
    ev.trace.emplace_back(c, s);
  }

  const double last = ev.trace.back().second;
  switch (ideal.kind()) {
    case IdealKind::Density:
    case IdealKind::WeightedDensity: {
      bool settled = true;  // non-increasing over the last three checkpoints
      std::size_t t = ev.trace.size();
      for (std::size_t i = (t >= 3 ? t - 3 : 0); i + 1 < t; ++i)
        settled = settled && ev.trace[i].second >= ev.trace[i + 1].second;
      if (last < tol && settled)
        ev.verdict = Verdict::In;
      else if (last > 10.0 * tol)
        ev.verdict = Verdict::NotIn;
      break;
    }
    case IdealKind::Summable:
    case IdealKind::Fin: {
      bool empty_tail = ideal.kind() == IdealKind::Fin ? last == 0.0 : last < tol;
      bool all_heavy = true;
      for (const auto& [c, s] : ev.trace) all_heavy = all_heavy && s > 10.0 * tol;
      if (empty_tail)
        ev.verdict = Verdict::In;
      else if (all_heavy)
        ev.verdict = Verdict::NotIn;
      break;
    }
  }
  return ev;
}

// The lower semicontinuous submeasure backing the F_sigma kinds; levels
// F_k = {phi <= k}. Density kinds are rejected: the density-zero ideal is
// F_sigma-delta and has no such representation here.
inline double submeasure(const IdealModel& ideal, const std::vector<Index>& finite_set) {
  if (!ideal.f_sigma())
    throw std::invalid_argument("submeasure: ideal '" + ideal.name() + "' is not an F_sigma kind");
  for (std::size_t i = 1; i < finite_set.size(); ++i)
    if (finite_set[i] <= finite_set[i - 1])
      throw std::invalid_argument("submeasure: set must be strictly increasing");
  if (ideal.kind() == IdealKind::Fin) return static_cast<double>(finite_set.size());
  double s = 0;
  for (Index n : finite_set) s += ideal.weight(n);
  return s;
}

}  // namespace limitlab
