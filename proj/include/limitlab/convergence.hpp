#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "limitlab/ideal.hpp"
#include "limitlab/seqset.hpp"

// Sequence-side diagnostics: cluster sets, ideal limsup/liminf via level-set
// bisection, convergence verdicts, I*-witness construction, the distance
// formula with its constructive approximants, and F_sigma limit-point
// extraction. Everything is a pure function of (spec, ideal, parameters).

namespace limitlab {

// Interval estimate from bisection. Probes that come back Undecided widen the
// answer to the hull of the two forced runs; a hull no wider than a few
// resolutions is still reported as a point (it is bisection noise, not a
// genuine interval).
struct Estimate {
  double lo = 0;
  double hi = 0;
  double resolution = 0;
  int undecided_probes = 0;

  bool point() const { return hi - lo <= 8.0 * resolution; }
  double value() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

struct ClusterReport {
  std::vector<double> candidates;        // merged, sorted, deduplicated at resolution eps
  std::vector<std::pair<double, double>> runs;  // grid span [first, last] per candidate
  std::vector<double> undecided_points;  // grid etas whose level set came back Undecided
  double epsilon = 0;
  double tolerance = 0;
  Index horizon = 0;
  // evidence for every grid point that was NotIn or Undecided
  std::vector<std::pair<double, MembershipEvidence>> evidence;
};

// Scan the value grid {-B, -B+eps, ..., B}; eta is a candidate iff the level
// set {n : |x_n - eta| <= eps} is NotIn. Adjacent candidate grid points merge
// to the midpoint of their run (Gamma is closed; eps cannot separate them).
inline ClusterReport cluster_set(const SequenceSpec& x, const IdealModel& ideal, Index horizon,
                                 double epsilon, double tol) {
  if (!(epsilon > 0)) throw std::invalid_argument("cluster_set: epsilon must be positive");
  if (horizon < 1000) throw std::invalid_argument("cluster_set: horizon must be >= 1e3");

  ClusterReport rep;
  rep.epsilon = epsilon;
  rep.tolerance = tol;
  rep.horizon = horizon;

  const double b = x.bound();
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double eta = -b + i * epsilon;
    if (eta > b + 0.5 * epsilon) break;
    grid.push_back(std::min(eta, b));
    if (eta >= b) break;
  }

  std::vector<bool> hit(grid.size(), false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    MembershipEvidence ev = decide_membership(ideal, band_closed(x, grid[i], epsilon), horizon, tol);
    if (ev.verdict == Verdict::NotIn) {
      hit[i] = true;
      rep.evidence.emplace_back(grid[i], std::move(ev));
    } else if (ev.verdict == Verdict::Undecided) {
      rep.undecided_points.push_back(grid[i]);
      rep.evidence.emplace_back(grid[i], std::move(ev));
    }
  }

  for (std::size_t i = 0; i < grid.size();) {
    if (!hit[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && hit[j + 1]) ++j;
    rep.candidates.push_back(0.5 * (grid[i] + grid[j]));
    rep.runs.emplace_back(grid[i], grid[j]);
    i = j + 1;
  }
  return rep;
}

namespace detail {

struct BisectRun {
  double value = 0;
  int undecided = 0;
};

// Bracketed bisection: level(hi) acts as In, level(lo) as NotIn, both
// maintained as invariants. Undecided probes are forced per treat_undecided_in.
template <typename LevelFn>
inline BisectRun bisect(LevelFn&& level, double lo, double hi, double resolution,
                        bool treat_undecided_in, bool in_moves_hi) {
  BisectRun run;
  while (hi - lo > resolution) {
    double mid = 0.5 * (lo + hi);
    Verdict v = level(mid);
    if (v == Verdict::Undecided) {
      ++run.undecided;
      v = treat_undecided_in ? Verdict::In : Verdict::NotIn;
    }
    if ((v == Verdict::In) == in_moves_hi)
      hi = mid;
    else
      lo = mid;
  }
  run.value = 0.5 * (lo + hi);
  return run;
}

template <typename LevelFn>
inline Estimate two_sided_bisect(LevelFn&& level, double lo, double hi, double resolution,
                                 bool in_moves_hi) {
  BisectRun first = bisect(level, lo, hi, resolution, true, in_moves_hi);
  Estimate est;
  est.resolution = resolution;
  if (first.undecided == 0) {
    est.lo = est.hi = first.value;
    return est;
  }
  BisectRun second = bisect(level, lo, hi, resolution, false, in_moves_hi);
  est.lo = std::min(first.value, second.value);
  est.hi = std::max(first.value, second.value);
  est.undecided_probes = std::max(first.undecided, second.undecided);
  return est;
}

}  // namespace detail

// I-limsup as the infimum of upper witnesses: t is an upper witness iff
// {n : x_n >= t} is In. Bisection over [-B, B] to resolution B * 2^-20.
inline Estimate ideal_limsup(const SequenceSpec& x, const IdealModel& ideal, Index horizon,
                             double tol, double resolution = 0) {
  if (horizon < 1000) throw std::invalid_argument("ideal_limsup: horizon must be >= 1e3");
  const double b = x.bound();
  if (b == 0) return Estimate{0, 0, 0, 0};
  const double res = resolution > 0 ? resolution : b * 0x1.0p-20;
  auto level = [&](double t) {
    return decide_membership(ideal, SetSpec::level_set(x, Cmp::Ge, t), horizon, tol).verdict;
  };
  // t = B + res gives the empty level set (In); t = -B gives omega (NotIn).
  return detail::two_sided_bisect(level, -b, b + res, res, /*in_moves_hi=*/true);
}

// I-liminf as the supremum of lower witnesses: t is a lower witness iff
// {n : x_n <= t} is In.
inline Estimate ideal_liminf(const SequenceSpec& x, const IdealModel& ideal, Index horizon,
                             double tol, double resolution = 0) {
  if (horizon < 1000) throw std::invalid_argument("ideal_liminf: horizon must be >= 1e3");
  const double b = x.bound();
  if (b == 0) return Estimate{0, 0, 0, 0};
  const double res = resolution > 0 ? resolution : b * 0x1.0p-20;
  auto level = [&](double t) {
    return decide_membership(ideal, SetSpec::level_set(x, Cmp::Le, t), horizon, tol).verdict;
  };
  // In moves lo upward here: lower witnesses sit below the answer.
  return detail::two_sided_bisect(level, -b - res, b, res, /*in_moves_hi=*/false);
}

struct ConvergenceReport {
  enum class Outcome { Yes, No, Undecided };
  Outcome outcome = Outcome::Undecided;
  std::optional<double> eta;
  ClusterReport cluster;
  std::optional<MembershipEvidence> exceptional_evidence;  // complement level set, Yes case
};

inline const char* outcome_name(ConvergenceReport::Outcome o) {
  switch (o) {
    case ConvergenceReport::Outcome::Yes: return "Yes";
    case ConvergenceReport::Outcome::No: return "No";
    case ConvergenceReport::Outcome::Undecided: return "Undecided";
  }
  return "?";
}

// Mirrors the V(I) criterion |Gamma_x(I)| = 1: Yes(eta) when the cluster scan
// finds exactly one candidate whose run is no wider than a point can produce
// and the complement of the (merged) band is In. A run wider than 2*eps
// already certifies two cluster points — the NotIn bands at its ends are
// disjoint — so it is a No even though merging reports it as one candidate.
inline ConvergenceReport is_ideal_convergent(const SequenceSpec& x, const IdealModel& ideal,
                                             Index horizon, double epsilon, double tol) {
  ConvergenceReport rep;
  rep.cluster = cluster_set(x, ideal, horizon, epsilon, tol);
  if (rep.cluster.candidates.size() >= 2) {
    rep.outcome = ConvergenceReport::Outcome::No;
    return rep;
  }
  if (rep.cluster.candidates.size() == 1) {
    double eta = rep.cluster.candidates[0];
    auto [first, last] = rep.cluster.runs[0];
    if (last - first > 2.0 * epsilon * (1.0 + 1e-9)) {
      rep.outcome = ConvergenceReport::Outcome::No;
      return rep;
    }
    double radius = 0.5 * (last - first) + epsilon;  // covers every band in the run
    MembershipEvidence ev =
        decide_membership(ideal, SetSpec::complement(band_closed(x, eta, radius)), horizon, tol);
    if (ev.verdict == Verdict::In) {
      rep.outcome = ConvergenceReport::Outcome::Yes;
      rep.eta = eta;
    }
    rep.exceptional_evidence = std::move(ev);
  }
  return rep;
}

struct IstarReport {
  bool ok = false;
  double eta = 0;
  SetSpec witness;
  MembershipEvidence evidence;
  bool bands_hold = false;  // off the witness, |x_n - eta| < eps_j on each time block
};

// eps_j bands paired with the ends t_j of the time blocks [t_{j-1}, t_j).
struct IstarSchedule {
  std::vector<double> epsilons;  // positive, decreasing to 0
  std::vector<Index> cutoffs;    // strictly increasing

  // the default: eps_j = 2^-j, t_j = 4^j, until the horizon is covered
  static IstarSchedule dyadic(Index horizon) {
    IstarSchedule s;
    for (int j = 0;; ++j) {
      s.epsilons.push_back(std::pow(2.0, -j));
      Index t = Index{1} << (2 * j);
      s.cutoffs.push_back(t);
      if (t >= horizon) break;
    }
    return s;
  }
};

// Greedy I*-witness: A = union_j ({|x - eta| >= eps_j} n [t_{j-1}, t_j)),
// truncated at the schedule's last block. Off A the sequence enters each
// eps_j-band permanently before t_j; the construction succeeds when A is In.
inline IstarReport istar_witness(const SequenceSpec& x, const IdealModel& ideal, double eta,
                                 Index horizon, double tol, const IstarSchedule& schedule) {
  const auto& eps = schedule.epsilons;
  const auto& ends = schedule.cutoffs;
  if (eps.empty() || eps.size() != ends.size())
    throw std::invalid_argument("istar_witness: schedule bands and cutoffs must pair up");
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (!(eps[j] > 0) || (j > 0 && eps[j] >= eps[j - 1]))
      throw std::invalid_argument("istar_witness: epsilons must be positive and decreasing");
    if (j > 0 && ends[j] <= ends[j - 1])
      throw std::invalid_argument("istar_witness: cutoffs must be strictly increasing");
  }

  std::optional<SetSpec> acc;
  for (std::size_t j = 0; j < ends.size(); ++j) {
    Index begin = j == 0 ? 0 : ends[j - 1];
    SetSpec piece = SetSpec::set_intersection(outside_band(x, eta, eps[j]),
                                              SetSpec::interval(begin, ends[j]));
    acc = acc ? SetSpec::set_union(*acc, piece) : piece;
  }

  IstarReport rep{false, eta, *acc, decide_membership(ideal, *acc, horizon, tol), true};
  for (std::size_t j = 0; j < ends.size() && rep.bands_hold; ++j) {
    Index begin = j == 0 ? 0 : ends[j - 1];
    Index hi = std::min(ends[j], horizon);
    for (Index n = begin; n < hi; ++n)
      if (!rep.witness.contains(n) && !(std::abs(x.at(n) - eta) < eps[j])) {
        rep.bands_hold = false;
        break;
      }
  }
  rep.ok = rep.evidence.verdict == Verdict::In && rep.bands_hold;
  return rep;
}

inline IstarReport istar_witness(const SequenceSpec& x, const IdealModel& ideal, double eta,
                                 Index horizon, double tol) {
  return istar_witness(x, ideal, eta, horizon, tol, IstarSchedule::dyadic(horizon));
}

struct DistanceReport {
  Estimate limsup;
  Estimate liminf;

  bool point() const { return limsup.point() && liminf.point(); }
  double eta_plus() const { return limsup.value(); }
  double eta_minus() const { return liminf.value(); }
  double eta0() const { return 0.5 * (eta_plus() + eta_minus()); }
  double delta0() const { return std::max(0.0, 0.5 * (eta_plus() - eta_minus())); }
  double distance() const { return delta0(); }
};

// dist(x, c(I) n l_inf) = (I-limsup x - I-liminf x) / 2. Interval estimates
// propagate from the two bisections. Sub-resolution inversions (liminf
// marginally above limsup when the true values coincide) collapse to the
// common midpoint; anything wider is an internal inconsistency.
inline DistanceReport distance_to_ideal_convergent(const SequenceSpec& x, const IdealModel& ideal,
                                                   Index horizon, double tol,
                                                   double resolution = 0) {
  DistanceReport rep;
  rep.limsup = ideal_limsup(x, ideal, horizon, tol, resolution);
  rep.liminf = ideal_liminf(x, ideal, horizon, tol, resolution);
  if (rep.point() && rep.liminf.value() > rep.limsup.value()) {
    double gap = rep.liminf.value() - rep.limsup.value();
    if (gap > 4.0 * (rep.limsup.resolution + rep.liminf.resolution))
      throw std::logic_error("distance: liminf estimate exceeds limsup estimate beyond resolution");
    double mid = 0.5 * (rep.limsup.value() + rep.liminf.value());
    rep.limsup.lo = rep.limsup.hi = mid;
    rep.liminf.lo = rep.liminf.hi = mid;
  }
  return rep;
}

struct ApproximantReport {
  int k = 0;
  SequenceSpec y;
  double achieved = 0;   // sup_{n < horizon, n not in A_k} |x_n - eta0| (= ||x - y|| on the window)
  double threshold = 0;  // delta0 * (1 + 2^-k)
  bool degenerate = false;
  std::optional<SetSpec> exceptional_set;
  std::optional<MembershipEvidence> exceptional_evidence;
};

// The constructive approximant y^k: equal to x on A_k = {|x - eta0| >= delta0(1+2^-k)}
// and eta0 elsewhere. Requires a point DistanceReport. When delta0 <= tol the
// sequence is already I-convergent at tolerance scale and y = x with achieved 0.
inline ApproximantReport approximant(const SequenceSpec& x, const IdealModel& ideal,
                                     const DistanceReport& dist, int k, Index horizon,
                                     double tol) {
  if (k < 0) throw std::invalid_argument("approximant: k must be >= 0");
  if (!dist.point())
    throw std::invalid_argument("approximant: distance report has interval estimates");

  const double eta0 = dist.eta0();
  const double delta0 = dist.delta0();
  const double threshold = delta0 * (1.0 + std::pow(2.0, -k));

  if (delta0 <= tol) return ApproximantReport{k, x, 0.0, threshold, true, {}, {}};

  SetSpec a_k = outside_band(x, eta0, threshold);
  MembershipEvidence ev = decide_membership(ideal, a_k, horizon, tol);
  if (ev.verdict != Verdict::In)
    throw std::runtime_error(
        "approximant: exceptional set A_k is " + std::string(verdict_name(ev.verdict)) +
        " — limsup/liminf estimates upstream are inconsistent");

  double achieved = 0;
  for (Index n = 0; n < horizon; ++n) {
    double dev = std::abs(x.at(n) - eta0);
    if (dev < threshold) achieved = std::max(achieved, dev);
  }

  ApproximantReport rep{k,
                        SequenceSpec::piecewise(a_k, x, SequenceSpec::constant(eta0)),
                        achieved,
                        threshold,
                        false,
                        std::move(a_k),
                        std::move(ev)};
  return rep;
}

struct ExtractionBlock {
  int stage = 0;
  Index begin = 0, end = 0;  // [m_{k-1}, m_k)
  Index members = 0;
  double phi = 0;            // submeasure of A_k n [begin, end); exceeds the stage level
  double max_deviation = 0;  // max |x_n - eta| over the block's members (< 2^-stage)
};

struct ExtractionReport {
  double eta = 0;
  std::vector<Index> cutoffs;  // m_0 < m_1 < ... < m_{k*}
  std::vector<ExtractionBlock> blocks;
  std::vector<double> phi_trace;  // phi(B n [0, m_k)), cumulative over the disjoint blocks
  int completed_stages = 0;       // k*
  std::optional<int> stalled_stage;
  std::optional<SetSpec> union_spec;  // B, materialized for runs of <= 64 stages
};

// F_sigma limit-point extraction. A_k = {n : |x_n - eta| < 2^-k}; m_k is the
// least m > m_{k-1} with submeasure(A_k n [m_{k-1}, m)) > k, i.e. the block
// escapes the level F_k = {phi <= k}. Stops at the largest k* with
// m_{k*} <= horizon; the stage that finds no qualifying m is reported as the
// stalled stage together with the partial extraction.
inline ExtractionReport extract_limit_point(const SequenceSpec& x, const IdealModel& ideal,
                                            double eta, Index horizon) {
  if (!ideal.f_sigma())
    throw std::invalid_argument("extract_limit_point: ideal '" + ideal.name() +
                                "' is not an F_sigma kind");
  if (horizon < 1) throw std::invalid_argument("extract_limit_point: empty horizon");

  ExtractionReport rep;
  rep.eta = eta;
  rep.cutoffs.push_back(0);

  std::vector<SetSpec> block_sets;
  double cumulative_phi = 0;
  for (int k = 1;; ++k) {
    const double radius = std::pow(2.0, -k);
    SetSpec a_k = band_open(x, eta, radius);

    const Index begin = rep.cutoffs.back();
    double phi = 0, maxdev = 0;
    Index members = 0;
    std::optional<Index> end;
    detail::for_each_member_until(a_k, begin, horizon, [&](Index n) {
      phi += ideal.kind() == IdealKind::Fin ? 1.0 : ideal.weight(n);
      ++members;
      maxdev = std::max(maxdev, std::abs(x.at(n) - eta));
      if (phi > static_cast<double>(k)) {
        end = n + 1;
        return false;
      }
      return true;
    });

    if (!end) {
      rep.stalled_stage = k;
      break;
    }
    rep.blocks.push_back(ExtractionBlock{k, begin, *end, members, phi, maxdev});
    block_sets.push_back(SetSpec::set_intersection(a_k, SetSpec::interval(begin, *end)));
    cumulative_phi += phi;
    rep.phi_trace.push_back(cumulative_phi);
    rep.cutoffs.push_back(*end);
  }

  rep.completed_stages = static_cast<int>(rep.cutoffs.size()) - 1;
  if (!block_sets.empty() && block_sets.size() <= 64) {
    SetSpec b = block_sets.front();
    for (std::size_t i = 1; i < block_sets.size(); ++i) b = SetSpec::set_union(b, block_sets[i]);
    rep.union_spec = std::move(b);
  }
  return rep;
}

}  // namespace limitlab
