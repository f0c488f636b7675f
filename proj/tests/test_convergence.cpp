#include <catch2/catch_amalgamated.hpp>

#include "limitlab/convergence.hpp"

using namespace limitlab;
using Catch::Matchers::WithinAbs;

namespace {
constexpr Index kHorizon = 100000;
constexpr double kEps = 0.05;
constexpr double kTol = 0.01;

bool has_candidate_near(const ClusterReport& rep, double eta, double slack) {
  for (double c : rep.candidates)
    if (std::abs(c - eta) <= slack) return true;
  return false;
}
}  // namespace

TEST_CASE("cluster sets of the standard sequences", "[convergence]") {
  auto z = IdealModel::density();

  auto constant = cluster_set(SequenceSpec::constant(1), z, kHorizon, kEps, kTol);
  REQUIRE(constant.candidates.size() == 1);
  CHECK_THAT(constant.candidates[0], WithinAbs(1.0, kEps));
  CHECK(constant.undecided_points.empty());

  auto evens = cluster_set(SequenceSpec::indicator(SetSpec::evens()), z, kHorizon, kEps, kTol);
  REQUIRE(evens.candidates.size() == 2);
  CHECK_THAT(evens.candidates[0], WithinAbs(0.0, kEps));
  CHECK_THAT(evens.candidates[1], WithinAbs(1.0, kEps));

  auto periodic = cluster_set(SequenceSpec::periodic({0, 1, 2}), z, kHorizon, kEps, kTol);
  REQUIRE(periodic.candidates.size() == 3);
  CHECK(has_candidate_near(periodic, 0, kEps));
  CHECK(has_candidate_near(periodic, 1, kEps));
  CHECK(has_candidate_near(periodic, 2, kEps));

  // nonempty for every bounded sequence at an adequate horizon
  auto ad = cluster_set(SequenceSpec::alternating_decay(), IdealModel::fin(), kHorizon, kEps, kTol);
  REQUIRE(!ad.candidates.empty());
  CHECK(has_candidate_near(ad, -1, kEps));
  CHECK(has_candidate_near(ad, 1, kEps));

  CHECK_THROWS_AS(cluster_set(SequenceSpec::constant(1), z, 100, kEps, kTol),
                  std::invalid_argument);
}

TEST_CASE("ideal limsup and liminf via level-set bisection", "[convergence]") {
  auto z = IdealModel::density();

  auto c = ideal_limsup(SequenceSpec::constant(0.75), IdealModel::fin(), kHorizon, kTol);
  REQUIRE(c.point());
  CHECK_THAT(c.value(), WithinAbs(0.75, 1e-5));

  auto evens = SequenceSpec::indicator(SetSpec::evens());
  auto ls = ideal_limsup(evens, z, kHorizon, kTol);
  auto li = ideal_liminf(evens, z, kHorizon, kTol);
  REQUIRE(ls.point());
  REQUIRE(li.point());
  CHECK_THAT(ls.value(), WithinAbs(1.0, 1e-5));
  CHECK_THAT(li.value(), WithinAbs(0.0, 1e-5));

  // squares have density zero, so the Z-limsup collapses to 0
  auto sq = ideal_limsup(SequenceSpec::indicator(SetSpec::squares()), z, kHorizon, kTol);
  REQUIRE(sq.point());
  CHECK_THAT(sq.value(), WithinAbs(0.0, 1e-5));

  // agrees with the cluster-scan extremes within eps + resolution
  auto cl = cluster_set(evens, z, kHorizon, kEps, kTol);
  CHECK(std::abs(ls.value() - cl.candidates.back()) <= kEps + ls.resolution);
  CHECK(std::abs(li.value() - cl.candidates.front()) <= kEps + li.resolution);
}

TEST_CASE("convergence verdicts mirror the single-cluster criterion", "[convergence]") {
  auto z = IdealModel::density();

  auto harmonic = is_ideal_convergent(SequenceSpec::harmonic(1), IdealModel::fin(), kHorizon, kEps, kTol);
  REQUIRE(harmonic.outcome == ConvergenceReport::Outcome::Yes);
  CHECK_THAT(*harmonic.eta, WithinAbs(0.0, kEps));
  REQUIRE(harmonic.exceptional_evidence);
  CHECK(harmonic.exceptional_evidence->verdict == Verdict::In);

  auto squares = is_ideal_convergent(SequenceSpec::indicator(SetSpec::squares()), z, kHorizon, kEps, kTol);
  REQUIRE(squares.outcome == ConvergenceReport::Outcome::Yes);
  CHECK_THAT(*squares.eta, WithinAbs(0.0, kEps));

  auto evens = is_ideal_convergent(SequenceSpec::indicator(SetSpec::evens()), z, kHorizon, kEps, kTol);
  CHECK(evens.outcome == ConvergenceReport::Outcome::No);
  CHECK_FALSE(evens.eta.has_value());

  // values 0.1 apart merge into a single wide run of NotIn grid points; the
  // run width alone certifies two distinct cluster points, so: No
  auto fat = is_ideal_convergent(SequenceSpec::periodic({0, 0.1, 0.2}), z, kHorizon, kEps, kTol);
  REQUIRE(fat.cluster.candidates.size() == 1);
  CHECK(fat.outcome == ConvergenceReport::Outcome::No);
  auto fat_dist = distance_to_ideal_convergent(SequenceSpec::periodic({0, 0.1, 0.2}), z, kHorizon, kTol);
  CHECK_THAT(fat_dist.distance(), WithinAbs(0.1, 1e-4));
}

TEST_CASE("istar witnesses", "[convergence]") {
  auto z = IdealModel::density();

  // ordinary convergence: the witness is a finite prefix set
  auto h = istar_witness(SequenceSpec::harmonic(1), IdealModel::fin(), 0.0, kHorizon, kTol);
  CHECK(h.ok);
  CHECK(h.evidence.verdict == Verdict::In);

  // exact witness: the squares themselves
  auto sq = istar_witness(SequenceSpec::indicator(SetSpec::squares()), z, 0.0, kHorizon, kTol);
  CHECK(sq.ok);
  for (Index n : enumerate_window(sq.witness, 100, 2000))
    CHECK(member(SetSpec::squares(), n));

  // no witness exists: the evens are not density-null for any construction
  auto ev = istar_witness(SequenceSpec::indicator(SetSpec::evens()), z, 0.0, kHorizon, kTol);
  CHECK_FALSE(ev.ok);
  CHECK(ev.evidence.verdict == Verdict::NotIn);
  CHECK(ev.bands_hold);

  // custom schedules are honored and validated
  IstarSchedule slow;
  for (int j = 0; j < 9; ++j) {
    slow.epsilons.push_back(std::pow(3.0, -j));
    slow.cutoffs.push_back(Index{1} << (2 * j + 3));
  }
  auto custom = istar_witness(SequenceSpec::harmonic(1), IdealModel::fin(), 0.0, kHorizon, kTol, slow);
  CHECK(custom.ok);
  CHECK(custom.bands_hold);

  IstarSchedule bad;
  bad.epsilons = {0.5, 0.5};
  bad.cutoffs = {4, 16};
  CHECK_THROWS_AS(istar_witness(SequenceSpec::harmonic(1), IdealModel::fin(), 0.0, kHorizon, kTol, bad),
                  std::invalid_argument);
}

TEST_CASE("distance formula", "[convergence]") {
  auto z = IdealModel::density();

  // Harmonic under Fin: the limsup pins to ~2/horizon, while the liminf
  // probes late-starting tail sets {x <= t} whose early dyadic windows are
  // empty, so the Fin NotIn rule cannot fire and the estimate widens to an
  // honest interval below ~1/32. The hull still sits just above 0.
  auto conv = distance_to_ideal_convergent(SequenceSpec::harmonic(1), IdealModel::fin(), kHorizon, kTol);
  REQUIRE(conv.limsup.point());
  CHECK(std::abs(conv.limsup.value()) <= 1e-4);
  CHECK(conv.liminf.undecided_probes > 0);
  CHECK(conv.liminf.lo >= 0.0);
  CHECK(conv.liminf.hi <= 1.0 / 32.0 + 1e-6);

  auto evens = distance_to_ideal_convergent(SequenceSpec::indicator(SetSpec::evens()), z, kHorizon, kTol);
  REQUIRE(evens.point());
  CHECK_THAT(evens.distance(), WithinAbs(0.5, 1e-4));
  CHECK(evens.eta_minus() <= evens.eta_plus());
  CHECK_THAT(evens.eta0() + evens.delta0(), WithinAbs(evens.eta_plus(), 1e-12));
  CHECK_THAT(evens.eta0() - evens.delta0(), WithinAbs(evens.eta_minus(), 1e-12));

  auto ad = distance_to_ideal_convergent(SequenceSpec::alternating_decay(), IdealModel::fin(), kHorizon, kTol);
  REQUIRE(ad.point());
  CHECK_THAT(ad.distance(), WithinAbs(1.0, 1e-4));

  // the log-weighted kind sees the same two cluster values for the evens
  auto wd = distance_to_ideal_convergent(SequenceSpec::indicator(SetSpec::evens()),
                                         IdealModel::weighted_density_harmonic(), kHorizon, kTol);
  REQUIRE(wd.point());
  CHECK_THAT(wd.distance(), WithinAbs(0.5, 1e-4));
}

TEST_CASE("approximants against exactly known distance reports", "[convergence]") {
  auto z = IdealModel::density();

  SECTION("evens under density, k = 1: y is constantly eta0") {
    auto dist = distance_to_ideal_convergent(SequenceSpec::indicator(SetSpec::evens()), z, kHorizon, kTol);
    auto ap = approximant(SequenceSpec::indicator(SetSpec::evens()), z, dist, 1, kHorizon, kTol);
    CHECK_FALSE(ap.degenerate);
    CHECK_THAT(ap.achieved, WithinAbs(0.5, 1e-5));
    CHECK_THAT(ap.threshold, WithinAbs(0.75, 1e-5));
    REQUIRE(ap.exceptional_evidence);
    CHECK(ap.exceptional_evidence->verdict == Verdict::In);
    // A_1 is empty, so y == eta0 everywhere
    for (Index n = 0; n < 16; ++n) CHECK_THAT(eval_seq(ap.y, n), WithinAbs(0.5, 1e-5));
  }

  SECTION("alternating decay under fin, exact report: A_1 = {0,1}, achieved 4/3") {
    DistanceReport exact;
    exact.limsup = Estimate{1.0, 1.0, 1e-6, 0};
    exact.liminf = Estimate{-1.0, -1.0, 1e-6, 0};
    auto ap = approximant(SequenceSpec::alternating_decay(), IdealModel::fin(), exact, 1, kHorizon, kTol);
    CHECK(ap.threshold == 1.5);
    REQUIRE(ap.exceptional_set);
    CHECK(enumerate_window(*ap.exceptional_set, 0, 100) == std::vector<Index>{0, 1});
    CHECK_THAT(ap.achieved, WithinAbs(4.0 / 3.0, 1e-12));
    CHECK(ap.achieved <= ap.threshold);
    CHECK(eval_seq(ap.y, 0) == 2.0);             // kept from x on A_1
    CHECK(eval_seq(ap.y, 2) == 0.0);             // replaced by eta0 = 0
  }

  SECTION("I-convergent input takes the degenerate branch") {
    auto dist = distance_to_ideal_convergent(SequenceSpec::indicator(SetSpec::squares()), z, kHorizon, kTol);
    REQUIRE(dist.distance() <= kTol);
    auto ap = approximant(SequenceSpec::indicator(SetSpec::squares()), z, dist, 2, kHorizon, kTol);
    CHECK(ap.degenerate);
    CHECK(ap.achieved == 0.0);
    CHECK(ap.y.describe() == SequenceSpec::indicator(SetSpec::squares()).describe());
  }

  SECTION("interval reports are rejected") {
    DistanceReport wide;
    wide.limsup = Estimate{0.0, 0.5, 1e-6, 3};
    wide.liminf = Estimate{0.0, 0.0, 1e-6, 0};
    CHECK_THROWS_AS(approximant(SequenceSpec::constant(1), z, wide, 1, kHorizon, kTol),
                    std::invalid_argument);
  }

  SECTION("achieved never beats the closed form and shrinks with k") {
    auto x = SequenceSpec::periodic({0, 1, 2});
    auto dist = distance_to_ideal_convergent(x, z, kHorizon, kTol);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 4; ++k) {
      auto ap = approximant(x, z, dist, k, kHorizon, kTol);
      CHECK(ap.achieved >= dist.distance() - kTol);
      CHECK(ap.achieved <= ap.threshold);
      CHECK(ap.achieved <= prev + 1e-12);
      prev = ap.achieved;
    }
  }
}

TEST_CASE("extraction: counting blocks under fin", "[convergence]") {
  auto evens = SequenceSpec::indicator(SetSpec::evens());
  auto rep = extract_limit_point(evens, IdealModel::fin(), 1.0, 100);

  // counting oracle: stage k needs k+1 evens, so the cutoffs are frozen
  std::vector<Index> expect{0, 3, 9, 17, 27, 39, 53, 69, 87};
  REQUIRE(rep.cutoffs.size() >= expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(rep.cutoffs[i] == expect[i]);
  REQUIRE(rep.completed_stages >= 8);

  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    const auto& b = rep.blocks[i];
    CHECK(b.phi > b.stage);
    CHECK(b.phi == static_cast<double>(b.members));
    CHECK(b.max_deviation < std::pow(2.0, -b.stage));
    CHECK(rep.phi_trace[i] > b.stage);
  }

  // the union spec reproduces the blocks exactly
  REQUIRE(rep.union_spec);
  std::vector<Index> expected_members;
  for (const auto& b : rep.blocks)
    for (Index n = b.begin; n < b.end; ++n)
      if (n % 2 == 0) expected_members.push_back(n);
  CHECK(enumerate_window(*rep.union_spec, 0, rep.cutoffs.back()) == expected_members);
}

TEST_CASE("extraction: harmonic partial-sum oracle for the constant sequence", "[convergence]") {
  auto rep = extract_limit_point(SequenceSpec::constant(1), IdealModel::summable_harmonic(), 1.0, 100000);
  // m_k = least m with sum_{n in [m_{k-1}, m)} 1/(n+1) > k (direct-summation oracle)
  CHECK(rep.cutoffs == std::vector<Index>{0, 2, 19, 392, 21430});
  CHECK(rep.completed_stages == 4);
  CHECK(rep.stalled_stage == 5);
  for (const auto& b : rep.blocks) {
    CHECK(b.phi > b.stage);
    CHECK(b.max_deviation == 0.0);
  }
}

TEST_CASE("extraction stalls immediately at a non-cluster eta", "[convergence]") {
  auto evens = SequenceSpec::indicator(SetSpec::evens());
  auto rep = extract_limit_point(evens, IdealModel::fin(), 0.5, kHorizon);
  CHECK(rep.completed_stages == 0);
  REQUIRE(rep.stalled_stage);
  CHECK(*rep.stalled_stage <= 3);
  CHECK_FALSE(rep.union_spec);

  auto rep2 = extract_limit_point(evens, IdealModel::summable_harmonic(), 0.5, kHorizon);
  CHECK(*rep2.stalled_stage <= 3);
}

TEST_CASE("extraction rejects non-F-sigma ideals", "[convergence]") {
  CHECK_THROWS_AS(
      extract_limit_point(SequenceSpec::constant(1), IdealModel::density(), 1.0, kHorizon),
      std::invalid_argument);
  CHECK_THROWS_AS(extract_limit_point(SequenceSpec::constant(1),
                                      IdealModel::weighted_density_harmonic(), 1.0, kHorizon),
                  std::invalid_argument);
}

TEST_CASE("extracted limit points are cluster points", "[convergence]") {
  auto x = SequenceSpec::indicator(SetSpec::squares());
  auto fin = IdealModel::fin();
  auto cl = cluster_set(x, fin, kHorizon, kEps, kTol);
  for (double eta : cl.candidates) {
    auto rep = extract_limit_point(x, fin, eta, kHorizon);
    CHECK(rep.completed_stages >= 5);
    double res = std::max(kEps, std::pow(2.0, -rep.completed_stages));
    CHECK(has_candidate_near(cl, eta, res));
  }
}

TEST_CASE("limsup covariance under affine maps", "[convergence]") {
  auto z = IdealModel::density();
  auto evens = SequenceSpec::indicator(SetSpec::evens());
  double base = ideal_limsup(evens, z, kHorizon, kTol).value();
  auto y = SequenceSpec::sum(SequenceSpec::scale(2.0, evens), SequenceSpec::constant(0.25));
  CHECK_THAT(ideal_limsup(y, z, kHorizon, kTol).value(), WithinAbs(2.0 * base + 0.25, 1e-4));
}
