#include <catch2/catch_amalgamated.hpp>

#include "limitlab/lab.hpp"
#include "limitlab/rng.hpp"

using namespace limitlab;
using Catch::Matchers::WithinAbs;

namespace {
// the worked 3-atom capacity: singletons 0.2, pairs 0.5, whole space 1
FiniteCapacity example_capacity() {
  return FiniteCapacity(3, {0, 0.2, 0.2, 0.5, 0.2, 0.5, 0.5, 1.0});
}
}  // namespace

TEST_CASE("choquet: exact telescoping evaluation", "[lab]") {
  // constants integrate to c under a normalized capacity
  std::vector<double> c3{2.5, 2.5, 2.5};
  CHECK_THAT(choquet(c3, example_capacity()), WithinAbs(2.5, 1e-15));

  std::vector<double> x01{0, 1};
  CHECK(choquet(x01, FiniteCapacity::uniform(2)) == 0.5);

  std::vector<double> x{3, 1, 2};
  CHECK_THAT(choquet(x, example_capacity()), WithinAbs(1.7, 1e-15));

  CHECK_THROWS_AS(choquet(x01, example_capacity()), std::invalid_argument);
  // everything negative exercises the second improper integral
  std::vector<double> neg{-2, -2, -2};
  CHECK_THAT(choquet(neg, example_capacity()), WithinAbs(-2.0, 1e-15));
}

TEST_CASE("capacity validation", "[lab]") {
  CHECK_THROWS_AS(FiniteCapacity(2, {0.5, 0.5, 0.5, 1.0}), std::invalid_argument);  // nu(empty) != 0
  CHECK_THROWS_AS(FiniteCapacity(2, {0, 0.5, 0.5}), std::invalid_argument);         // wrong size
  CHECK_THROWS_AS(FiniteCapacity(2, {0, 0.7, 0.5, 0.6}), std::invalid_argument);    // not monotone
  CHECK_THROWS_AS(FiniteCapacity::additive({0.5, -0.1}), std::invalid_argument);
  CHECK(example_capacity().normalized());
  CHECK_FALSE(FiniteCapacity::additive({0.3, 0.3}).normalized());
}

TEST_CASE("choquet_riemann cross-validates the exact evaluator", "[lab]") {
  std::vector<double> x01{0, 1};
  CHECK_THAT(choquet_riemann(x01, FiniteCapacity::uniform(2), 1e-4), WithinAbs(0.5, 1e-3));

  std::vector<double> x{3, 1, 2};
  CHECK_THAT(choquet_riemann(x, example_capacity(), 1e-4), WithinAbs(1.7, 1e-3));

  std::vector<double> neg{-1.5, -1.5};
  CHECK_THAT(choquet_riemann(neg, FiniteCapacity::uniform(2), 1e-4), WithinAbs(-1.5, 1e-3));

  // non-normalized capacity, mixed signs: both integral branches in play
  auto half = FiniteCapacity::additive({0.2, 0.3});
  std::vector<double> mixed{0.8, -1.1};
  CHECK_THAT(choquet(mixed, half), WithinAbs(0.2 * 0.8 + 0.3 * (-1.1), 1e-15));
  CHECK_THAT(choquet_riemann(mixed, half, 1e-4), WithinAbs(choquet(mixed, half), 1e-3));

  CHECK_THROWS_AS(choquet_riemann(x01, FiniteCapacity::uniform(2), 0.0), std::invalid_argument);
}

TEST_CASE("choquet is linear exactly in the additive case", "[lab]") {
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    int k = static_cast<int>(rng.integer(2, 8));
    std::vector<double> w, x;
    for (int i = 0; i < k; ++i) {
      w.push_back(rng.uniform(0.0, 1.0));
      x.push_back(rng.uniform(-1.0, 1.0));
    }
    auto nu = FiniteCapacity::additive(w);
    double dot = 0;
    for (int i = 0; i < k; ++i) dot += w[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    REQUIRE_THAT(choquet(x, nu), WithinAbs(dot, 1e-12));
  }
}

TEST_CASE("choquet monotonicity, homogeneity, translation", "[lab]") {
  Rng rng(6);
  auto nu = FiniteCapacity::power_distortion(4, 2.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> x, y, ax, xc;
    double a = rng.uniform(0.0, 2.0), c = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < 4; ++i) {
      x.push_back(rng.uniform(-1.0, 1.0));
      y.push_back(x.back() + rng.uniform(0.0, 0.5));
      ax.push_back(a * x.back());
      xc.push_back(x.back() + c);
    }
    REQUIRE(choquet(x, nu) <= choquet(y, nu) + 1e-12);
    REQUIRE_THAT(choquet(ax, nu), WithinAbs(a * choquet(x, nu), 1e-10));
    REQUIRE_THAT(choquet(xc, nu), WithinAbs(choquet(x, nu) + c * nu.total(), 1e-10));
  }
}

TEST_CASE("charge duality", "[lab]") {
  FiniteFunctional zero = FiniteFunctional::zero(3);
  CHECK(charge_of(zero).weights == std::vector<double>{0, 0, 0});

  FiniteFunctional e0 = FiniteFunctional::vertex(3, 0);
  CHECK(charge_of(e0).of(0b001) == 1.0);
  CHECK(charge_of(e0).of(0b110) == 0.0);

  FiniteFunctional f{{0.4, -0.3, 0.2}};
  CHECK_THAT(charge_of(f).of(0b101), WithinAbs(0.6, 1e-15));  // w_0 + w_2
  CHECK(functional_of(charge_of(f)).weights == f.weights);
  CHECK_THAT(charge_of(f).total_variation(), WithinAbs(0.9, 1e-15));
}

TEST_CASE("lattice operations against the split-enumeration oracle", "[lab]") {
  FiniteFunctional f{{1.0, -1.0}};
  CHECK(positive_part(f).weights == std::vector<double>{1.0, 0.0});
  FiniteFunctional g{{1.0, -1.0}};
  CHECK(lattice_sup(f, g).weights == f.weights);  // idempotent

  FiniteFunctional a{{0.3, -0.5, 0.2}};
  FiniteFunctional b{{-0.1, 0.4, 0.2}};
  CHECK(lattice_sup(a, b).weights == std::vector<double>{0.3, 0.4, 0.2});
  CHECK(lattice_inf(a, b).weights == std::vector<double>{-0.1, -0.5, 0.2});

  // on every indicator, the sup equals the best split f(1_B) + g(1_{A\B})
  for (Mask mask = 0; mask < 8; ++mask) {
    double best = -1e300;
    for (Mask sub = mask;; sub = (sub - 1) & mask) {
      best = std::max(best, a.at_indicator(sub) + b.at_indicator(mask & ~sub));
      if (sub == 0) break;
    }
    REQUIRE_THAT(lattice_sup(a, b).at_indicator(mask), WithinAbs(best, 1e-12));
  }
}

TEST_CASE("norm identity requires f(e) = 0 and holds exhaustively", "[lab]") {
  auto zero = norm_identity_check(FiniteFunctional::zero(4));
  CHECK(zero.pass);
  CHECK(zero.lhs == 0.0);

  auto two = norm_identity_check(FiniteFunctional{{1.0, -1.0}});
  CHECK(two.pass);
  CHECK(two.lhs == 2.0);
  CHECK(two.rhs == 2.0);

  auto mixed = norm_identity_check(FiniteFunctional{{0.3, 0.2, -0.5}});
  CHECK(mixed.pass);
  CHECK_THAT(mixed.lhs, WithinAbs(1.0, 1e-12));
  CHECK_THAT(mixed.rhs, WithinAbs(1.0, 1e-12));

  CHECK_THROWS_AS(norm_identity_check(FiniteFunctional{{0.5, 0.5}}), std::invalid_argument);
}

TEST_CASE("SL membership and vertices", "[lab]") {
  GroundSet g(3, 0b100);  // Z0 = {2}
  CHECK(sl_membership(FiniteFunctional::vertex(3, 0), g));
  CHECK_FALSE(sl_membership(FiniteFunctional::vertex(3, 2), g));  // evaluation at a null atom
  CHECK(sl_membership(FiniteFunctional{{0.5, 0.5, 0.0}}, g));
  CHECK_FALSE(sl_membership(FiniteFunctional{{1.5, -0.5, 0.0}}, g));
  CHECK_FALSE(sl_membership(FiniteFunctional{{0.4, 0.4, 0.2}}, g));

  auto verts = sl_vertices(g);
  REQUIRE(verts.size() == 2);
  CHECK(verts[0].weights == std::vector<double>{1, 0, 0});
  CHECK(verts[1].weights == std::vector<double>{0, 1, 0});

  CHECK(sl_vertices(GroundSet(2, 0b10)).size() == 1);
  CHECK(sl_vertices(GroundSet(4, 0)).size() == 4);

  CHECK_THROWS_AS(GroundSet(3, 0b111), std::invalid_argument);
  CHECK_THROWS_AS(GroundSet(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(GroundSet(17, 0), std::invalid_argument);
}

TEST_CASE("diameter dichotomy", "[lab]") {
  CHECK(sl_diameter(GroundSet(2, 0b10)) == 0.0);   // single free atom
  CHECK(sl_diameter(GroundSet(3, 0b100)) == 2.0);  // |F| = 2
  CHECK(sl_diameter(GroundSet(6, 0b100000)) == 2.0);
  for (int k = 2; k <= 8; ++k)
    for (Mask z0 = 0; z0 + 1 < (Mask{1} << k); ++z0) {
      GroundSet g(k, z0);
      REQUIRE(sl_diameter(g) == (g.free_count() >= 2 ? 2.0 : 0.0));
    }
}

TEST_CASE("difference decomposition", "[lab]") {
  GroundSet g(3, 0b100);

  SECTION("zero functional with a vertex f0") {
    auto d = decompose_difference(FiniteFunctional::zero(3), g, FiniteFunctional::vertex(3, 0));
    CHECK(d.g.weights == std::vector<double>{1, 0, 0});
    CHECK(d.h.weights == d.g.weights);
  }

  SECTION("norm-two functional forces g = f+") {
    auto d = decompose_difference(FiniteFunctional{{1, -1, 0}}, g);
    CHECK(d.g.weights == std::vector<double>{1, 0, 0});
    CHECK(d.h.weights == std::vector<double>{0, 1, 0});
  }

  SECTION("worked half-norm example with f0 = e0") {
    auto d = decompose_difference(FiniteFunctional{{0.5, -0.5, 0}}, g, FiniteFunctional::vertex(3, 0));
    CHECK(d.g.weights == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(d.h.weights == std::vector<double>{0.5, 0.5, 0.0});
    CHECK(sl_membership(d.g, g));
    CHECK(sl_membership(d.h, g));
  }

  SECTION("condition violations are named") {
    try {
      decompose_difference(FiniteFunctional{{1.0, 0.5, 0}}, g);
      FAIL("expected ConditionViolation");
    } catch (const ConditionViolation& e) {
      CHECK_FALSE(e.conditions.sum_zero);
      CHECK(e.conditions.norm_at_most_two);
      CHECK(e.conditions.null_vanishing);
    }
    try {
      decompose_difference(FiniteFunctional{{1.5, -1.5, 0}}, g);
      FAIL("expected ConditionViolation");
    } catch (const ConditionViolation& e) {
      CHECK_FALSE(e.conditions.norm_at_most_two);
    }
    try {
      decompose_difference(FiniteFunctional{{0.1, 0.1, -0.2}}, g);
      FAIL("expected ConditionViolation");
    } catch (const ConditionViolation& e) {
      CHECK_FALSE(e.conditions.null_vanishing);
    }
  }
}

TEST_CASE("uniqueness probe", "[lab]") {
  GroundSet g(3, 0b100);

  auto rigid = decomposition_uniqueness_probe(FiniteFunctional{{1, -1, 0}}, g);
  CHECK(rigid.unique);
  CHECK(rigid.primary.g.weights == std::vector<double>{1, 0, 0});
  CHECK(lattice_inf(rigid.primary.g, rigid.primary.h).norm() == 0.0);

  auto multi = decomposition_uniqueness_probe(FiniteFunctional{{0.5, -0.5, 0}}, g);
  CHECK_FALSE(multi.unique);
  REQUIRE(multi.witnesses);
  const auto& [d1, d2] = *multi.witnesses;
  CHECK(d1.g.weights == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(d2.g.weights == std::vector<double>{0.5, 0.5, 0.0});
  double diff = 0;
  for (int i = 0; i < 3; ++i)
    diff = std::max(diff, std::abs(d1.g.weights[i] - d2.g.weights[i]));
  CHECK(diff >= 1e-6);

  // maximal analogue: a single free atom forces f = 0 and a unique pair
  GroundSet maximal(2, 0b10);
  auto m = decomposition_uniqueness_probe(FiniteFunctional::zero(2), maximal);
  CHECK(m.unique);
}

TEST_CASE("scaled decomposition", "[lab]") {
  GroundSet g(3, 0b100);
  FiniteFunctional f{{1, -1, 0}};

  auto d1 = scaled_decomposition(f, g, 1.0);
  CHECK(d1.g.weights == std::vector<double>{1, 0, 0});

  auto d2 = scaled_decomposition(f, g, 2.0);
  for (int i = 0; i < 3; ++i)
    CHECK_THAT(2.0 * (d2.g.weights[i] - d2.h.weights[i]), WithinAbs(f.weights[i], 1e-12));

  auto z = scaled_decomposition(FiniteFunctional::zero(3), g, 0.5);
  CHECK(z.g.weights == z.h.weights);

  CHECK_THROWS_AS(scaled_decomposition(f, g, 0.5), std::invalid_argument);
}

TEST_CASE("representation check: additive rho on the free part", "[lab]") {
  GroundSet g(3, 0b100);
  std::vector<double> x{0.7, -0.4, 5.0};

  auto vertex = representation_check(FiniteFunctional::vertex(3, 0), x, g);
  CHECK(vertex.pass);
  CHECK(vertex.direct == 0.7);

  auto uniform = representation_check(uniform_on_free(g), x, g);
  CHECK(uniform.pass);
  CHECK_THAT(uniform.direct, WithinAbs(0.15, 1e-12));

  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    FiniteFunctional f = FiniteFunctional::zero(3);
    double a = rng.uniform(0.0, 1.0);
    f.weights[0] = a;
    f.weights[1] = 1.0 - a;
    std::vector<double> xv{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    REQUIRE(representation_check(f, xv, g).pass);
  }

  CHECK_THROWS_AS(representation_check(FiniteFunctional{{0.5, -0.5, 1.0}}, x, g),
                  std::invalid_argument);
}

TEST_CASE("value range ignores null coordinates", "[lab]") {
  std::vector<double> constant{2, 2, 2};
  auto r0 = value_range(constant, GroundSet(3, 0));
  CHECK(r0.lo == 2.0);
  CHECK(r0.hi == 2.0);

  std::vector<double> x{0, 1, 5};
  auto r1 = value_range(x, GroundSet(3, 0b100));
  CHECK(r1.lo == 0.0);
  CHECK(r1.hi == 1.0);  // the null coordinate is invisible

  std::vector<double> y{3, 1, 2};
  auto r2 = value_range(y, GroundSet(3, 0));
  CHECK(r2.lo == 1.0);
  CHECK(r2.hi == 3.0);

  // random SL members land inside; vertices attain the endpoints
  Rng rng(13);
  GroundSet g(4, 0b1000);
  std::vector<double> xv{0.3, -1.2, 0.8, 9.0};
  for (int t = 0; t < 200; ++t) {
    FiniteFunctional f = FiniteFunctional::zero(4);
    double total = 0;
    for (int i : g.free_indices()) {
      f.weights[i] = rng.uniform(0.0, 1.0);
      total += f.weights[i];
    }
    for (double& w : f.weights) w /= total;
    double v = f(xv);
    auto range = value_range(xv, g);
    REQUIRE(v >= range.lo - 1e-12);
    REQUIRE(v <= range.hi + 1e-12);
  }
}
